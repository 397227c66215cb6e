#include "meshsuggest/suggesters.hpp"

#include <algorithm>
#include <set>

#include "meshsuggest/errors.hpp"
#include "meshsuggest/text.hpp"

namespace meshsuggest {

namespace {

template <typename T>
T& require(const std::shared_ptr<T>& p, const char* what) {
    if (!p) throw InvalidArgument(std::string("resource not loaded: ") + what);
    return *p;
}

SuggestionGroup group_from_uids(std::vector<std::string> keywords, const char* method,
                                const std::vector<std::string>& uids, const Vocabulary& vocab) {
    SuggestionGroup g{std::move(keywords), method, {}};
    for (const auto& uid : uids) {
        if (std::any_of(g.terms.begin(), g.terms.end(), [&](const auto& t) { return t.uid == uid; })) continue;
        g.terms.push_back({g.terms.size(), vocab.at(uid).name, uid});
    }
    return g;
}

std::vector<std::string> uids_of(const Ranking& r) {
    std::vector<std::string> out;
    out.reserve(r.entries.size());
    for (const auto& e : r.entries) out.push_back(e.uid);
    return out;
}

void check_keywords(std::span<const std::string> keywords) {
    if (keywords.empty()) throw EmptyInput("no keywords");
}

void check_depth(std::size_t depth) {
    if (depth == 0) throw InvalidArgument("depth must be positive");
}

std::vector<Ranking> dense_rankings(std::span<const std::string> keywords, const Resources& res, std::size_t k) {
    const auto& encoder = require(res.encoder, "query encoder");
    const auto& store = require(res.mesh_embeddings, "MeSH embeddings");
    auto vectors = encoder.encode(keywords);
    std::vector<Ranking> out;
    out.reserve(keywords.size());
    for (std::size_t i = 0; i < keywords.size(); ++i) {
        auto r = rank_terms(vectors[i], store, k);
        r.for_keys = {keywords[i]};
        out.push_back(std::move(r));
    }
    return out;
}

SuggestionGroup fuse_group(std::span<const Ranking> rankings, std::vector<std::string> keywords, const char* method,
                           std::size_t depth, const Vocabulary& vocab) {
    return group_from_uids(std::move(keywords), method, uids_of(combsum_fuse(rankings, depth)), vocab);
}

}  // namespace

const Vocabulary& Resources::vocab() const { return require(vocabulary, "MeSH vocabulary"); }

void SuggestionRequest::validate() const {
    if (keywords.empty()) throw EmptyInput("request has no keywords");
    std::set<std::string> seen;
    for (const auto& k : keywords) {
        auto n = normalize_name(k);
        if (n.empty()) throw InvalidArgument("blank keyword");
        if (!seen.insert(n).second) throw InvalidArgument("duplicate keyword: " + k);
    }
    if (depth == 0) throw InvalidArgument("depth must be positive");
    if (interpolation_depth < depth) throw InvalidArgument("interpolation_depth must be at least depth");
}

std::vector<SuggestionGroup> suggest_atm(std::span<const std::string> keywords, const Resources& res) {
    check_keywords(keywords);
    const auto& vocab = res.vocab();
    auto& pubmed = require(res.pubmed, "PubMed client");
    std::vector<SuggestionGroup> out;
    for (const auto& k : keywords) {
        std::vector<std::string> uids;
        for (const auto& name : parse_atm_translation(pubmed.translate(k, res.email)))
            if (auto uid = vocab.lookup_by_name(name)) uids.push_back(*uid);
        out.push_back(group_from_uids({k}, methods::atm, uids, vocab));
    }
    return out;
}

std::vector<SuggestionGroup> suggest_umls(std::span<const std::string> keywords, const Resources& res,
                                          std::size_t depth) {
    check_keywords(keywords);
    check_depth(depth);
    const auto& vocab = res.vocab();
    const auto& index = require(res.lexical_index, "lexical index");
    std::vector<SuggestionGroup> out;
    for (const auto& k : keywords) out.push_back(group_from_uids({k}, methods::umls, uids_of(index.search(k, depth)), vocab));
    return out;
}

std::vector<SuggestionGroup> suggest_metamap(std::span<const std::string> keywords, const Resources& res) {
    check_keywords(keywords);
    const auto& vocab = res.vocab();
    const auto& mapper = require(res.concept_mapper, "concept mapper");
    auto concepts = mapper.map_concepts(keywords);
    if (concepts.size() != keywords.size()) throw UpstreamUnavailable("concept mapper result count mismatch");
    std::vector<SuggestionGroup> out;
    for (std::size_t i = 0; i < keywords.size(); ++i) {
        std::vector<std::string> uids;
        for (const auto& id : concepts[i])
            if (vocab.contains(id)) uids.push_back(id);
        out.push_back(group_from_uids({keywords[i]}, methods::metamap, uids, vocab));
    }
    return out;
}

std::vector<SuggestionGroup> suggest_atomic(std::span<const std::string> keywords, const Resources& res,
                                            std::size_t depth) {
    check_keywords(keywords);
    check_depth(depth);
    const auto& vocab = res.vocab();
    std::vector<SuggestionGroup> out;
    auto rankings = dense_rankings(keywords, res, depth);
    for (std::size_t i = 0; i < keywords.size(); ++i)
        out.push_back(group_from_uids({keywords[i]}, methods::atomic, uids_of(rankings[i]), vocab));
    return out;
}

std::vector<SuggestionGroup> suggest_fragment(std::span<const std::string> keywords, const Resources& res,
                                              std::size_t interpolation_depth, std::size_t depth) {
    check_keywords(keywords);
    check_depth(depth);
    check_depth(interpolation_depth);
    const auto& vocab = res.vocab();
    auto rankings = dense_rankings(keywords, res, interpolation_depth);
    std::vector<SuggestionGroup> out;
    out.push_back(fuse_group(rankings, {keywords.begin(), keywords.end()}, methods::fragment, depth, vocab));
    return out;
}

std::vector<SuggestionGroup> suggest_semantic(std::span<const std::string> keywords, const Resources& res,
                                              double tau, std::size_t interpolation_depth, std::size_t depth) {
    check_keywords(keywords);
    check_depth(depth);
    check_depth(interpolation_depth);
    const auto& vocab = res.vocab();
    const auto& w2v = require(res.word_vectors, "word vector model");
    auto groups = group_keywords(keywords, w2v, tau);

    // Encode every keyword once, then fuse within each group.
    auto rankings = dense_rankings(keywords, res, interpolation_depth);
    std::vector<SuggestionGroup> out;
    for (auto& g : groups) {
        std::vector<Ranking> members;
        for (const auto& k : g) {
            auto pos = std::find(keywords.begin(), keywords.end(), k) - keywords.begin();
            members.push_back(rankings[static_cast<std::size_t>(pos)]);
        }
        out.push_back(fuse_group(members, std::move(g), methods::semantic, depth, vocab));
    }
    return out;
}

MethodRegistry::MethodRegistry() = default;

bool MethodRegistry::is_builtin(const std::string& name) {
    return name == methods::atm || name == methods::metamap || name == methods::umls || name == methods::atomic ||
           name == methods::fragment || name == methods::semantic;
}

void MethodRegistry::register_method(const std::string& name, UserMethod fn) {
    if (name.empty()) throw InvalidArgument("method name is empty");
    if (!fn) throw InvalidArgument("method function is empty");
    std::lock_guard lock(mu_);
    if (is_builtin(name) || user_.count(name)) throw DuplicateRegistration(name);
    user_.emplace(name, std::move(fn));
}

bool MethodRegistry::contains(const std::string& name) const {
    if (is_builtin(name)) return true;
    std::lock_guard lock(mu_);
    return user_.count(name) > 0;
}

std::vector<std::string> MethodRegistry::names() const {
    std::vector<std::string> out = {methods::atm,    methods::metamap,  methods::umls,
                                    methods::atomic, methods::fragment, methods::semantic};
    std::lock_guard lock(mu_);
    for (const auto& [name, fn] : user_) out.push_back(name);
    return out;
}

std::vector<SuggestionGroup> MethodRegistry::dispatch(const SuggestionRequest& req, const Resources& res) const {
    const auto& m = req.method;
    if (!contains(m)) throw UnknownMethod(m);
    req.validate();
    const std::span<const std::string> kw(req.keywords);

    if (m == methods::atm) return suggest_atm(kw, res);
    if (m == methods::metamap) return suggest_metamap(kw, res);
    if (m == methods::umls) return suggest_umls(kw, res, req.depth);
    if (m == methods::atomic) return suggest_atomic(kw, res, req.depth);
    if (m == methods::fragment) return suggest_fragment(kw, res, req.interpolation_depth, req.depth);
    if (m == methods::semantic) return suggest_semantic(kw, res, req.tau, req.interpolation_depth, req.depth);

    UserMethod fn;
    {
        std::lock_guard lock(mu_);
        auto it = user_.find(m);
        if (it == user_.end()) throw UnknownMethod(m);
        fn = it->second;
    }
    std::vector<SuggestionGroup> out;
    for (auto& g : fn(kw, res)) {
        SuggestionGroup group{std::move(g.keywords), m, {}};
        for (auto& uid : g.uids) {
            const auto* term = res.vocabulary ? res.vocabulary->find(uid) : nullptr;
            group.terms.push_back({group.terms.size(), term ? term->name : uid, std::move(uid)});
        }
        out.push_back(std::move(group));
    }
    return out;
}

}  // namespace meshsuggest
