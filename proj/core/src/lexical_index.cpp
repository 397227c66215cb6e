#include "meshsuggest/lexical_index.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "meshsuggest/errors.hpp"
#include "meshsuggest/text.hpp"

namespace meshsuggest {

LexicalIndex LexicalIndex::build(const Vocabulary& vocab, Bm25Params params) {
    LexicalIndex idx;
    idx.params_ = params;
    std::size_t total = 0;
    for (const auto& [uid, term] : vocab.terms()) {
        const std::size_t doc = idx.uids_.size();
        idx.uids_.push_back(uid);

        auto tokens = lexical_tokens(term.name);
        for (const auto& e : term.entry_terms) {
            auto more = lexical_tokens(e);
            tokens.insert(tokens.end(), more.begin(), more.end());
        }
        idx.lengths_.push_back(tokens.size());
        total += tokens.size();

        std::map<std::string, std::size_t> tf;
        for (auto& t : tokens) ++tf[t];
        for (auto& [t, n] : tf) idx.postings_[t].push_back({doc, n});

        idx.preferred_exact_.emplace(normalize_name(term.name), doc);
        for (const auto& e : term.entry_terms) {
            auto& docs = idx.entry_exact_[normalize_name(e)];
            if (docs.empty() || docs.back() != doc) docs.push_back(doc);
        }
    }
    idx.avg_length_ = idx.uids_.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(idx.uids_.size());
    return idx;
}

Ranking LexicalIndex::search(std::string_view query, std::size_t k) const {
    if (k == 0) throw InvalidArgument("k must be positive");
    Ranking out;
    out.for_keys.emplace_back(query);
    if (uids_.empty()) return out;

    const double n = static_cast<double>(uids_.size());
    std::map<std::size_t, double> scores;
    double ceiling = 1.0;  // strict upper bound on any BM25 score for this query
    std::set<std::string> distinct;
    for (auto& t : lexical_tokens(query)) distinct.insert(std::move(t));
    for (const auto& token : distinct) {
        auto it = postings_.find(token);
        if (it == postings_.end()) continue;
        const double df = static_cast<double>(it->second.size());
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        ceiling += idf * (params_.k1 + 1.0);
        for (const auto& p : it->second) {
            const double tf = static_cast<double>(p.tf);
            const double norm = params_.k1 * (1.0 - params_.b + params_.b * static_cast<double>(lengths_[p.doc]) / avg_length_);
            scores[p.doc] += idf * tf * (params_.k1 + 1.0) / (tf + norm);
        }
    }

    auto key = normalize_name(query);
    if (auto it = entry_exact_.find(key); it != entry_exact_.end())
        for (auto doc : it->second) scores[doc] += ceiling;
    if (auto it = preferred_exact_.find(key); it != preferred_exact_.end()) {
        // Any entry-term boost on the same document is replaced, not stacked.
        double& s = scores[it->second];
        if (s >= ceiling) s -= ceiling;
        s += 2.0 * ceiling;
    }

    for (const auto& [doc, s] : scores) out.entries.push_back({uids_[doc], s});
    auto better = [](const ScoredTerm& a, const ScoredTerm& b) {
        return a.score != b.score ? a.score > b.score : a.uid < b.uid;
    };
    auto m = std::min(k, out.entries.size());
    std::partial_sort(out.entries.begin(), out.entries.begin() + static_cast<std::ptrdiff_t>(m), out.entries.end(),
                      better);
    out.entries.resize(m);
    return out;
}

}  // namespace meshsuggest
