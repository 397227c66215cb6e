#include <gtest/gtest.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "meshsuggest/errors.hpp"
#include "meshsuggest/suggesters.hpp"

using namespace meshsuggest;

namespace {

const Resources& mini() {
    static const Resources r = fixtures::mini_resources();
    return r;
}

std::vector<std::string> names(const SuggestionGroup& g) {
    std::vector<std::string> out;
    for (const auto& t : g.terms) out.push_back(t.name);
    return out;
}

std::vector<std::vector<std::string>> keyword_sets(const std::vector<SuggestionGroup>& groups) {
    std::vector<std::vector<std::string>> out;
    for (const auto& g : groups) out.push_back(g.keywords);
    return out;
}

void expect_same_terms(const std::vector<SuggestionGroup>& a, const std::vector<SuggestionGroup>& b) {
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(a[i].keywords, b[i].keywords);
        EXPECT_EQ(a[i].terms, b[i].terms);
    }
}

void expect_ranks_dense(const std::vector<SuggestionGroup>& groups) {
    for (const auto& g : groups)
        for (std::size_t i = 0; i < g.terms.size(); ++i) EXPECT_EQ(g.terms[i].rank, i);
}

std::string translation(const std::string& t) {
    return nlohmann::json{{"esearchresult", {{"count", "0"}, {"idlist", nlohmann::json::array()}, {"querytranslation", t}}}}
        .dump();
}

}  // namespace

TEST(Atomic, OneGroupPerKeyword) {
    std::vector<std::string> kws{"tuberculosis", "glaucoma", "heart attack"};
    auto out = suggest_atomic(kws, mini(), 3);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(keyword_sets(out), (std::vector<std::vector<std::string>>{{"tuberculosis"}, {"glaucoma"}, {"heart attack"}}));
    EXPECT_EQ(out[0].terms.front().name, "Tuberculosis");
    EXPECT_EQ(out[1].terms.front().name, "Glaucoma");
    EXPECT_EQ(out[2].terms.front().name, "Myocardial Infarction");
    for (const auto& g : out) {
        EXPECT_EQ(g.terms.size(), 3u);
        EXPECT_EQ(g.method, methods::atomic);
    }
    expect_ranks_dense(out);
}

TEST(Atomic, UnknownKeywordPropagates) {
    std::vector<std::string> kws{"not in the keyword file"};
    EXPECT_THROW(suggest_atomic(kws, mini(), 1), UnknownKeyword);
}

TEST(Fragment, SingleFusedGroup) {
    std::vector<std::string> kws{"myocardial infarction", "heart attack"};
    auto out = suggest_fragment(kws, mini(), 20, 5);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].keywords, kws);
    EXPECT_EQ(out[0].terms.size(), 5u);
    EXPECT_EQ(out[0].terms.front().name, "Myocardial Infarction");
    expect_ranks_dense(out);
}

TEST(Fragment, InterpolationDepthTwentyDepthOneYieldsOneTerm) {
    std::vector<std::string> kws{"glaucoma", "intraocular pressure", "screening"};
    auto out = suggest_fragment(kws, mini(), 20, 1);
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].terms.size(), 1u);
}

TEST(Semantic, GroupsRelatedKeywords) {
    std::vector<std::string> kws{"tuberculosis", "glaucoma", "XDR TB", "intraocular pressure"};
    auto out = suggest_semantic(kws, mini(), 0.7, 20, 3);
    EXPECT_EQ(keyword_sets(out),
              (std::vector<std::vector<std::string>>{{"tuberculosis", "XDR TB"}, {"glaucoma", "intraocular pressure"}}));
    for (const auto& g : out) EXPECT_EQ(g.method, methods::semantic);
    expect_ranks_dense(out);
}

TEST(Coherence, SemanticWithUnreachableTauEqualsAtomic) {
    std::vector<std::string> kws{"tuberculosis", "glaucoma", "XDR TB", "troponin"};
    for (std::size_t depth : {1u, 4u})
        expect_same_terms(suggest_semantic(kws, mini(), 1.01, 20, depth), suggest_atomic(kws, mini(), depth));
}

TEST(Coherence, SemanticWithMinimalTauEqualsFragment) {
    std::vector<std::string> kws{"tuberculosis", "glaucoma", "XDR TB", "troponin"};
    expect_same_terms(suggest_semantic(kws, mini(), -1.0, 20, 6), suggest_fragment(kws, mini(), 20, 6));
}

TEST(Coherence, FragmentOfOneKeywordEqualsAtomic) {
    for (const std::string kw : {"tb", "eye", "biomarker", "sputum smear"}) {
        std::vector<std::string> kws{kw};
        expect_same_terms(suggest_fragment(kws, mini(), 7, 7), suggest_atomic(kws, mini(), 7));
    }
}

TEST(Umls, LexicalTopDepth) {
    std::vector<std::string> kws{"XDR TB", "screening"};
    auto out = suggest_umls(kws, mini(), 2);
    ASSERT_EQ(out.size(), 2u);
    EXPECT_EQ(out[0].terms.front().name, "Extensively Drug-Resistant Tuberculosis");
    EXPECT_EQ(out[1].terms.front().name, "Mass Screening");
    EXPECT_LE(out[0].terms.size(), 2u);
}

TEST(MetaMap, FiltersNonMeshIds) {
    std::vector<std::string> kws{"tuberculosis", "rapid test", "eye", "unmapped"};
    auto out = suggest_metamap(kws, mini());
    ASSERT_EQ(out.size(), 4u);
    EXPECT_EQ(names(out[0]), std::vector<std::string>{"Tuberculosis"});
    EXPECT_EQ(names(out[1]), std::vector<std::string>{"Point-of-Care Testing"});
    EXPECT_EQ(names(out[2]), std::vector<std::string>{"Eye"});
    EXPECT_TRUE(out[3].terms.empty());
}

TEST(Atm, ResolvesTranslatedHeadings) {
    FakeClock clock;
    fixtures::ScriptedTransport t([](const HttpRequest& r) {
        auto term = fixtures::param(r, "term");
        if (term == "XDR TB")
            return HttpResponse{200, translation(R"("extensively drug-resistant tuberculosis"[MeSH Terms] OR "xdr"[All Fields])")};
        if (term == "glaucoma")
            return HttpResponse{200, translation(R"("glaucoma"[MeSH Terms] OR "not in vocab"[MeSH Terms])")};
        return HttpResponse{200, translation(term + "[All Fields]")};
    });
    auto res = mini();
    res.pubmed = std::make_shared<PubmedClient>(t, clock);
    res.email = "a@b.org";
    std::vector<std::string> kws{"XDR TB", "glaucoma", "qwerty"};
    auto out = suggest_atm(kws, res);
    ASSERT_EQ(out.size(), 3u);
    EXPECT_EQ(names(out[0]), std::vector<std::string>{"Extensively Drug-Resistant Tuberculosis"});
    EXPECT_EQ(names(out[1]), std::vector<std::string>{"Glaucoma"});
    EXPECT_TRUE(out[2].terms.empty());
    EXPECT_EQ(t.requests().size(), 3u);
    EXPECT_EQ(fixtures::param(t.requests()[0], "retmax"), "0");
}

TEST(Atm, NeedsPubmedClient) {
    std::vector<std::string> kws{"tb"};
    EXPECT_THROW(suggest_atm(kws, mini()), InvalidArgument);
}

TEST(Resources, MissingPiecesAreReported) {
    Resources empty;
    std::vector<std::string> kws{"tb"};
    EXPECT_THROW(suggest_atomic(kws, empty, 1), InvalidArgument);
    EXPECT_THROW(suggest_umls(kws, empty, 1), InvalidArgument);
    auto no_w2v = mini();
    no_w2v.word_vectors.reset();
    EXPECT_THROW(suggest_semantic(kws, no_w2v, 0.7, 20, 1), InvalidArgument);
}

TEST(Registry, DispatchMatchesDirectCalls) {
    MethodRegistry reg;
    SuggestionRequest req{{"tuberculosis", "XDR TB"}, methods::semantic, 2, 20, 0.7};
    expect_same_terms(reg.dispatch(req, mini()), suggest_semantic(req.keywords, mini(), 0.7, 20, 2));
    req.method = methods::fragment;
    expect_same_terms(reg.dispatch(req, mini()), suggest_fragment(req.keywords, mini(), 20, 2));
    req.method = methods::atomic;
    expect_same_terms(reg.dispatch(req, mini()), suggest_atomic(req.keywords, mini(), 2));
}

TEST(Registry, ValidatesRequests) {
    MethodRegistry reg;
    EXPECT_THROW(reg.dispatch({{}, methods::atomic}, mini()), EmptyInput);
    EXPECT_THROW(reg.dispatch({{"tb", "TB"}, methods::atomic}, mini()), InvalidArgument);
    EXPECT_THROW(reg.dispatch({{"  "}, methods::atomic}, mini()), InvalidArgument);
    EXPECT_THROW(reg.dispatch({{"tb"}, methods::atomic, 0}, mini()), InvalidArgument);
    EXPECT_THROW(reg.dispatch({{"tb"}, methods::fragment, 5, 4}, mini()), InvalidArgument);
}

TEST(Registry, UnregisteredNewIsUnknownMethod) {
    MethodRegistry reg;
    EXPECT_FALSE(reg.contains(methods::user_defined));
    EXPECT_THROW(reg.dispatch({{"tb"}, methods::user_defined}, mini()), UnknownMethod);
    EXPECT_THROW(reg.dispatch({{"tb"}, "Bogus"}, mini()), UnknownMethod);
}

TEST(Registry, UserMethodOutputIsReturnedVerbatim) {
    MethodRegistry reg;
    reg.register_method(methods::user_defined, [](std::span<const std::string> kws, const Resources&) {
        return std::vector<KeywordGroupUids>{{{kws.begin(), kws.end()}, {"D005123", "D014376", "X-CUSTOM"}}};
    });
    EXPECT_TRUE(reg.contains(methods::user_defined));
    auto out = reg.dispatch({{"a", "b"}, methods::user_defined}, mini());
    ASSERT_EQ(out.size(), 1u);
    EXPECT_EQ(out[0].method, methods::user_defined);
    EXPECT_EQ(out[0].keywords, (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(out[0].terms, (std::vector<SuggestedTerm>{{0, "Eye", "D005123"}, {1, "Tuberculosis", "D014376"},
                                                        {2, "X-CUSTOM", "X-CUSTOM"}}));
}

TEST(Registry, DuplicateRegistration) {
    MethodRegistry reg;
    auto fn = [](std::span<const std::string>, const Resources&) { return std::vector<KeywordGroupUids>{}; };
    reg.register_method("Mine", fn);
    EXPECT_THROW(reg.register_method("Mine", fn), DuplicateRegistration);
    EXPECT_THROW(reg.register_method(methods::atomic, fn), DuplicateRegistration);
    EXPECT_EQ(reg.names().back(), "Mine");
}
