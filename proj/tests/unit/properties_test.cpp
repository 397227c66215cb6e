// Randomised invariants, each checked on a few hundred seeded instances.
#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "meshsuggest/embeddings.hpp"
#include "meshsuggest/evaluation.hpp"
#include "meshsuggest/lexical_index.hpp"
#include "meshsuggest/query.hpp"
#include "meshsuggest/service.hpp"
#include "meshsuggest/text.hpp"
#include "oracles.hpp"

using namespace meshsuggest;

TEST(Property, RankTermsIsSortedTopKOfFullSort) {
    fixtures::Gen g(1);
    for (int t = 0; t < 200; ++t) {
        auto dim = g.size(1, 16);
        auto store = g.store(g.size(1, 120), dim);
        auto k = g.size(1, 150);
        auto q = g.coin(0.05) ? std::vector<float>(dim, 0.0f) : g.vec(dim);
        auto r = rank_terms(q, store, k);
        ASSERT_EQ(r.entries.size(), std::min(k, store.size()));
        for (std::size_t i = 1; i < r.entries.size(); ++i) {
            const auto& a = r.entries[i - 1];
            const auto& b = r.entries[i];
            ASSERT_TRUE(a.score > b.score || (a.score == b.score && a.uid < b.uid));
        }
        ASSERT_EQ(r.entries, oracle::full_sort_rank(q, store, k).entries);
    }
}

TEST(Property, CombSumBoundsAndOracle) {
    fixtures::Gen g(2);
    for (int t = 0; t < 300; ++t) {
        std::vector<Ranking> in;
        for (std::size_t i = 0, n = g.size(1, 6); i < n; ++i) in.push_back(g.ranking(15, 25));
        auto depth = g.size(1, 30);
        auto out = combsum_fuse(in, depth);
        std::set<std::string> all;
        for (const auto& r : in)
            for (const auto& e : r.entries) all.insert(e.uid);
        ASSERT_EQ(out.entries.size(), std::min(depth, all.size()));
        std::set<std::string> seen;
        for (std::size_t i = 0; i < out.entries.size(); ++i) {
            const auto& e = out.entries[i];
            ASSERT_TRUE(seen.insert(e.uid).second);
            ASSERT_GE(e.score, 0.0);
            ASSERT_LE(e.score, static_cast<double>(in.size()) + 1e-12);
            if (i) ASSERT_GE(out.entries[i - 1].score, e.score);
        }
        auto want = oracle::matrix_combsum(in, depth);
        ASSERT_EQ(out.entries.size(), want.entries.size());
        for (std::size_t i = 0; i < out.entries.size(); ++i) {
            ASSERT_EQ(out.entries[i].uid, want.entries[i].uid);
            ASSERT_NEAR(out.entries[i].score, want.entries[i].score, 1e-9);
        }
    }
}

TEST(Property, CombSumInvariantToPositiveAffineRescaling) {
    fixtures::Gen g(3);
    for (int t = 0; t < 200; ++t) {
        std::vector<Ranking> in;
        for (std::size_t i = 0, n = g.size(1, 5); i < n; ++i) {
            auto r = g.ranking(10, 20);
            // Integer-valued scores keep the rescaled min-max normalisation exact.
            for (auto& e : r.entries) e.score = std::round(e.score * 4);
            in.push_back(std::move(r));
        }
        auto scaled = in;
        for (auto& r : scaled) {
            double a = static_cast<double>(g.size(1, 8)), b = static_cast<double>(g.size(0, 100)) - 50;
            for (auto& e : r.entries) e.score = a * e.score + b;
        }
        auto x = combsum_fuse(in, 12), y = combsum_fuse(scaled, 12);
        ASSERT_EQ(x.entries.size(), y.entries.size());
        for (std::size_t i = 0; i < x.entries.size(); ++i) {
            ASSERT_EQ(x.entries[i].uid, y.entries[i].uid);
            ASSERT_NEAR(x.entries[i].score, y.entries[i].score, 1e-12);
        }
    }
}

TEST(Property, GroupingIsAPartitionMatchingOracle) {
    fixtures::Gen g(4);
    for (int t = 0; t < 200; ++t) {
        const auto n = g.size(1, 9);
        const auto dim = g.size(1, 4);
        std::vector<std::string> kws;
        std::map<std::string, std::vector<double>> table;
        std::vector<std::pair<std::string, std::vector<float>>> rows;
        for (std::size_t i = 0; i < n; ++i) {
            auto kw = "w" + std::to_string(i * 3 + g.size(0, 2));
            kws.push_back(kw);
            if (g.coin(0.1)) {
                table[kw] = std::vector<double>(dim, 0.0);  // out of vocabulary
                continue;
            }
            std::vector<float> v;
            for (std::size_t d = 0; d < dim; ++d) v.push_back(static_cast<float>(g.size(0, 4)) - 2.0f);
            table[kw] = {v.begin(), v.end()};
            rows.emplace_back(kw, v);
        }
        std::shuffle(kws.begin(), kws.end(), g.engine());
        WordVectorModel model(EmbeddingStore::from_vectors(dim, rows));
        const double tau = g.pick(std::vector<double>{-1.0, -0.5, 0.0, 0.3, 0.5, 0.7, 0.9, 1.0, 1.01});
        auto groups = group_keywords(kws, model, tau);

        std::vector<std::string> flat;
        for (const auto& grp : groups) {
            ASSERT_FALSE(grp.empty());
            for (std::size_t i = 1; i < grp.size(); ++i)
                ASSERT_LT(std::find(kws.begin(), kws.end(), grp[i - 1]), std::find(kws.begin(), kws.end(), grp[i]));
            flat.insert(flat.end(), grp.begin(), grp.end());
        }
        auto sorted_flat = flat, sorted_kws = kws;
        std::sort(sorted_flat.begin(), sorted_flat.end());
        std::sort(sorted_kws.begin(), sorted_kws.end());
        ASSERT_EQ(sorted_flat, sorted_kws);
        if (tau > 1.0) ASSERT_EQ(groups.size(), kws.size());
        if (tau <= -1.0) ASSERT_EQ(groups.size(), 1u);
        ASSERT_EQ(groups, oracle::agglomerative(kws, table, tau)) << "tau " << tau;
    }
}

TEST(Property, QueryRenderParseRoundTrip) {
    fixtures::Gen g(5);
    for (int t = 0; t < 500; ++t) {
        auto q = g.query();
        auto text = render_query(q);
        auto back = parse_query(text);
        ASSERT_EQ(back, q) << text;
        ASSERT_EQ(render_query(back), text);
    }
}

TEST(Property, StripMeshIsIdempotentAndKeepsKeywords) {
    fixtures::Gen g(6);
    for (int t = 0; t < 500; ++t) {
        auto q = g.query();
        StructuredQuery s;
        try {
            s = strip_mesh(q);
        } catch (const EmptyAfterStrip&) {
            ASSERT_TRUE(std::all_of(q.clauses.begin(), q.clauses.end(), [](const auto& c) { return c.keywords.empty(); }));
            continue;
        }
        ASSERT_EQ(strip_mesh(s), s);
        std::vector<std::string> before, after;
        for (const auto& c : q.clauses) before.insert(before.end(), c.keywords.begin(), c.keywords.end());
        for (const auto& c : s.clauses) {
            ASSERT_TRUE(c.mesh_terms.empty());
            after.insert(after.end(), c.keywords.begin(), c.keywords.end());
        }
        ASSERT_EQ(before, after);
    }
}

TEST(Property, MetricsStayInRangeAndMatchOracle) {
    fixtures::Gen g(7);
    for (int t = 0; t < 1000; ++t) {
        std::set<std::string> ret, rel;
        for (std::size_t i = 0; i < 20; ++i) {
            if (g.coin(0.3)) ret.insert(std::to_string(i));
            if (g.coin(0.3)) rel.insert(std::to_string(i));
        }
        auto s = score_topic("T", ret, rel);
        auto o = oracle::set_metrics({ret.begin(), ret.end()}, {rel.begin(), rel.end()});
        ASSERT_NEAR(s.precision, o.precision, 1e-12);
        ASSERT_NEAR(s.recall, o.recall, 1e-12);
        ASSERT_NEAR(s.f1, o.f1, 1e-12);
        for (double v : {s.precision, s.recall, s.f1}) {
            ASSERT_GE(v, 0.0);
            ASSERT_LE(v, 1.0);
        }
        ASSERT_LE(s.f1, std::max(s.precision, s.recall) + 1e-15);
        ASSERT_GE(s.f1 + 1e-15, std::min(s.precision, s.recall));
    }
}

TEST(Property, Bm25MatchesOracleOnRandomQueries) {
    auto vocab = load_vocabulary(fixtures::mini_dir() + "/mesh.tsv");
    auto idx = LexicalIndex::build(vocab);
    std::vector<std::string> tokens;
    for (const auto& [uid, term] : vocab.terms())
        for (const auto& tok : lexical_tokens(term.name)) tokens.push_back(tok);
    tokens.push_back("unseen");
    fixtures::Gen g(8);
    for (int t = 0; t < 300; ++t) {
        std::string q;
        for (std::size_t i = 0, n = g.size(1, 4); i < n; ++i) q += (i ? " " : "") + g.pick(tokens);
        if (vocab.lookup_by_name(q)) continue;  // exact matches are boosted by design
        auto got = idx.search(q, 100).entries;
        auto want = oracle::bm25(vocab, q);
        ASSERT_EQ(got.size(), want.size()) << q;
        for (std::size_t i = 0; i < got.size(); ++i) {
            ASSERT_EQ(got[i].uid, want[i].uid) << q;
            ASSERT_NEAR(got[i].score, want[i].score, 1e-12) << q;
        }
    }
}

TEST(Property, WireResponseRoundTrip) {
    fixtures::Gen g(9);
    for (int t = 0; t < 300; ++t) {
        std::vector<ApiSuggestionGroup> groups;
        for (std::size_t i = 0, n = g.size(0, 4); i < n; ++i) {
            ApiSuggestionGroup grp;
            for (std::size_t k = 0, m = g.size(1, 3); k < m; ++k) grp.keywords.push_back(g.word());
            grp.type = g.pick(std::vector<std::string>{"Atomic", "Fragment", "Semantic"});
            for (std::size_t k = 0, m = g.size(0, 12); k < m; ++k) grp.mesh_terms.push_back(g.word() + " \"q\"");
            groups.push_back(std::move(grp));
        }
        auto text = serialize_api_response(groups);
        ASSERT_EQ(parse_api_response(text), groups);
        ASSERT_EQ(serialize_api_response(parse_api_response(text)), text);
    }
}
