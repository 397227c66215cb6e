#include <random>

#include <benchmark/benchmark.h>

#include "meshsuggest/embeddings.hpp"

using namespace meshsuggest;

namespace {

EmbeddingStore random_store(std::size_t n, std::size_t dim, std::mt19937_64& rng) {
    std::normal_distribution<float> d;
    std::vector<std::pair<std::string, std::vector<float>>> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<float> v(dim);
        for (auto& x : v) x = d(rng);
        char uid[24];
        std::snprintf(uid, sizeof uid, "D%06zu", i);
        rows.emplace_back(uid, std::move(v));
    }
    return EmbeddingStore::from_vectors(dim, std::move(rows));
}

// Full MeSH is roughly 30k descriptors; BERT-base embeddings are 768-d.
void BM_RankTerms(benchmark::State& state) {
    std::mt19937_64 rng(7);
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto dim = static_cast<std::size_t>(state.range(1));
    auto store = random_store(n, dim, rng);
    auto query = random_store(1, dim, rng).row(0);
    std::vector<float> q(query.begin(), query.end());
    for (auto _ : state) benchmark::DoNotOptimize(rank_terms(q, store, 20));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}
BENCHMARK(BM_RankTerms)->Args({1000, 64})->Args({30000, 128})->Args({30000, 768})->Unit(benchmark::kMillisecond);

void BM_CombSum(benchmark::State& state) {
    std::mt19937_64 rng(11);
    const auto rankings = static_cast<std::size_t>(state.range(0));
    std::uniform_int_distribution<int> pick(0, 199);
    std::vector<Ranking> in(rankings);
    for (auto& r : in) {
        std::vector<bool> used(200);
        double s = 1.0;
        while (r.entries.size() < 20) {
            int u = pick(rng);
            if (used[u]) continue;
            used[u] = true;
            r.entries.push_back({"D" + std::to_string(u), s -= 0.01});
        }
    }
    for (auto _ : state) benchmark::DoNotOptimize(combsum_fuse(in, 10));
}
BENCHMARK(BM_CombSum)->Arg(2)->Arg(8)->Arg(32);

void BM_GroupKeywords(benchmark::State& state) {
    std::mt19937_64 rng(13);
    const auto n = static_cast<std::size_t>(state.range(0));
    auto store = random_store(n, 100, rng);
    WordVectorModel model(store);
    std::vector<std::string> keywords;
    for (const auto& id : store.ids()) keywords.push_back(id);
    for (auto _ : state) benchmark::DoNotOptimize(group_keywords(keywords, model, 0.2));
}
BENCHMARK(BM_GroupKeywords)->Arg(5)->Arg(20)->Arg(80);

}  // namespace
