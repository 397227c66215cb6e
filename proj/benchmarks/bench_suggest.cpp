#include <benchmark/benchmark.h>

#include "meshsuggest/lexical_index.hpp"
#include "meshsuggest/query.hpp"
#include "meshsuggest/suggesters.hpp"

using namespace meshsuggest;

namespace {

const std::string mini = std::string(MESHSUGGEST_BENCH_DATA_DIR) + "/mini";

const Resources& resources() {
    static const Resources r = [] {
        Resources r;
        r.vocabulary = std::make_shared<const Vocabulary>(load_vocabulary(mini + "/mesh.tsv"));
        r.mesh_embeddings = std::make_shared<const EmbeddingStore>(load_embeddings(mini + "/mesh_embeddings.tsv"));
        r.encoder = std::make_shared<const StoreEncoder>(load_embeddings(mini + "/keyword_embeddings.tsv"));
        r.word_vectors = std::make_shared<const WordVectorModel>(load_word_vectors(mini + "/w2v.tsv"));
        r.lexical_index = std::make_shared<const LexicalIndex>(LexicalIndex::build(*r.vocabulary));
        return r;
    }();
    return r;
}

const std::vector<std::string> keywords = {"tuberculosis", "XDR TB", "glaucoma", "intraocular pressure",
                                           "myocardial infarction", "heart attack"};

void BM_SuggestMethod(benchmark::State& state) {
    MethodRegistry reg;
    const char* names[] = {methods::atomic, methods::fragment, methods::semantic, methods::umls};
    SuggestionRequest req{keywords, names[state.range(0)], 10, 20, 0.7};
    state.SetLabel(req.method);
    for (auto _ : state) benchmark::DoNotOptimize(reg.dispatch(req, resources()));
}
BENCHMARK(BM_SuggestMethod)->DenseRange(0, 3);

void BM_Bm25Search(benchmark::State& state) {
    const auto& idx = *resources().lexical_index;
    for (auto _ : state) benchmark::DoNotOptimize(idx.search("drug resistant pulmonary tuberculosis", 10));
}
BENCHMARK(BM_Bm25Search);

void BM_QueryRoundTrip(benchmark::State& state) {
    const std::string text =
        R"((tuberculosis[tiab] OR "XDR TB"[tiab] OR "Tuberculosis, Multidrug-Resistant"[MeSH Terms]) AND )"
        R"((diagnosis[tiab] OR "rapid test"[tiab] OR "sputum smear"[tiab]))";
    for (auto _ : state) benchmark::DoNotOptimize(render_query(strip_mesh(parse_query(text))));
}
BENCHMARK(BM_QueryRoundTrip);

}  // namespace

BENCHMARK_MAIN();
