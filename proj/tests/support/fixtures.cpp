#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "meshsuggest/concept_mapper.hpp"
#include "meshsuggest/encoder.hpp"
#include "meshsuggest/errors.hpp"
#include "meshsuggest/lexical_index.hpp"
#include "meshsuggest/vocabulary.hpp"

namespace fixtures {

namespace fs = std::filesystem;

std::string data_dir() { return MESHSUGGEST_TEST_DATA_DIR; }
std::string mini_dir() { return data_dir() + "/mini"; }
std::string golden_dir() { return MESHSUGGEST_TEST_GOLDEN_DIR; }

std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw meshsuggest::MissingFile(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

TempDir::TempDir() {
    std::random_device rd;
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto candidate = fs::temp_directory_path() / ("meshsuggest-test-" + std::to_string(rd()));
        if (fs::create_directory(candidate)) {
            root_ = candidate;
            return;
        }
    }
    throw std::runtime_error("cannot create a temporary directory");
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(root_, ec);
}

meshsuggest::Resources mini_resources() {
    using namespace meshsuggest;
    Resources r;
    auto dir = mini_dir();
    r.vocabulary = std::make_shared<const Vocabulary>(load_vocabulary(dir + "/mesh.tsv"));
    r.mesh_embeddings = std::make_shared<const EmbeddingStore>(load_embeddings(dir + "/mesh_embeddings.tsv"));
    r.encoder = std::make_shared<const StoreEncoder>(load_embeddings(dir + "/keyword_embeddings.tsv"));
    r.word_vectors = std::make_shared<const WordVectorModel>(load_word_vectors(dir + "/w2v.tsv"));
    r.lexical_index = std::make_shared<const LexicalIndex>(LexicalIndex::build(*r.vocabulary));
    r.concept_mapper = std::make_shared<const StubConceptMapper>(load_stub_concept_mapper(dir + "/metamap.tsv"));
    return r;
}

meshsuggest::HttpResponse ScriptedTransport::send(const meshsuggest::HttpRequest& request) {
    {
        std::lock_guard lock(mu_);
        seen_.push_back(request);
    }
    return handler_(request);
}

std::vector<meshsuggest::HttpRequest> ScriptedTransport::requests() const {
    std::lock_guard lock(mu_);
    return seen_;
}

std::string param(const meshsuggest::HttpRequest& req, const std::string& key) {
    for (const auto& [k, v] : req.params)
        if (k == key) return v;
    return {};
}

std::string Gen::uid(std::size_t i) const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "D%06zu", i);
    return buf;
}

std::vector<float> Gen::vec(std::size_t dim) {
    std::vector<float> v(dim);
    for (auto& x : v) x = static_cast<float>(real(-1.0, 1.0));
    return v;
}

meshsuggest::EmbeddingStore Gen::store(std::size_t n, std::size_t dim) {
    std::vector<std::pair<std::string, std::vector<float>>> rows;
    std::vector<std::size_t> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = i * 7 + size(0, 6);
    std::shuffle(ids.begin(), ids.end(), rng_);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<float> v;
        if (i > 0 && coin(0.05))
            v = rows[size(0, i - 1)].second;
        else if (coin(0.02))
            v.assign(dim, 0.0f);
        else
            v = vec(dim);
        rows.emplace_back(uid(ids[i]), std::move(v));
    }
    return meshsuggest::EmbeddingStore::from_vectors(dim, std::move(rows));
}

meshsuggest::Ranking Gen::ranking(std::size_t max_len, std::size_t universe) {
    meshsuggest::Ranking r;
    std::vector<std::size_t> pool(universe);
    for (std::size_t i = 0; i < universe; ++i) pool[i] = i;
    std::shuffle(pool.begin(), pool.end(), rng_);
    const std::size_t len = size(0, std::min(max_len, universe));
    const bool coarse = coin(0.3);
    for (std::size_t i = 0; i < len; ++i) {
        double s = coarse ? static_cast<double>(size(0, 4)) * 0.25 : real(-5.0, 5.0);
        r.entries.push_back({uid(pool[i]), s});
    }
    std::sort(r.entries.begin(), r.entries.end(), [](const auto& a, const auto& b) { return a.score > b.score; });
    r.for_keys = {"k" + std::to_string(size(0, 99))};
    return r;
}

std::string Gen::word() {
    static const std::vector<std::string> words = {
        "tb",        "tuberculosis", "child",    "glaucoma", "screening", "heart",    "attack", "troponin",
        "xdr-tb",    "MDR",          "pressure", "eye",      "diagnosis", "sputum",   "smear",  "biomarker",
        "and-older", "covid-19",     "O'Brien",  "cancer",   "risk",      "children", "adult",  "infarction"};
    return pick(words);
}

meshsuggest::StructuredQuery Gen::query() {
    meshsuggest::StructuredQuery q;
    const std::size_t clauses = size(1, 5);
    for (std::size_t c = 0; c < clauses; ++c) {
        meshsuggest::BooleanClause clause;
        const std::size_t kws = size(0, 4);
        const std::size_t mesh = kws == 0 ? size(1, 3) : size(0, 3);
        auto term = [&] {
            std::string t = word();
            const std::size_t extra = size(0, 2);
            for (std::size_t i = 0; i < extra; ++i) t += (coin(0.8) ? " " : ", ") + word();
            if (coin(0.1)) t = "(" + t + ")";
            if (coin(0.05)) t = coin() ? "OR" : "and";
            return t;
        };
        for (std::size_t i = 0; i < kws; ++i) clause.keywords.push_back(term());
        for (std::size_t i = 0; i < mesh; ++i) clause.mesh_terms.push_back(term());
        q.clauses.push_back(std::move(clause));
    }
    return q;
}

}  // namespace fixtures
