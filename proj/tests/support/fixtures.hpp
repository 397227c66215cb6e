#pragma once

#include <filesystem>
#include <functional>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "meshsuggest/embeddings.hpp"
#include "meshsuggest/evaluation.hpp"
#include "meshsuggest/http.hpp"
#include "meshsuggest/query.hpp"
#include "meshsuggest/suggesters.hpp"

namespace fixtures {

std::string data_dir();    // bundled datasets
std::string mini_dir();    // data_dir()/mini
std::string golden_dir();  // committed golden outputs

std::string read(const std::string& path);
void write(const std::string& path, const std::string& content);

/// Fresh directory removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    std::string path(const std::string& name) const { return (root_ / name).string(); }
    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path root_;
};

/// MINI vocabulary, MeSH embeddings, keyword store encoder, word vectors, BM25 index and the
/// stub concept mapper. No PubMed client.
meshsuggest::Resources mini_resources();

/// Transport answering from a callback; keeps every request it saw.
class ScriptedTransport final : public meshsuggest::HttpTransport {
public:
    using Handler = std::function<meshsuggest::HttpResponse(const meshsuggest::HttpRequest&)>;
    explicit ScriptedTransport(Handler handler) : handler_(std::move(handler)) {}
    meshsuggest::HttpResponse send(const meshsuggest::HttpRequest& request) override;
    std::vector<meshsuggest::HttpRequest> requests() const;

private:
    Handler handler_;
    mutable std::mutex mu_;
    std::vector<meshsuggest::HttpRequest> seen_;
};

std::string param(const meshsuggest::HttpRequest& req, const std::string& key);

/// Seeded generators for property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    std::size_t size(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }
    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
    template <class T>
    const T& pick(const std::vector<T>& items) {
        return items[size(0, items.size() - 1)];
    }
    std::mt19937_64& engine() { return rng_; }

    std::string uid(std::size_t i) const;
    /// `n` vectors of `dim` components; a few duplicates and zero rows plant exact ties.
    meshsuggest::EmbeddingStore store(std::size_t n, std::size_t dim);
    std::vector<float> vec(std::size_t dim);
    /// Scores drawn from a small grid so equal scores (and degenerate max == min) occur.
    meshsuggest::Ranking ranking(std::size_t max_len, std::size_t universe);
    meshsuggest::StructuredQuery query();
    std::string word();

private:
    std::mt19937_64 rng_;
};

}  // namespace fixtures
