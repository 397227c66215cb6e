#pragma once

// Brute-force reference implementations. They share no code with the library beyond its
// plain data types, so agreement between the two is meaningful.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "meshsuggest/embeddings.hpp"
#include "meshsuggest/evaluation.hpp"
#include "meshsuggest/vocabulary.hpp"

namespace oracle {

/// Scores every row, sorts the whole store (score desc, uid asc), keeps k.
meshsuggest::Ranking full_sort_rank(const std::vector<float>& query, const meshsuggest::EmbeddingStore& store,
                                    std::size_t k);

/// Materialises the rankings x uids matrix of min-max normalised scores and sums columns.
meshsuggest::Ranking matrix_combsum(const std::vector<meshsuggest::Ranking>& rankings, std::size_t depth);

/// Plain BM25 (no exact-match boost) by scanning every document for every query token.
std::vector<meshsuggest::ScoredTerm> bm25(const meshsuggest::Vocabulary& vocab, const std::string& query,
                                          double k1 = 1.2, double b = 0.75);

/// Average linkage recomputed from the full pairwise cosine table at every step.
std::vector<std::vector<std::string>> agglomerative(const std::vector<std::string>& keywords,
                                                    const std::map<std::string, std::vector<double>>& word_vectors,
                                                    double tau);

/// Children by an O(N^2) scan over all tree numbers.
std::vector<std::string> children(const meshsuggest::Vocabulary& vocab, const std::string& uid);

struct SetScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// Set metrics with the intersection counted element by element over sorted vectors.
SetScore set_metrics(std::vector<std::string> retrieved, std::vector<std::string> relevant);

struct MacroScore {
    std::map<std::string, SetScore> topics;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

MacroScore macro_metrics(const std::vector<meshsuggest::RunRecord>& run,
                         const std::map<std::string, std::vector<std::string>>& relevant);

}  // namespace oracle
