#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "meshsuggest/embeddings.hpp"
#include "meshsuggest/vocabulary.hpp"

namespace meshsuggest {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

/// BM25 index over MeSH headings. Each term is one document made of the lexical tokens of
/// its preferred name followed by those of its entry terms.
///
/// Scoring uses idf = ln(1 + (N - df + 0.5) / (df + 0.5)) and sums over distinct query
/// tokens. Exact matches of the whole normalised query are lifted above every partial match:
/// a preferred-name match ranks above an entry-term match, which ranks above plain BM25 hits.
class LexicalIndex {
public:
    LexicalIndex() = default;
    static LexicalIndex build(const Vocabulary& vocab, Bm25Params params = {});

    Ranking search(std::string_view query, std::size_t k) const;

    std::size_t document_count() const noexcept { return uids_.size(); }
    const Bm25Params& params() const noexcept { return params_; }

private:
    struct Posting {
        std::size_t doc;
        std::size_t tf;
    };

    Bm25Params params_;
    std::vector<std::string> uids_;  // ascending, doc id == position
    std::vector<std::size_t> lengths_;
    double avg_length_ = 0.0;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::unordered_map<std::string, std::size_t> preferred_exact_;
    std::unordered_map<std::string, std::vector<std::size_t>> entry_exact_;
};

}  // namespace meshsuggest
