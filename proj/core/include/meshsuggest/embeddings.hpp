#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace meshsuggest {

/// Dense vectors keyed by id, stored row-major with rows sorted by id.
class EmbeddingStore {
public:
    EmbeddingStore() = default;

    /// Throws InvalidArgument on zero dim or duplicate id, DimensionMismatch, NonFiniteValue.
    static EmbeddingStore from_vectors(std::size_t dim,
                                       std::vector<std::pair<std::string, std::vector<float>>> vectors);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t size() const noexcept { return ids_.size(); }
    bool empty() const noexcept { return ids_.empty(); }

    const std::string& id(std::size_t row) const { return ids_.at(row); }
    std::span<const float> row(std::size_t row) const;
    std::optional<std::span<const float>> find(std::string_view id) const;
    const std::vector<std::string>& ids() const noexcept { return ids_; }

private:
    std::size_t dim_ = 0;
    std::vector<std::string> ids_;
    std::vector<float> data_;
    std::map<std::string, std::size_t, std::less<>> rows_;
};

/// Format: first line `dim`, then `id<TAB>v1 v2 ... v_dim`.
/// Throws MissingFile, MalformedRecord, DimensionMismatch, NonFiniteValue.
EmbeddingStore load_embeddings(const std::string& path);
EmbeddingStore parse_embeddings(std::istream& in);
void write_embeddings(const EmbeddingStore& store, std::ostream& out);

/// Token-level word vectors used to group keywords. Keys are lowercase tokens.
class WordVectorModel {
public:
    WordVectorModel() = default;
    explicit WordVectorModel(EmbeddingStore store);

    std::size_t dim() const noexcept { return store_.dim(); }
    std::size_t size() const noexcept { return store_.size(); }

    /// Mean of the vectors of the keyword's lowercase whitespace tokens.
    /// Out-of-vocabulary tokens are skipped; an all-OOV keyword maps to the zero vector.
    std::vector<double> embed(std::string_view keyword) const;

private:
    EmbeddingStore store_;
};

/// Same file format as load_embeddings; ids are lowercased on load (first occurrence wins).
WordVectorModel load_word_vectors(const std::string& path);

struct ScoredTerm {
    std::string uid;
    double score = 0.0;

    bool operator==(const ScoredTerm&) const = default;
};

/// Scores are non-increasing and uids unique.
struct Ranking {
    std::vector<std::string> for_keys;
    std::vector<ScoredTerm> entries;

    bool operator==(const Ranking&) const = default;
};

/// Exhaustive top-k by dot product; ties go to the ascending uid.
/// Throws DimensionMismatch, InvalidArgument (k == 0).
Ranking rank_terms(std::span<const float> query, const EmbeddingStore& store, std::size_t k);

/// Min-max normalised CombSUM. A ranking whose scores are all equal normalises to 1.0.
/// Throws EmptyInput, InvalidArgument (depth == 0 or repeated uid within a ranking).
Ranking combsum_fuse(std::span<const Ranking> rankings, std::size_t depth);

/// Cosine similarity; -1 when either vector is zero.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

/// Average-linkage agglomerative clustering of keywords by cosine similarity of their mean
/// word vectors. Merging stops once the best pair similarity drops below `tau`.
/// Groups keep input order inside and are ordered by their first member.
/// Throws EmptyInput, InvalidArgument (duplicate keyword).
std::vector<std::vector<std::string>> group_keywords(std::span<const std::string> keywords,
                                                     const WordVectorModel& model, double tau);

}  // namespace meshsuggest
