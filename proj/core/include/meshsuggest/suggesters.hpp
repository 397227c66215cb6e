#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "meshsuggest/concept_mapper.hpp"
#include "meshsuggest/embeddings.hpp"
#include "meshsuggest/encoder.hpp"
#include "meshsuggest/lexical_index.hpp"
#include "meshsuggest/pubmed.hpp"
#include "meshsuggest/vocabulary.hpp"

namespace meshsuggest {

namespace methods {
inline constexpr const char* atm = "ATM";
inline constexpr const char* metamap = "MetaMap";
inline constexpr const char* umls = "UMLS";
inline constexpr const char* atomic = "Atomic-BERT";
inline constexpr const char* fragment = "Fragment-BERT";
inline constexpr const char* semantic = "Semantic-BERT";
inline constexpr const char* user_defined = "NEW";
}  // namespace methods

struct SuggestionRequest {
    std::vector<std::string> keywords;
    std::string method;
    std::size_t depth = 1;
    std::size_t interpolation_depth = 20;
    double tau = 0.7;  // keyword grouping threshold, Semantic-BERT only

    /// Non-empty, non-blank, distinct keywords; 1 <= depth <= interpolation_depth.
    /// Throws EmptyInput or InvalidArgument.
    void validate() const;
};

struct SuggestedTerm {
    std::size_t rank = 0;
    std::string name;
    std::string uid;

    bool operator==(const SuggestedTerm&) const = default;
};

struct SuggestionGroup {
    std::vector<std::string> keywords;
    std::string method;
    std::vector<SuggestedTerm> terms;  // ranks 0, 1, 2, ...
};

/// Loaded models and clients shared by all suggestion methods. Every member is optional;
/// a method throws InvalidArgument when something it needs is missing.
struct Resources {
    std::shared_ptr<const Vocabulary> vocabulary;
    std::shared_ptr<const EmbeddingStore> mesh_embeddings;
    std::shared_ptr<const QueryEncoder> encoder;
    std::shared_ptr<const WordVectorModel> word_vectors;
    std::shared_ptr<const LexicalIndex> lexical_index;
    std::shared_ptr<const ConceptMapper> concept_mapper;
    std::shared_ptr<PubmedClient> pubmed;
    std::string email;

    const Vocabulary& vocab() const;
};

/// ATM: MeSH headings from PubMed's translation of each keyword, resolved against the
/// vocabulary (headings the vocabulary does not know are dropped).
std::vector<SuggestionGroup> suggest_atm(std::span<const std::string> keywords, const Resources& res);

/// UMLS-style lexical search: BM25 over MeSH names and entry terms, top `depth` per keyword.
std::vector<SuggestionGroup> suggest_umls(std::span<const std::string> keywords, const Resources& res,
                                          std::size_t depth);

/// MetaMap-style: concept ids from the mapper that are MeSH uids in the vocabulary.
std::vector<SuggestionGroup> suggest_metamap(std::span<const std::string> keywords, const Resources& res);

/// Dense ranking per keyword, top `depth`.
std::vector<SuggestionGroup> suggest_atomic(std::span<const std::string> keywords, const Resources& res,
                                            std::size_t depth);

/// Dense rankings cut at `interpolation_depth`, fused across all keywords into one group.
std::vector<SuggestionGroup> suggest_fragment(std::span<const std::string> keywords, const Resources& res,
                                              std::size_t interpolation_depth, std::size_t depth);

/// Keywords grouped by word-vector similarity, then fragment-style fusion per group.
std::vector<SuggestionGroup> suggest_semantic(std::span<const std::string> keywords, const Resources& res,
                                              double tau, std::size_t interpolation_depth, std::size_t depth);

/// Output of a user-defined method: keyword groups with MeSH uids in rank order.
struct KeywordGroupUids {
    std::vector<std::string> keywords;
    std::vector<std::string> uids;
};

using UserMethod = std::function<std::vector<KeywordGroupUids>(std::span<const std::string> keywords,
                                                               const Resources& res)>;

/// Routes requests to the six built-in methods and to user-registered ones ("NEW" and any
/// other free name). Thread-safe.
class MethodRegistry {
public:
    MethodRegistry();

    /// Throws DuplicateRegistration when the name is built in or already registered.
    void register_method(const std::string& name, UserMethod fn);

    bool contains(const std::string& name) const;
    std::vector<std::string> names() const;
    static bool is_builtin(const std::string& name);

    /// Validates the request and runs the method. Throws UnknownMethod for names with no
    /// implementation, including an unregistered "NEW".
    std::vector<SuggestionGroup> dispatch(const SuggestionRequest& request, const Resources& res) const;

private:
    mutable std::mutex mu_;
    std::map<std::string, UserMethod> user_;
};

}  // namespace meshsuggest
