#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

namespace meshsuggest {

class HttpTransport;

/// Maps free text to concept identifiers (a MetaMap-style tool).
class ConceptMapper {
public:
    virtual ~ConceptMapper() = default;
    /// One concept-id list per text, in input order. Throws UpstreamUnavailable.
    virtual std::vector<std::vector<std::string>> map_concepts(std::span<const std::string> texts) const = 0;
};

/// Remote mapper. POST {"texts": [...]} -> {"concepts": [[id, ...], ...]}.
class HttpConceptMapper final : public ConceptMapper {
public:
    HttpConceptMapper(HttpTransport& transport, std::string endpoint)
        : transport_(transport), endpoint_(std::move(endpoint)) {}
    std::vector<std::vector<std::string>> map_concepts(std::span<const std::string> texts) const override;

private:
    HttpTransport& transport_;
    std::string endpoint_;
};

/// Fixed table keyed by normalised text; unknown text maps to no concepts.
class StubConceptMapper final : public ConceptMapper {
public:
    explicit StubConceptMapper(std::map<std::string, std::vector<std::string>> table);
    std::vector<std::vector<std::string>> map_concepts(std::span<const std::string> texts) const override;

private:
    std::map<std::string, std::vector<std::string>> table_;
};

/// Loads a stub table from TSV: `text<TAB>id;id;...`.
StubConceptMapper load_stub_concept_mapper(const std::string& path);

}  // namespace meshsuggest
