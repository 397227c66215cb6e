#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace meshsuggest {

struct SuggestionGroup;

/// OR-connected keywords and MeSH headings.
struct BooleanClause {
    std::vector<std::string> keywords;
    std::vector<std::string> mesh_terms;

    bool operator==(const BooleanClause&) const = default;
};

/// AND-connected clauses.
struct StructuredQuery {
    std::vector<BooleanClause> clauses;

    bool operator==(const StructuredQuery&) const = default;
};

/// Parses a PubMed-style AND-of-ORs query.
///
/// Atoms are a quoted phrase or a run of bare words, optionally followed by a field tag.
/// `[tiab]`, `[Title/Abstract]` and untagged atoms are keywords; `[MeSH]`, `[MeSH Terms]` and
/// `[mh]` are MeSH headings. Operators AND/OR/NOT are case-insensitive and, as in PubMed,
/// evaluated left to right without precedence.
///
/// Throws SyntaxError for malformed text and UnsupportedStructure for NOT, other field tags,
/// or nesting that does not reduce to AND-of-ORs.
StructuredQuery parse_query(std::string_view text);

/// Drops MeSH headings and any clause left without keywords. Throws EmptyAfterStrip.
StructuredQuery strip_mesh(const StructuredQuery& query);

/// Appends each group's term names to the first clause whose keywords contain all of the
/// group's keywords (normalised comparison). Duplicates are skipped.
/// Throws UnmatchedGroup.
StructuredQuery attach_mesh(const StructuredQuery& query, std::span<const SuggestionGroup> groups);

/// `(k1[Title/Abstract] OR ... OR "m 1"[MeSH Terms])` per clause, joined with " AND ".
/// Terms with spaces, brackets, parentheses or operator words are double-quoted.
std::string render_query(const StructuredQuery& query);

}  // namespace meshsuggest
