#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace meshsuggest {

struct MeshTerm {
    std::string uid;
    std::string name;
    std::vector<std::string> entry_terms;
    std::vector<std::string> tree_numbers;  // e.g. "A01.456.505"

    bool operator==(const MeshTerm&) const = default;
};

/// True for a capital letter followed by dot-separated groups of 2-3 digits ("C01.252").
bool is_valid_tree_number(std::string_view code);

/// In-memory MeSH vocabulary. Immutable once built; safe for concurrent readers.
class Vocabulary {
public:
    Vocabulary() = default;

    /// Validates every term and builds the name and tree indexes.
    /// Throws DuplicateUid or InvalidArgument.
    static Vocabulary from_terms(std::vector<MeshTerm> terms, std::string version = {});

    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    /// Edition label taken from a `# version: ...` header line, empty if absent.
    const std::string& version() const noexcept { return version_; }

    const MeshTerm* find(std::string_view uid) const;
    const MeshTerm& at(std::string_view uid) const;  // throws UnknownUid
    bool contains(std::string_view uid) const { return find(uid) != nullptr; }

    /// Matches the normalized preferred name or any entry term.
    /// A preferred-name match beats an entry-term match; otherwise the lowest uid wins.
    std::optional<std::string> lookup_by_name(std::string_view name) const;

    std::optional<std::string> lookup_by_tree_number(std::string_view code) const;

    /// Terms one level below any of `uid`'s tree positions, ordered by tree number.
    std::vector<std::string> children(std::string_view uid) const;

    /// Terms ordered by uid.
    const std::map<std::string, MeshTerm, std::less<>>& terms() const noexcept { return terms_; }

    bool operator==(const Vocabulary& other) const { return terms_ == other.terms_; }

private:
    std::string version_;
    std::map<std::string, MeshTerm, std::less<>> terms_;
    std::map<std::string, std::string, std::less<>> name_index_;
    std::map<std::string, std::string, std::less<>> tree_index_;
};

/// Loads the TSV vocabulary: `uid<TAB>name<TAB>entry;terms<TAB>tree;numbers`.
/// Lines starting with '#' are comments; blank lines are skipped.
/// Throws MissingFile, MalformedRecord, DuplicateUid.
Vocabulary load_vocabulary(const std::string& path);
Vocabulary parse_vocabulary(std::istream& in);

void write_vocabulary(const Vocabulary& vocab, std::ostream& out);

}  // namespace meshsuggest
