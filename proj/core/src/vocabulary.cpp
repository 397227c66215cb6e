#include "meshsuggest/vocabulary.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>

#include "meshsuggest/errors.hpp"
#include "meshsuggest/text.hpp"

namespace meshsuggest {

namespace {

bool has_control_separator(std::string_view s) {
    return s.find_first_of("\t\n\r") != std::string_view::npos;
}

std::vector<std::string> split_list(std::string_view field) {
    std::vector<std::string> out;
    for (auto& piece : split(field, ';')) {
        auto t = trim(piece);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out.push_back(sep);
        out += items[i];
    }
    return out;
}

void validate(const MeshTerm& t) {
    if (t.uid.empty() || has_control_separator(t.uid) || t.uid.find(';') != std::string::npos)
        throw InvalidArgument("invalid MeSH uid '" + t.uid + "'");
    if (trim(t.name).empty() || has_control_separator(t.name))
        throw InvalidArgument("invalid preferred name for " + t.uid);
    for (const auto& e : t.entry_terms)
        if (trim(e).empty() || has_control_separator(e) || e.find(';') != std::string::npos)
            throw InvalidArgument("invalid entry term for " + t.uid);
    for (const auto& tn : t.tree_numbers)
        if (!is_valid_tree_number(tn)) throw InvalidArgument("invalid tree number '" + tn + "' for " + t.uid);
}

}  // namespace

bool is_valid_tree_number(std::string_view code) {
    if (code.empty() || code[0] < 'A' || code[0] > 'Z') return false;
    std::size_t i = 1;
    while (true) {
        std::size_t digits = 0;
        while (i < code.size() && std::isdigit(static_cast<unsigned char>(code[i]))) {
            ++i;
            ++digits;
        }
        if (digits < 2 || digits > 3) return false;
        if (i == code.size()) return true;
        if (code[i] != '.') return false;
        ++i;
    }
}

Vocabulary Vocabulary::from_terms(std::vector<MeshTerm> terms, std::string version) {
    Vocabulary v;
    v.version_ = std::move(version);
    for (auto& t : terms) {
        validate(t);
        std::string uid = t.uid;
        if (!v.terms_.emplace(uid, std::move(t)).second) throw DuplicateUid(uid);
    }

    // Entry terms first, lowest uid wins (terms_ iterates in uid order).
    for (const auto& [uid, t] : v.terms_) {
        for (const auto& e : t.entry_terms) v.name_index_.emplace(normalize_name(e), uid);
    }
    // Preferred names override entry terms; again lowest uid wins among themselves.
    std::map<std::string, std::string, std::less<>> preferred;
    for (const auto& [uid, t] : v.terms_) preferred.emplace(normalize_name(t.name), uid);
    for (auto& [name, uid] : preferred) v.name_index_[name] = uid;

    for (const auto& [uid, t] : v.terms_) {
        for (const auto& tn : t.tree_numbers) {
            auto [it, inserted] = v.tree_index_.emplace(tn, uid);
            if (!inserted && it->second != uid)
                throw InvalidArgument("tree number " + tn + " assigned to both " + it->second + " and " + uid);
        }
    }
    return v;
}

const MeshTerm* Vocabulary::find(std::string_view uid) const {
    auto it = terms_.find(uid);
    return it == terms_.end() ? nullptr : &it->second;
}

const MeshTerm& Vocabulary::at(std::string_view uid) const {
    if (const auto* t = find(uid)) return *t;
    throw UnknownUid(std::string(uid));
}

std::optional<std::string> Vocabulary::lookup_by_name(std::string_view name) const {
    auto key = normalize_name(name);
    if (key.empty()) return std::nullopt;
    auto it = name_index_.find(key);
    if (it == name_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> Vocabulary::lookup_by_tree_number(std::string_view code) const {
    auto it = tree_index_.find(code);
    if (it == tree_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> Vocabulary::children(std::string_view uid) const {
    const auto& term = at(uid);
    std::map<std::string, std::string> by_tree;
    for (const auto& tn : term.tree_numbers) {
        std::string prefix = tn + ".";
        for (auto it = tree_index_.lower_bound(prefix); it != tree_index_.end(); ++it) {
            std::string_view code = it->first;
            if (code.substr(0, prefix.size()) != prefix) break;
            if (code.find('.', prefix.size()) == std::string_view::npos) by_tree.emplace(it->first, it->second);
        }
    }
    std::vector<std::string> out;
    for (auto& [code, child] : by_tree) {
        if (std::find(out.begin(), out.end(), child) == out.end()) out.push_back(child);
    }
    return out;
}

Vocabulary parse_vocabulary(std::istream& in) {
    std::vector<MeshTerm> terms;
    std::string version;
    std::string line;
    std::size_t lineno = 0;
    std::map<std::string, std::size_t, std::less<>> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        if (line[0] == '#') {
            auto body = trim(std::string_view(line).substr(1));
            constexpr std::string_view key = "version:";
            if (body.substr(0, key.size()) == key) version = std::string(trim(body.substr(key.size())));
            continue;
        }
        auto fields = split(line, '\t');
        if (fields.size() != 4)
            throw MalformedRecord(lineno, "expected 4 tab-separated fields, got " + std::to_string(fields.size()));
        MeshTerm t;
        t.uid = std::string(trim(fields[0]));
        t.name = std::string(trim(fields[1]));
        if (t.uid.empty()) throw MalformedRecord(lineno, "empty uid");
        if (t.name.empty()) throw MalformedRecord(lineno, "empty preferred name");
        t.entry_terms = split_list(fields[2]);
        t.tree_numbers = split_list(fields[3]);
        for (const auto& tn : t.tree_numbers)
            if (!is_valid_tree_number(tn)) throw MalformedRecord(lineno, "bad tree number '" + tn + "'");
        if (!seen.emplace(t.uid, lineno).second) throw DuplicateUid(t.uid);
        terms.push_back(std::move(t));
    }
    return Vocabulary::from_terms(std::move(terms), std::move(version));
}

Vocabulary load_vocabulary(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path);
    return parse_vocabulary(in);
}

void write_vocabulary(const Vocabulary& vocab, std::ostream& out) {
    if (!vocab.version().empty()) out << "# version: " << vocab.version() << '\n';
    for (const auto& [uid, t] : vocab.terms()) {
        out << t.uid << '\t' << t.name << '\t' << join(t.entry_terms, ';') << '\t' << join(t.tree_numbers, ';')
            << '\n';
    }
}

}  // namespace meshsuggest
