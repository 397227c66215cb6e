#include "meshsuggest/query.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "meshsuggest/errors.hpp"
#include "meshsuggest/suggesters.hpp"
#include "meshsuggest/text.hpp"

namespace meshsuggest {

namespace {

enum class Tok { lparen, rparen, op_and, op_or, op_not, word, quoted, tag };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

bool is_word_break(char c) {
    return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '"' || c == '[';
}

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '(') {
            out.push_back({Tok::lparen, "(", i++});
        } else if (c == ')') {
            out.push_back({Tok::rparen, ")", i++});
        } else if (c == ']') {
            throw SyntaxError(i, "unexpected ']'");
        } else if (c == '"') {
            auto close = s.find('"', i + 1);
            if (close == std::string_view::npos) throw SyntaxError(i, "unterminated quote");
            out.push_back({Tok::quoted, std::string(s.substr(i + 1, close - i - 1)), i});
            i = close + 1;
        } else if (c == '[') {
            auto close = s.find(']', i + 1);
            if (close == std::string_view::npos) throw SyntaxError(i, "unterminated field tag");
            out.push_back({Tok::tag, std::string(s.substr(i + 1, close - i - 1)), i});
            i = close + 1;
        } else {
            std::size_t start = i;
            while (i < s.size() && !is_word_break(s[i])) {
                if (s[i] == ']') throw SyntaxError(i, "unexpected ']'");
                ++i;
            }
            std::string word(s.substr(start, i - start));
            auto lower = to_lower(word);
            Tok kind = lower == "and" ? Tok::op_and : lower == "or" ? Tok::op_or : lower == "not" ? Tok::op_not : Tok::word;
            out.push_back({kind, std::move(word), start});
        }
    }
    return out;
}

struct Node {
    enum class Kind { atom, all, any, exclude } kind = Kind::atom;
    std::vector<Node> children;
    std::string text;
    bool mesh = false;
};

/// Returns true for a MeSH tag, false for a keyword tag.
bool classify_tag(const std::string& raw, std::size_t pos) {
    auto tag = normalize_name(raw);
    if (tag == "tiab" || tag == "title/abstract") return false;
    if (tag == "mesh" || tag == "mesh terms" || tag == "mh") return true;
    if (tag.empty()) throw SyntaxError(pos, "empty field tag");
    throw UnsupportedStructure("unsupported field tag [" + raw + "]");
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text), toks_(tokenize(text)) {}

    Node parse() {
        if (toks_.empty()) throw SyntaxError(0, "empty query");
        Node n = expression();
        if (i_ < toks_.size()) throw SyntaxError(toks_[i_].pos, "unexpected '" + toks_[i_].text + "'");
        return n;
    }

private:
    const Token* peek() const { return i_ < toks_.size() ? &toks_[i_] : nullptr; }
    std::size_t end_pos() const { return text_.size(); }

    Node expression() {
        Node left = operand();
        while (const auto* t = peek()) {
            Node::Kind kind;
            if (t->kind == Tok::op_and)
                kind = Node::Kind::all;
            else if (t->kind == Tok::op_or)
                kind = Node::Kind::any;
            else if (t->kind == Tok::op_not)
                kind = Node::Kind::exclude;
            else
                break;
            ++i_;
            Node right = operand();
            Node combined{kind, {}, {}, false};
            combined.children.push_back(std::move(left));
            combined.children.push_back(std::move(right));
            left = std::move(combined);
        }
        return left;
    }

    Node operand() {
        const auto* t = peek();
        if (!t) throw SyntaxError(end_pos(), "expected a term");
        if (t->kind == Tok::lparen) {
            ++i_;
            Node inner = expression();
            const auto* close = peek();
            if (!close || close->kind != Tok::rparen)
                throw SyntaxError(close ? close->pos : end_pos(), "expected ')'");
            ++i_;
            if (const auto* after = peek(); after && after->kind == Tok::tag)
                throw UnsupportedStructure("field tags on parenthesised groups are not supported");
            return inner;
        }
        Node atom;
        if (t->kind == Tok::quoted) {
            atom.text = t->text;
            ++i_;
        } else if (t->kind == Tok::word) {
            while (const auto* w = peek()) {
                if (w->kind != Tok::word) break;
                if (!atom.text.empty()) atom.text.push_back(' ');
                atom.text += w->text;
                ++i_;
            }
        } else {
            throw SyntaxError(t->pos, "expected a term, got '" + t->text + "'");
        }
        if (const auto* tag = peek(); tag && tag->kind == Tok::tag) {
            atom.mesh = classify_tag(tag->text, tag->pos);
            ++i_;
        }
        if (const auto* next = peek(); next && (next->kind == Tok::word || next->kind == Tok::quoted ||
                                                next->kind == Tok::lparen))
            throw SyntaxError(next->pos, "missing operator before '" + next->text + "'");
        if (atom.text.empty()) throw SyntaxError(t->pos, "empty term");
        return atom;
    }

    std::string_view text_;
    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

void flatten(Node& n) {
    for (auto& c : n.children) flatten(c);
    if (n.kind != Node::Kind::all && n.kind != Node::Kind::any) return;
    std::vector<Node> flat;
    for (auto& c : n.children) {
        if (c.kind == n.kind)
            for (auto& g : c.children) flat.push_back(std::move(g));
        else
            flat.push_back(std::move(c));
    }
    n.children = std::move(flat);
}

void add_atom(BooleanClause& clause, const Node& atom) {
    (atom.mesh ? clause.mesh_terms : clause.keywords).push_back(atom.text);
}

BooleanClause clause_of(const Node& n) {
    BooleanClause c;
    if (n.kind == Node::Kind::atom) {
        add_atom(c, n);
        return c;
    }
    if (n.kind != Node::Kind::any) throw UnsupportedStructure("nested operators beyond AND-of-ORs");
    for (const auto& child : n.children) {
        if (child.kind != Node::Kind::atom) throw UnsupportedStructure("nested operators beyond AND-of-ORs");
        add_atom(c, child);
    }
    return c;
}

bool contains_not(const Node& n) {
    if (n.kind == Node::Kind::exclude) return true;
    return std::any_of(n.children.begin(), n.children.end(), contains_not);
}

bool needs_quotes(const std::string& term) {
    if (term.empty()) return true;
    auto lower = to_lower(term);
    if (lower == "and" || lower == "or" || lower == "not") return true;
    return std::any_of(term.begin(), term.end(), [](char c) {
        return std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')' || c == '[' || c == ']';
    });
}

std::string render_term(const std::string& term, std::string_view tag) {
    if (term.find('"') != std::string::npos) throw InvalidArgument("term contains a double quote: " + term);
    std::string out = needs_quotes(term) ? "\"" + term + "\"" : term;
    out += tag;
    return out;
}

bool keywords_cover(const BooleanClause& clause, const std::vector<std::string>& group) {
    return std::all_of(group.begin(), group.end(), [&](const std::string& k) {
        auto nk = normalize_name(k);
        return std::any_of(clause.keywords.begin(), clause.keywords.end(),
                           [&](const std::string& c) { return normalize_name(c) == nk; });
    });
}

}  // namespace

StructuredQuery parse_query(std::string_view text) {
    Node root = Parser(text).parse();
    if (contains_not(root)) throw UnsupportedStructure("NOT is not supported");
    flatten(root);

    StructuredQuery q;
    if (root.kind == Node::Kind::all) {
        for (const auto& child : root.children) q.clauses.push_back(clause_of(child));
    } else {
        q.clauses.push_back(clause_of(root));
    }
    return q;
}

StructuredQuery strip_mesh(const StructuredQuery& query) {
    StructuredQuery out;
    for (const auto& c : query.clauses)
        if (!c.keywords.empty()) out.clauses.push_back({c.keywords, {}});
    if (out.clauses.empty()) throw EmptyAfterStrip();
    return out;
}

StructuredQuery attach_mesh(const StructuredQuery& query, std::span<const SuggestionGroup> groups) {
    StructuredQuery out = query;
    for (const auto& g : groups) {
        auto it = std::find_if(out.clauses.begin(), out.clauses.end(),
                               [&](const BooleanClause& c) { return keywords_cover(c, g.keywords); });
        if (g.keywords.empty() || it == out.clauses.end()) throw UnmatchedGroup(g.keywords);
        for (const auto& term : g.terms)
            if (std::find(it->mesh_terms.begin(), it->mesh_terms.end(), term.name) == it->mesh_terms.end())
                it->mesh_terms.push_back(term.name);
    }
    return out;
}

std::string render_query(const StructuredQuery& query) {
    std::string out;
    for (std::size_t i = 0; i < query.clauses.size(); ++i) {
        if (i) out += " AND ";
        const auto& c = query.clauses[i];
        out.push_back('(');
        bool first = true;
        for (const auto& k : c.keywords) {
            if (!first) out += " OR ";
            out += render_term(k, "[Title/Abstract]");
            first = false;
        }
        for (const auto& m : c.mesh_terms) {
            if (!first) out += " OR ";
            out += render_term(m, "[MeSH Terms]");
            first = false;
        }
        out.push_back(')');
    }
    return out;
}

}  // namespace meshsuggest
