#include "meshsuggest/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>
#include <unordered_map>

#include "meshsuggest/errors.hpp"
#include "meshsuggest/text.hpp"

namespace meshsuggest {

EmbeddingStore EmbeddingStore::from_vectors(std::size_t dim,
                                            std::vector<std::pair<std::string, std::vector<float>>> vectors) {
    if (dim == 0) throw InvalidArgument("embedding dimension must be positive");
    std::sort(vectors.begin(), vectors.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    EmbeddingStore s;
    s.dim_ = dim;
    s.ids_.reserve(vectors.size());
    s.data_.reserve(vectors.size() * dim);
    for (auto& [id, v] : vectors) {
        if (id.empty()) throw InvalidArgument("empty embedding id");
        if (v.size() != dim)
            throw DimensionMismatch(0, id + " has " + std::to_string(v.size()) + " components, expected " +
                                           std::to_string(dim));
        if (!std::all_of(v.begin(), v.end(), [](float x) { return std::isfinite(x); }))
            throw NonFiniteValue(0);
        if (!s.rows_.emplace(id, s.ids_.size()).second) throw InvalidArgument("duplicate embedding id: " + id);
        s.ids_.push_back(std::move(id));
        s.data_.insert(s.data_.end(), v.begin(), v.end());
    }
    return s;
}

std::span<const float> EmbeddingStore::row(std::size_t r) const {
    if (r >= ids_.size()) throw InvalidArgument("embedding row out of range");
    return {data_.data() + r * dim_, dim_};
}

std::optional<std::span<const float>> EmbeddingStore::find(std::string_view id) const {
    auto it = rows_.find(id);
    if (it == rows_.end()) return std::nullopt;
    return row(it->second);
}

EmbeddingStore parse_embeddings(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::size_t dim = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto t = trim(line);
        if (t.empty()) continue;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), dim);
        if (ec != std::errc{} || p != t.data() + t.size() || dim == 0)
            throw MalformedRecord(lineno, "first line must be a positive dimension");
        break;
    }
    if (dim == 0) throw MalformedRecord(lineno, "missing dimension header");

    std::vector<std::pair<std::string, std::vector<float>>> vectors;
    std::set<std::string, std::less<>> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos) throw MalformedRecord(lineno, "missing tab between id and vector");
        std::string id(trim(std::string_view(line).substr(0, tab)));
        if (id.empty()) throw MalformedRecord(lineno, "empty id");
        if (!seen.insert(id).second) throw MalformedRecord(lineno, "duplicate id " + id);
        std::vector<float> v;
        v.reserve(dim);
        for (const auto& tok : split_whitespace(std::string_view(line).substr(tab + 1))) {
            float x = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
            if (p != tok.data() + tok.size() || (ec != std::errc{} && ec != std::errc::result_out_of_range))
                throw MalformedRecord(lineno, "not a number: '" + tok + "'");
            // Out of float range: overflow is non-finite, underflow rounds to zero.
            if (ec == std::errc::result_out_of_range) x = static_cast<float>(std::strtod(tok.c_str(), nullptr));
            if (!std::isfinite(x)) throw NonFiniteValue(lineno);
            v.push_back(x);
        }
        if (v.size() != dim)
            throw DimensionMismatch(lineno, std::to_string(v.size()) + " components, expected " + std::to_string(dim));
        vectors.emplace_back(std::move(id), std::move(v));
    }
    return EmbeddingStore::from_vectors(dim, std::move(vectors));
}

EmbeddingStore load_embeddings(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path);
    return parse_embeddings(in);
}

void write_embeddings(const EmbeddingStore& store, std::ostream& out) {
    out << store.dim() << '\n';
    char buf[64];
    for (std::size_t r = 0; r < store.size(); ++r) {
        out << store.id(r) << '\t';
        auto v = store.row(r);
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v[i]);
            if (i) out << ' ';
            out.write(buf, p - buf);
        }
        out << '\n';
    }
}

WordVectorModel::WordVectorModel(EmbeddingStore store) : store_(std::move(store)) {}

std::vector<double> WordVectorModel::embed(std::string_view keyword) const {
    std::vector<double> sum(store_.dim(), 0.0);
    std::size_t found = 0;
    for (const auto& token : split_whitespace(to_lower(keyword))) {
        auto v = store_.find(token);
        if (!v) continue;
        for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
        ++found;
    }
    if (found > 1)
        for (auto& x : sum) x /= static_cast<double>(found);
    return sum;
}

WordVectorModel load_word_vectors(const std::string& path) {
    auto raw = load_embeddings(path);
    std::vector<std::pair<std::string, std::vector<float>>> lowered;
    std::set<std::string, std::less<>> seen;
    for (std::size_t r = 0; r < raw.size(); ++r) {
        auto key = to_lower(raw.id(r));
        if (!seen.insert(key).second) continue;
        auto v = raw.row(r);
        lowered.emplace_back(std::move(key), std::vector<float>(v.begin(), v.end()));
    }
    return WordVectorModel(EmbeddingStore::from_vectors(raw.dim(), std::move(lowered)));
}

Ranking rank_terms(std::span<const float> query, const EmbeddingStore& store, std::size_t k) {
    if (k == 0) throw InvalidArgument("k must be positive");
    if (query.size() != store.dim())
        throw DimensionMismatch(0, "query has " + std::to_string(query.size()) + " components, store has " +
                                       std::to_string(store.dim()));

    struct Hit {
        double score;
        std::size_t row;
    };
    std::vector<Hit> hits(store.size());
    for (std::size_t r = 0; r < store.size(); ++r) {
        auto v = store.row(r);
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += static_cast<double>(query[i]) * static_cast<double>(v[i]);
        hits[r] = {s, r};
    }
    // Rows are in ascending id order, so the row index is the tie-break.
    auto better = [](const Hit& a, const Hit& b) { return a.score != b.score ? a.score > b.score : a.row < b.row; };
    auto n = std::min(k, hits.size());
    std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(n), hits.end(), better);

    Ranking out;
    out.entries.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.entries.push_back({store.id(hits[i].row), hits[i].score});
    return out;
}

Ranking combsum_fuse(std::span<const Ranking> rankings, std::size_t depth) {
    if (rankings.empty()) throw EmptyInput("combsum_fuse needs at least one ranking");
    if (depth == 0) throw InvalidArgument("fusion depth must be positive");

    std::unordered_map<std::string, double> fused;
    Ranking out;
    for (const auto& r : rankings) {
        for (const auto& key : r.for_keys)
            if (std::find(out.for_keys.begin(), out.for_keys.end(), key) == out.for_keys.end())
                out.for_keys.push_back(key);
        if (r.entries.empty()) continue;
        auto [lo, hi] = std::minmax_element(r.entries.begin(), r.entries.end(),
                                            [](const auto& a, const auto& b) { return a.score < b.score; });
        double min = lo->score;
        double span = hi->score - min;
        std::set<std::string_view> seen;
        for (const auto& e : r.entries) {
            if (!seen.insert(e.uid).second) throw InvalidArgument("uid repeated within a ranking: " + e.uid);
            double norm = span > 0.0 ? (e.score - min) / span : 1.0;
            fused[e.uid] += norm;
        }
    }

    out.entries.reserve(fused.size());
    for (auto& [uid, score] : fused) out.entries.push_back({uid, score});
    auto better = [](const ScoredTerm& a, const ScoredTerm& b) {
        return a.score != b.score ? a.score > b.score : a.uid < b.uid;
    };
    auto n = std::min(depth, out.entries.size());
    std::partial_sort(out.entries.begin(), out.entries.begin() + static_cast<std::ptrdiff_t>(n), out.entries.end(),
                      better);
    out.entries.resize(n);
    return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size() && i < b.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) return -1.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::vector<std::string>> group_keywords(std::span<const std::string> keywords,
                                                     const WordVectorModel& model, double tau) {
    if (keywords.empty()) throw EmptyInput("group_keywords needs at least one keyword");
    {
        std::set<std::string_view> seen;
        for (const auto& k : keywords)
            if (!seen.insert(k).second) throw InvalidArgument("duplicate keyword: " + k);
    }

    const auto n = keywords.size();
    std::vector<std::vector<double>> vecs;
    vecs.reserve(n);
    for (const auto& k : keywords) vecs.push_back(model.embed(k));

    // Active clusters in order of first member; sim[i][j] is the average pairwise cosine.
    std::vector<std::vector<std::size_t>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
    std::vector<std::vector<double>> sim(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) sim[i][j] = sim[j][i] = cosine_similarity(vecs[i], vecs[j]);

    while (clusters.size() > 1) {
        std::size_t bi = 0, bj = 1;
        double best = sim[0][1];
        for (std::size_t i = 0; i < clusters.size(); ++i)
            for (std::size_t j = i + 1; j < clusters.size(); ++j)
                if (sim[i][j] > best) {
                    best = sim[i][j];
                    bi = i;
                    bj = j;
                }
        if (best < tau) break;

        // Lance-Williams update for average linkage.
        const double wi = static_cast<double>(clusters[bi].size());
        const double wj = static_cast<double>(clusters[bj].size());
        for (std::size_t m = 0; m < clusters.size(); ++m) {
            if (m == bi || m == bj) continue;
            double s = (wi * sim[bi][m] + wj * sim[bj][m]) / (wi + wj);
            sim[bi][m] = sim[m][bi] = s;
        }
        auto& into = clusters[bi];
        into.insert(into.end(), clusters[bj].begin(), clusters[bj].end());
        std::sort(into.begin(), into.end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
        sim.erase(sim.begin() + static_cast<std::ptrdiff_t>(bj));
        for (auto& row : sim) row.erase(row.begin() + static_cast<std::ptrdiff_t>(bj));
    }

    std::vector<std::vector<std::string>> groups;
    groups.reserve(clusters.size());
    for (const auto& c : clusters) {
        auto& g = groups.emplace_back();
        for (auto idx : c) g.push_back(keywords[idx]);
    }
    return groups;
}

}  // namespace meshsuggest
