#include "meshsuggest/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <thread>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "meshsuggest/errors.hpp"
#include "meshsuggest/pubmed.hpp"
#include "meshsuggest/text.hpp"

namespace meshsuggest {

namespace {

std::optional<std::string> optional_date(const nlohmann::json& doc, const char* key) {
    if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
    auto d = doc[key].get<std::string>();
    if (d.empty()) return std::nullopt;
    if (!is_valid_date(d)) throw InvalidArgument(std::string("bad ") + key + " '" + d + "'");
    return d;
}

struct TopicOutcome {
    std::vector<RunRecord> records;
    std::optional<ConstructedQuery> query;
    std::optional<TopicFailure> failure;
};

std::string build_query(const Topic& topic, const MethodRegistry& registry, const Resources& resources,
                        const PipelineOptions& options) {
    if (options.method == original_method) return topic.raw_query;

    auto stripped = strip_mesh(topic.query);
    StructuredQuery out;
    for (const auto& clause : stripped.clauses) {
        SuggestionRequest req;
        req.method = options.method;
        req.depth = options.depth;
        req.interpolation_depth = options.interpolation_depth;
        req.tau = options.tau;
        std::set<std::string> seen;
        for (const auto& k : clause.keywords)
            if (seen.insert(normalize_name(k)).second) req.keywords.push_back(k);

        auto groups = registry.dispatch(req, resources);
        auto attached = attach_mesh(StructuredQuery{{clause}}, groups);
        out.clauses.push_back(std::move(attached.clauses.front()));
    }
    return render_query(out);
}

TopicOutcome process_topic(const Topic& topic, const MethodRegistry& registry, const Resources& resources,
                           const PipelineOptions& options) {
    TopicOutcome outcome;
    try {
        auto query = build_query(topic, registry, resources, options);
        if (!resources.pubmed) throw InvalidArgument("resource not loaded: PubMed client");
        SearchSpec spec{query, topic.mindate, topic.maxdate, options.email, options.retmax};
        auto result = resources.pubmed->esearch(spec);
        for (auto& pmid : result.pmids) outcome.records.push_back({topic.id, std::move(pmid)});
        outcome.query = ConstructedQuery{topic.id, std::move(query)};
    } catch (const std::exception& e) {
        outcome.records.clear();
        outcome.failure = TopicFailure{topic.id, e.what()};
    }
    return outcome;
}

std::string fixed4(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

}  // namespace

TopicLoadResult load_topics(const std::string& path) {
    TopicLoadResult result;
    std::set<std::string> ids;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::string where = "line " + std::to_string(lineno);
        try {
            auto doc = nlohmann::json::parse(line);
            Topic t;
            const auto& id = doc.at("id");
            t.id = id.is_string() ? id.get<std::string>() : id.dump();
            where = "topic " + t.id;
            if (t.id.empty()) throw InvalidArgument("empty topic id");
            t.raw_query = doc.at("query").get<std::string>();
            t.query = parse_query(t.raw_query);
            t.mindate = optional_date(doc, "mindate");
            t.maxdate = optional_date(doc, "maxdate");
            if (t.mindate && t.maxdate && *t.mindate > *t.maxdate) throw InvalidArgument("mindate after maxdate");
            if (!ids.insert(t.id).second) throw InvalidArgument("duplicate topic id");
            result.topics.push_back(std::move(t));
        } catch (const nlohmann::json::exception& e) {
            result.warnings.push_back(where + ": " + e.what());
        } catch (const Error& e) {
            result.warnings.push_back(where + ": " + e.what());
        }
    }
    if (result.topics.empty())
        throw AllTopicsFailed("no usable topics in " + path + " (" + std::to_string(result.warnings.size()) +
                              " skipped)");
    return result;
}

std::map<std::string, std::pair<std::optional<std::string>, std::optional<std::string>>> load_date_file(
    const std::string& path) {
    std::map<std::string, std::pair<std::optional<std::string>, std::optional<std::string>>> out;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        if (trim(line).empty() || line[0] == '#') continue;
        auto f = split(line, '\t');
        if (f.size() != 3) throw MalformedRecord(lineno, "expected topic<TAB>mindate<TAB>maxdate");
        auto bound = [&](const std::string& s) -> std::optional<std::string> {
            auto t = std::string(trim(s));
            if (t.empty()) return std::nullopt;
            if (!is_valid_date(t)) throw MalformedRecord(lineno, "bad date '" + t + "'");
            return t;
        };
        out[std::string(trim(f[0]))] = {bound(f[1]), bound(f[2])};
    }
    return out;
}

void apply_dates(std::vector<Topic>& topics, const std::string& date_file) {
    auto dates = load_date_file(date_file);
    for (auto& t : topics) {
        auto it = dates.find(t.id);
        if (it == dates.end()) continue;
        t.mindate = it->second.first;
        t.maxdate = it->second.second;
    }
}

Qrels load_qrels(const std::string& path) {
    Qrels q;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        auto f = split_whitespace(line);
        if (f.empty()) continue;
        if (f.size() != 4) throw MalformedRecord(lineno, "expected topic iteration pmid relevance");
        int rel = 0;
        try {
            rel = std::stoi(f[3]);
        } catch (const std::exception&) {
            throw MalformedRecord(lineno, "relevance is not an integer");
        }
        auto& docs = q[f[0]];
        if (rel > 0) docs.insert(f[2]);
    }
    return q;
}

void write_run(const std::vector<RunRecord>& records, std::ostream& out) {
    out << "topic\tpmid\n";
    for (const auto& r : records) out << r.topic << '\t' << r.pmid << '\n';
}

std::vector<RunRecord> read_run(const std::string& path) {
    std::vector<RunRecord> out;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        if (trim(line).empty()) continue;
        if (lineno == 1 && line == "topic\tpmid") continue;
        auto f = split(line, '\t');
        if (f.size() != 2 || f[0].empty() || f[1].empty()) throw MalformedRecord(lineno, "expected topic<TAB>pmid");
        out.push_back({f[0], f[1]});
    }
    return out;
}

void write_queries(const std::vector<ConstructedQuery>& queries, std::ostream& out) {
    out << "topic\tquery\n";
    for (const auto& q : queries) out << q.topic << '\t' << q.query << '\n';
}

PipelineResult run_pipeline(const std::vector<Topic>& topics, const MethodRegistry& registry,
                            const Resources& resources, const PipelineOptions& options) {
    if (options.method != original_method && !registry.contains(options.method))
        throw UnknownMethod(options.method);

    std::vector<TopicOutcome> outcomes(topics.size());
    const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, std::max<std::size_t>(topics.size(), 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < topics.size(); ++i)
            outcomes[i] = process_topic(topics[i], registry, resources, options);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (auto i = next++; i < topics.size(); i = next++)
                    outcomes[i] = process_topic(topics[i], registry, resources, options);
            });
        for (auto& t : pool) t.join();
    }

    PipelineResult result;
    for (auto& o : outcomes) {
        if (o.failure) {
            result.failures.push_back(std::move(*o.failure));
            continue;
        }
        ++result.succeeded;
        result.records.insert(result.records.end(), std::make_move_iterator(o.records.begin()),
                              std::make_move_iterator(o.records.end()));
        result.queries.push_back(std::move(*o.query));
    }
    return result;
}

TopicScore score_topic(const std::string& topic, const std::set<std::string>& retrieved,
                       const std::set<std::string>& relevant) {
    TopicScore s;
    s.topic = topic;
    s.retrieved = retrieved.size();
    s.relevant = relevant.size();
    std::size_t hits = 0;
    for (const auto& id : retrieved) hits += relevant.count(id);
    if (s.retrieved) s.precision = static_cast<double>(hits) / static_cast<double>(s.retrieved);
    if (s.relevant) s.recall = static_cast<double>(hits) / static_cast<double>(s.relevant);
    if (s.precision + s.recall > 0.0) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

ScoreReport score(const std::vector<RunRecord>& run, const Qrels& qrels) {
    std::map<std::string, std::set<std::string>> retrieved;
    for (const auto& r : run) {
        if (!qrels.count(r.topic)) throw UnjudgedTopic(r.topic);
        retrieved[r.topic].insert(r.pmid);
    }
    static const std::set<std::string> none;
    ScoreReport report;
    double sp = 0.0, sr = 0.0, sf = 0.0;
    for (const auto& [topic, relevant] : qrels) {
        auto it = retrieved.find(topic);
        auto s = score_topic(topic, it == retrieved.end() ? none : it->second, relevant);
        if (s.relevant > 0) {
            sp += s.precision;
            sr += s.recall;
            sf += s.f1;
            ++report.averaged;
        }
        report.topics.push_back(std::move(s));
    }
    if (report.averaged) {
        const double n = static_cast<double>(report.averaged);
        report.mean_precision = sp / n;
        report.mean_recall = sr / n;
        report.mean_f1 = sf / n;
    }
    return report;
}

std::string format_report(const ScoreReport& report) {
    std::ostringstream out;
    out << "topic\tP\tF1\tR\tretrieved\trelevant\n";
    std::size_t retrieved = 0, relevant = 0;
    for (const auto& s : report.topics) {
        out << s.topic << '\t' << fixed4(s.precision) << '\t' << fixed4(s.f1) << '\t' << fixed4(s.recall) << '\t'
            << s.retrieved << '\t' << s.relevant << '\n';
        retrieved += s.retrieved;
        relevant += s.relevant;
    }
    out << "all\t" << fixed4(report.mean_precision) << '\t' << fixed4(report.mean_f1) << '\t'
        << fixed4(report.mean_recall) << '\t' << retrieved << '\t' << relevant << '\n';
    return out.str();
}

double paired_t_test(const std::vector<double>& a, const std::vector<double>& b, std::size_t comparisons) {
    if (a.size() != b.size()) throw InvalidArgument("paired t-test needs equal-length samples");
    const std::size_t n = a.size();
    if (n < 2) return 1.0;
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) ss += (a[i] - b[i] - mean) * (a[i] - b[i] - mean);
    const double var = ss / static_cast<double>(n - 1);
    double p;
    if (var == 0.0) {
        p = mean == 0.0 ? 1.0 : 0.0;
    } else {
        const double t = mean / std::sqrt(var / static_cast<double>(n));
        boost::math::students_t dist(static_cast<double>(n - 1));
        p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::fabs(t)));
    }
    return std::min(1.0, p * static_cast<double>(std::max<std::size_t>(comparisons, 1)));
}

}  // namespace meshsuggest
