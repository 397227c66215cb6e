#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "meshsuggest/query.hpp"
#include "meshsuggest/suggesters.hpp"

namespace meshsuggest {

struct Topic {
    std::string id;
    std::string raw_query;
    StructuredQuery query;
    std::optional<std::string> mindate;
    std::optional<std::string> maxdate;
};

struct TopicLoadResult {
    std::vector<Topic> topics;
    std::vector<std::string> warnings;  // one per skipped record
};

/// JSON-lines topics: {"id", "query", "mindate"?, "maxdate"?}. Records that fail to parse are
/// skipped with a warning. Throws MissingFile, AllTopicsFailed (nothing usable).
TopicLoadResult load_topics(const std::string& path);

/// `topic<TAB>mindate<TAB>maxdate` rows; an empty field leaves that bound unset.
std::map<std::string, std::pair<std::optional<std::string>, std::optional<std::string>>> load_date_file(
    const std::string& path);

/// Overrides topic dates with rows from a date file.
void apply_dates(std::vector<Topic>& topics, const std::string& date_file);

/// topic -> relevant PMIDs. An entry with relevance <= 0 still registers the topic.
using Qrels = std::map<std::string, std::set<std::string>>;

/// TREC format: `topic iteration pmid relevance`, whitespace separated.
Qrels load_qrels(const std::string& path);

struct RunRecord {
    std::string topic;
    std::string pmid;

    bool operator==(const RunRecord&) const = default;
};

/// Run TSV with header `topic<TAB>pmid`.
void write_run(const std::vector<RunRecord>& records, std::ostream& out);
std::vector<RunRecord> read_run(const std::string& path);

/// Method name that retrieves with the original query, bypassing suggestion.
inline constexpr const char* original_method = "Original";

struct PipelineOptions {
    std::string method;
    std::size_t depth = 1;
    std::size_t interpolation_depth = 20;
    double tau = 0.7;
    std::string email;
    std::size_t retmax = 10000;
    std::size_t workers = 1;
};

struct ConstructedQuery {
    std::string topic;
    std::string query;
};

struct TopicFailure {
    std::string topic;
    std::string message;
};

struct PipelineResult {
    std::vector<RunRecord> records;         // topic order, PMIDs in upstream order
    std::vector<ConstructedQuery> queries;  // successful topics only
    std::vector<TopicFailure> failures;
    std::size_t succeeded = 0;
};

/// For each topic: strip MeSH, suggest per clause, attach, render, search PubMed.
/// Per-topic errors are recorded and do not stop the run.
PipelineResult run_pipeline(const std::vector<Topic>& topics, const MethodRegistry& registry,
                            const Resources& resources, const PipelineOptions& options);

/// Writes `topic<TAB>query` with a header line.
void write_queries(const std::vector<ConstructedQuery>& queries, std::ostream& out);

struct TopicScore {
    std::string topic;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t retrieved = 0;
    std::size_t relevant = 0;
};

struct ScoreReport {
    std::vector<TopicScore> topics;  // every qrels topic, in id order
    double mean_precision = 0.0;
    double mean_recall = 0.0;
    double mean_f1 = 0.0;
    std::size_t averaged = 0;  // topics with at least one relevant document
};

TopicScore score_topic(const std::string& topic, const std::set<std::string>& retrieved,
                       const std::set<std::string>& relevant);

/// Set-based P/R/F1 per qrels topic; run topics absent from qrels throw UnjudgedTopic.
/// Qrels topics with no relevant documents are reported but left out of the means.
ScoreReport score(const std::vector<RunRecord>& run, const Qrels& qrels);

/// TSV: `topic P F1 R retrieved relevant`, one row per topic and a final `all` row.
std::string format_report(const ScoreReport& report);

/// Two-tailed paired t-test p-value, multiplied by `comparisons` (Bonferroni) and capped at 1.
/// Fewer than two pairs gives 1. Zero-variance differences give 1 when they are all zero, else 0.
double paired_t_test(const std::vector<double>& a, const std::vector<double>& b, std::size_t comparisons = 1);

}  // namespace meshsuggest
