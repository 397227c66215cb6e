#pragma once

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "meshsuggest/suggesters.hpp"

namespace meshsuggest {

struct ServiceConfig {
    std::size_t max_terms = 10;
    std::size_t interpolation_depth = 20;
    double tau = 0.7;
    /// Accept "ATM", "MetaMap" and "UMLS" as request types in addition to the neural three.
    bool allow_lexical = false;
    std::string log_path;
    std::string cors_origin = "*";
};

struct ServiceResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// Wire form of a suggestion request: {"Keywords": [...], "Type": "Atomic"}.
struct ApiSuggestionRequest {
    std::vector<std::string> keywords;
    std::string type;

    bool operator==(const ApiSuggestionRequest&) const = default;
};

/// One response record: {"Keywords": [...], "Type": ..., "MeSH_Terms": {"0": name, ...}}.
struct ApiSuggestionGroup {
    std::vector<std::string> keywords;
    std::string type;
    std::vector<std::string> mesh_terms;  // position is the string index on the wire

    bool operator==(const ApiSuggestionGroup&) const = default;
};

/// Throws InvalidArgument on shape violations (wrong types, missing or unknown fields).
ApiSuggestionRequest parse_api_request(std::string_view body);
std::string serialize_api_request(const ApiSuggestionRequest& request);
std::vector<ApiSuggestionGroup> parse_api_response(std::string_view body);
std::string serialize_api_response(const std::vector<ApiSuggestionGroup>& groups);

/// Suggestion API and interaction log. Handlers are plain functions of the request body so
/// they can be exercised without a socket; HttpServer binds them to routes.
class SuggestionService {
public:
    explicit SuggestionService(ServiceConfig config, std::shared_ptr<const MethodRegistry> registry = nullptr);

    /// Installs (or swaps) the resources used by /suggest and /health.
    void load(Resources resources);
    bool loaded() const;

    /// POST /suggest: 200, 400 (malformed / unknown Type), 422 (empty or invalid keywords),
    /// 503 (resources not loaded, encoder unavailable).
    ServiceResponse handle_suggest(std::string_view body) const;
    /// POST /log: 204, 400 (malformed or timestamp going backwards), 503 (no log configured).
    ServiceResponse handle_log(std::string_view body);
    /// GET /health: 200 with resource summary, 503 before load.
    ServiceResponse handle_health() const;

    /// Request types this instance accepts.
    std::vector<std::string> types() const;

    const ServiceConfig& config() const noexcept { return config_; }

    /// Source of the server receive time (ms since epoch) stamped on log lines.
    void set_time_source(std::function<std::int64_t()> now_ms);

private:
    std::shared_ptr<const Resources> snapshot() const;

    ServiceConfig config_;
    std::shared_ptr<const MethodRegistry> registry_;
    mutable std::mutex resources_mu_;
    std::shared_ptr<const Resources> resources_;

    std::mutex log_mu_;
    std::ofstream log_;
    std::map<std::string, std::int64_t> last_timestamp_;
    std::function<std::int64_t()> now_ms_;
};

/// Binds a SuggestionService to cpp-httplib routes, with CORS headers.
class HttpServer {
public:
    explicit HttpServer(SuggestionService& service);
    ~HttpServer();
    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Returns the bound port (ephemeral when `port` is 0), or -1 on failure.
    int bind(const std::string& host, int port);
    /// Blocks serving requests until stop().
    bool listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace meshsuggest
