#include "meshsuggest/service.hpp"

#include <chrono>
#include <set>

#include <httplib.h>
#include <json.hpp>

#include "meshsuggest/errors.hpp"

namespace meshsuggest {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::map<std::string, std::string>& type_to_method() {
    static const std::map<std::string, std::string> m = {
        {"Atomic", methods::atomic}, {"Fragment", methods::fragment}, {"Semantic", methods::semantic},
        {"ATM", methods::atm},       {"MetaMap", methods::metamap},   {"UMLS", methods::umls},
    };
    return m;
}

bool is_neural_type(const std::string& type) {
    return type == "Atomic" || type == "Fragment" || type == "Semantic";
}

const std::set<std::string>& event_kinds() {
    static const std::set<std::string> kinds = {"query_submitted", "term_added", "term_copied", "method_changed"};
    return kinds;
}

ServiceResponse error_response(int status, const std::string& message) {
    return {status, ordered_json{{"error", message}}.dump()};
}

std::vector<std::string> string_array(const json& j, const char* field) {
    if (!j.is_array()) throw InvalidArgument(std::string(field) + " must be an array of strings");
    std::vector<std::string> out;
    for (const auto& item : j) {
        if (!item.is_string()) throw InvalidArgument(std::string(field) + " must be an array of strings");
        out.push_back(item.get<std::string>());
    }
    return out;
}

std::int64_t system_now_ms() {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace

ApiSuggestionRequest parse_api_request(std::string_view body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw InvalidArgument("request body must be a JSON object");
    for (const auto& [key, value] : doc.items())
        if (key != "Keywords" && key != "Type") throw InvalidArgument("unknown field '" + key + "'");
    if (!doc.contains("Keywords") || !doc.contains("Type"))
        throw InvalidArgument("request needs \"Keywords\" and \"Type\"");
    if (!doc["Type"].is_string()) throw InvalidArgument("Type must be a string");
    return {string_array(doc["Keywords"], "Keywords"), doc["Type"].get<std::string>()};
}

std::string serialize_api_request(const ApiSuggestionRequest& request) {
    return ordered_json{{"Keywords", request.keywords}, {"Type", request.type}}.dump();
}

std::vector<ApiSuggestionGroup> parse_api_response(std::string_view body) {
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_array()) throw InvalidArgument("response must be a JSON array");
    std::vector<ApiSuggestionGroup> out;
    for (const auto& rec : doc) {
        if (!rec.is_object() || rec.size() != 3 || !rec.contains("Keywords") || !rec.contains("Type") ||
            !rec.contains("MeSH_Terms"))
            throw InvalidArgument("group record needs exactly Keywords, Type and MeSH_Terms");
        ApiSuggestionGroup g;
        g.keywords = string_array(rec["Keywords"], "Keywords");
        if (!rec["Type"].is_string()) throw InvalidArgument("Type must be a string");
        g.type = rec["Type"].get<std::string>();
        const auto& terms = rec["MeSH_Terms"];
        if (!terms.is_object()) throw InvalidArgument("MeSH_Terms must be an object");
        for (std::size_t i = 0; i < terms.size(); ++i) {
            auto key = std::to_string(i);
            if (!terms.contains(key) || !terms[key].is_string())
                throw InvalidArgument("MeSH_Terms keys must be contiguous string indexes from \"0\"");
            g.mesh_terms.push_back(terms[key].get<std::string>());
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::string serialize_api_response(const std::vector<ApiSuggestionGroup>& groups) {
    ordered_json doc = ordered_json::array();
    for (const auto& g : groups) {
        ordered_json terms = ordered_json::object();
        for (std::size_t i = 0; i < g.mesh_terms.size(); ++i) terms[std::to_string(i)] = g.mesh_terms[i];
        ordered_json rec;
        rec["Keywords"] = g.keywords;
        rec["Type"] = g.type;
        rec["MeSH_Terms"] = std::move(terms);
        doc.push_back(std::move(rec));
    }
    return doc.dump();
}

SuggestionService::SuggestionService(ServiceConfig config, std::shared_ptr<const MethodRegistry> registry)
    : config_(std::move(config)),
      registry_(registry ? std::move(registry) : std::make_shared<const MethodRegistry>()),
      now_ms_(system_now_ms) {
    if (config_.max_terms == 0) throw InvalidArgument("max_terms must be positive");
    if (!config_.log_path.empty()) {
        log_.open(config_.log_path, std::ios::app | std::ios::binary);
        if (!log_) throw InvalidArgument("cannot open interaction log " + config_.log_path);
    }
}

void SuggestionService::load(Resources resources) {
    auto next = std::make_shared<const Resources>(std::move(resources));
    std::lock_guard lock(resources_mu_);
    resources_ = std::move(next);
}

bool SuggestionService::loaded() const { return snapshot() != nullptr; }

std::shared_ptr<const Resources> SuggestionService::snapshot() const {
    std::lock_guard lock(resources_mu_);
    return resources_;
}

void SuggestionService::set_time_source(std::function<std::int64_t()> now_ms) { now_ms_ = std::move(now_ms); }

std::vector<std::string> SuggestionService::types() const {
    std::vector<std::string> out = {"Semantic", "Atomic", "Fragment"};
    if (config_.allow_lexical) out.insert(out.end(), {"ATM", "MetaMap", "UMLS"});
    return out;
}

ServiceResponse SuggestionService::handle_suggest(std::string_view body) const {
    auto res = snapshot();
    if (!res) return error_response(503, "resources not loaded");

    ApiSuggestionRequest api;
    try {
        api = parse_api_request(body);
    } catch (const InvalidArgument& e) {
        return error_response(400, e.what());
    }
    if (!is_neural_type(api.type) && !(config_.allow_lexical && type_to_method().count(api.type)))
        return error_response(400, "unknown Type '" + api.type + "'");
    if (api.keywords.empty()) return error_response(422, "Keywords is empty");

    SuggestionRequest req;
    req.keywords = api.keywords;
    req.method = type_to_method().at(api.type);
    req.depth = config_.max_terms;
    req.interpolation_depth = std::max(config_.interpolation_depth, config_.max_terms);
    req.tau = config_.tau;

    std::vector<SuggestionGroup> groups;
    try {
        groups = registry_->dispatch(req, *res);
    } catch (const EmptyInput& e) {
        return error_response(422, e.what());
    } catch (const InvalidArgument& e) {
        return error_response(422, e.what());
    } catch (const UnknownKeyword& e) {
        return error_response(422, e.what());
    } catch (const EncoderUnavailable& e) {
        return error_response(503, e.what());
    } catch (const EncoderBadResponse& e) {
        return error_response(503, e.what());
    } catch (const UpstreamUnavailable& e) {
        return error_response(503, e.what());
    } catch (const RateLimited& e) {
        return error_response(503, e.what());
    } catch (const Error& e) {
        return error_response(500, e.what());
    }

    std::vector<ApiSuggestionGroup> out;
    for (const auto& g : groups) {
        ApiSuggestionGroup a{g.keywords, api.type, {}};
        for (const auto& t : g.terms) {
            if (a.mesh_terms.size() == config_.max_terms) break;
            a.mesh_terms.push_back(t.name);
        }
        out.push_back(std::move(a));
    }
    return {200, serialize_api_response(out)};
}

ServiceResponse SuggestionService::handle_log(std::string_view body) {
    if (config_.log_path.empty()) return error_response(503, "interaction logging is not configured");
    json doc = json::parse(body, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) return error_response(400, "event must be a JSON object");
    for (const auto& [key, value] : doc.items())
        if (key != "session_id" && key != "timestamp" && key != "kind" && key != "payload")
            return error_response(400, "unknown field '" + key + "'");
    if (!doc.contains("session_id") || !doc["session_id"].is_string() || doc["session_id"].get<std::string>().empty())
        return error_response(400, "session_id must be a non-empty string");
    if (!doc.contains("timestamp") || !doc["timestamp"].is_number_integer() || doc["timestamp"].get<std::int64_t>() < 0)
        return error_response(400, "timestamp must be a non-negative integer (ms since epoch)");
    if (!doc.contains("kind") || !doc["kind"].is_string() || !event_kinds().count(doc["kind"].get<std::string>()))
        return error_response(400, "kind must be one of query_submitted, term_added, term_copied, method_changed");
    if (doc.contains("payload") && !doc["payload"].is_object()) return error_response(400, "payload must be an object");

    const auto session = doc["session_id"].get<std::string>();
    const auto timestamp = doc["timestamp"].get<std::int64_t>();

    std::lock_guard lock(log_mu_);
    if (auto it = last_timestamp_.find(session); it != last_timestamp_.end() && timestamp < it->second)
        return error_response(400, "timestamp goes backwards for session " + session);

    ordered_json line;
    line["session_id"] = session;
    line["timestamp"] = timestamp;
    line["kind"] = doc["kind"];
    line["payload"] = doc.contains("payload") ? ordered_json::parse(doc["payload"].dump()) : ordered_json::object();
    line["received_at"] = now_ms_();
    log_ << line.dump() << '\n';
    log_.flush();
    if (!log_) return error_response(500, "failed to write interaction log");
    last_timestamp_[session] = timestamp;
    return {204, "", "text/plain"};
}

ServiceResponse SuggestionService::handle_health() const {
    auto res = snapshot();
    if (!res) return error_response(503, "resources not loaded");
    ordered_json doc;
    doc["status"] = "ok";
    doc["vocabulary_size"] = res->vocabulary ? res->vocabulary->size() : 0;
    doc["embedding_dim"] = res->mesh_embeddings ? res->mesh_embeddings->dim() : 0;
    doc["encoder"] = res->encoder ? res->encoder->kind() : "none";
    doc["word_vectors"] = res->word_vectors != nullptr;
    doc["types"] = types();
    return {200, doc.dump()};
}

struct HttpServer::Impl {
    explicit Impl(SuggestionService& s) : service(s) {}
    SuggestionService& service;
    httplib::Server server;
};

HttpServer::HttpServer(SuggestionService& service) : impl_(std::make_unique<Impl>(service)) {
    auto& svr = impl_->server;
    auto& svc = impl_->service;
    auto reply = [](httplib::Response& res, const ServiceResponse& r) {
        res.status = r.status;
        if (!r.body.empty()) res.set_content(r.body, r.content_type);
    };
    svr.Post("/suggest", [&svc, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, svc.handle_suggest(req.body));
    });
    svr.Post("/log", [&svc, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, svc.handle_log(req.body));
    });
    svr.Get("/health", [&svc, reply](const httplib::Request&, httplib::Response& res) {
        reply(res, svc.handle_health());
    });
    svr.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    const auto origin = svc.config().cors_origin;
    svr.set_post_routing_handler([origin](const httplib::Request&, httplib::Response& res) {
        if (origin.empty()) return;
        res.set_header("Access-Control-Allow-Origin", origin);
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
        res.set_header("Access-Control-Allow-Headers", "Content-Type");
    });
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void HttpServer::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace meshsuggest
