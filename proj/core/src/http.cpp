#include "meshsuggest/http.hpp"

#include <algorithm>
#include <fstream>

#include <httplib.h>
#include <json.hpp>

#include "meshsuggest/text.hpp"

namespace meshsuggest {

namespace {

using nlohmann::ordered_json;

bool is_contact_param(const std::string& name) {
    return name == "email" || name == "api_key" || name == "tool";
}

std::string encode_query(const std::vector<std::pair<std::string, std::string>>& params) {
    std::string out;
    for (const auto& [k, v] : params) {
        if (!out.empty()) out.push_back('&');
        out += url_encode(k);
        out.push_back('=');
        out += url_encode(v);
    }
    return out;
}

struct SplitUrl {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw InvalidArgument("URL without scheme: " + url);
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string url_encode(std::string_view text) {
    static constexpr char hex[] = "0123456789ABCDEF";
    std::string out;
    out.reserve(text.size());
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
            out.push_back(ch);
        } else {
            out.push_back('%');
            out.push_back(hex[c >> 4]);
            out.push_back(hex[c & 0xF]);
        }
    }
    return out;
}

std::string fixture_key(const HttpRequest& request) {
    std::vector<std::pair<std::string, std::string>> params;
    for (const auto& p : request.params)
        if (!is_contact_param(p.first)) params.push_back(p);
    std::stable_sort(params.begin(), params.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    std::string key = request.method + " " + request.url + "?" + encode_query(params);
    if (!request.body.empty()) key += "\n" + request.body;
    return key;
}

HttpResponse NetworkTransport::send(const HttpRequest& request) {
    auto [origin, path] = split_url(request.url);
    httplib::Client client(origin);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_write_timeout(timeout_);
    client.set_follow_location(true);

    auto target = path;
    if (!request.params.empty()) target += "?" + encode_query(request.params);

    httplib::Result res;
    if (request.method == "GET") {
        res = client.Get(target);
    } else if (request.method == "POST") {
        res = client.Post(target, request.body,
                          request.content_type.empty() ? "application/json" : request.content_type);
    } else {
        throw InvalidArgument("unsupported HTTP method " + request.method);
    }
    if (!res) throw TransportError(request.url + ": " + httplib::to_string(res.error()));
    return {res->status, res->body};
}

ReplayTransport::ReplayTransport(std::vector<RecordedInteraction> interactions) {
    for (auto& i : interactions) {
        auto& slot = slots_[fixture_key(i.request)];
        slot.responses.insert(slot.responses.end(), std::make_move_iterator(i.responses.begin()),
                              std::make_move_iterator(i.responses.end()));
    }
}

ReplayTransport ReplayTransport::load(const std::string& path) {
    return ReplayTransport(parse_fixture(read_file(path)));
}

HttpResponse ReplayTransport::send(const HttpRequest& request) {
    auto key = fixture_key(request);
    std::lock_guard lock(mu_);
    auto it = slots_.find(key);
    if (it == slots_.end() || it->second.responses.empty()) throw ReplayMiss("no recorded response for " + key);
    auto& slot = it->second;
    const auto& r = slot.responses[std::min(slot.cursor, slot.responses.size() - 1)];
    ++slot.cursor;
    ++served_;
    if (r.status == 0) throw TransportError("recorded connection failure for " + request.url);
    return r;
}

std::size_t ReplayTransport::served() const {
    std::lock_guard lock(mu_);
    return served_;
}

HttpResponse RecordingTransport::send(const HttpRequest& request) {
    HttpResponse response;
    bool failed = false;
    std::string what;
    try {
        response = inner_.send(request);
    } catch (const TransportError& e) {
        failed = true;
        what = e.what();
    }
    {
        std::lock_guard lock(mu_);
        auto key = fixture_key(request);
        auto [it, inserted] = index_.emplace(key, log_.size());
        if (inserted) log_.push_back({request, {}});
        log_[it->second].responses.push_back(failed ? HttpResponse{} : response);
    }
    if (failed) throw TransportError(what);
    return response;
}

std::vector<RecordedInteraction> RecordingTransport::interactions() const {
    std::lock_guard lock(mu_);
    return log_;
}

void RecordingTransport::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InvalidArgument("cannot write fixture " + path);
    out << serialize_fixture(interactions());
}

std::string serialize_fixture(const std::vector<RecordedInteraction>& interactions) {
    ordered_json doc;
    doc["interactions"] = ordered_json::array();
    for (const auto& i : interactions) {
        ordered_json req;
        req["method"] = i.request.method;
        req["url"] = i.request.url;
        req["params"] = ordered_json::array();
        for (const auto& [k, v] : i.request.params)
            if (!is_contact_param(k)) req["params"].push_back({k, v});
        if (!i.request.body.empty()) req["body"] = i.request.body;
        ordered_json responses = ordered_json::array();
        for (const auto& r : i.responses) responses.push_back({{"status", r.status}, {"body", r.body}});
        doc["interactions"].push_back({{"request", req}, {"responses", responses}});
    }
    return doc.dump(2) + "\n";
}

std::vector<RecordedInteraction> parse_fixture(const std::string& text) {
    std::vector<RecordedInteraction> out;
    try {
        auto doc = nlohmann::json::parse(text);
        for (const auto& item : doc.at("interactions")) {
            RecordedInteraction i;
            const auto& req = item.at("request");
            i.request.method = req.value("method", "GET");
            i.request.url = req.at("url").get<std::string>();
            if (req.contains("params"))
                for (const auto& p : req["params"])
                    i.request.params.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
            i.request.body = req.value("body", "");
            for (const auto& r : item.at("responses")) {
                HttpResponse resp;
                resp.status = r.at("status").get<int>();
                // Hand-written fixtures may carry the body as inline JSON for readability.
                if (r.contains("json"))
                    resp.body = r["json"].dump();
                else
                    resp.body = r.value("body", "");
                i.responses.push_back(std::move(resp));
            }
            out.push_back(std::move(i));
        }
    } catch (const nlohmann::json::exception& e) {
        throw MalformedResponse(std::string("invalid replay fixture: ") + e.what());
    }
    return out;
}

}  // namespace meshsuggest
