#pragma once

#include <chrono>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "meshsuggest/errors.hpp"

namespace meshsuggest {

struct HttpRequest {
    std::string method = "GET";
    std::string url;  // scheme://host[:port]/path, no query string
    std::vector<std::pair<std::string, std::string>> params;
    std::string body;
    std::string content_type;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

/// Connection-level failure: refused, reset, timed out.
class TransportError : public Error {
public:
    using Error::Error;
};

/// A replay fixture had no recorded interaction for the request.
class ReplayMiss : public Error {
public:
    using Error::Error;
};

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    /// Returns any HTTP status; throws TransportError when no response was received.
    virtual HttpResponse send(const HttpRequest& request) = 0;
};

std::string url_encode(std::string_view text);

/// Stable identity of a request for fixture matching: method, url, sorted params, body.
/// `email`, `api_key` and `tool` are contact/credential parameters and are left out.
std::string fixture_key(const HttpRequest& request);

/// Live HTTP(S) transport. Safe for concurrent use (one connection per call).
class NetworkTransport final : public HttpTransport {
public:
    explicit NetworkTransport(std::chrono::seconds timeout = std::chrono::seconds(30)) : timeout_(timeout) {}
    HttpResponse send(const HttpRequest& request) override;

private:
    std::chrono::seconds timeout_;
};

/// One recorded request with the responses it received, in order.
struct RecordedInteraction {
    HttpRequest request;
    std::vector<HttpResponse> responses;  // status 0 replays as a TransportError
};

/// Serves recorded responses. Repeated requests walk through the response list and
/// then keep returning the last one.
class ReplayTransport final : public HttpTransport {
public:
    explicit ReplayTransport(std::vector<RecordedInteraction> interactions);
    static ReplayTransport load(const std::string& path);

    HttpResponse send(const HttpRequest& request) override;

    /// Number of requests served so far.
    std::size_t served() const;

private:
    struct Slot {
        std::vector<HttpResponse> responses;
        std::size_t cursor = 0;
    };
    mutable std::mutex mu_;
    std::map<std::string, Slot> slots_;
    std::size_t served_ = 0;
};

/// Forwards to another transport and keeps every exchange for saving as a replay fixture.
class RecordingTransport final : public HttpTransport {
public:
    explicit RecordingTransport(HttpTransport& inner) : inner_(inner) {}
    HttpResponse send(const HttpRequest& request) override;

    std::vector<RecordedInteraction> interactions() const;
    void save(const std::string& path) const;

private:
    HttpTransport& inner_;
    mutable std::mutex mu_;
    std::vector<RecordedInteraction> log_;
    std::map<std::string, std::size_t> index_;
};

std::string serialize_fixture(const std::vector<RecordedInteraction>& interactions);
std::vector<RecordedInteraction> parse_fixture(const std::string& text);

}  // namespace meshsuggest
