#pragma once

#include <chrono>
#include <deque>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace meshsuggest {

class HttpTransport;

using Duration = std::chrono::nanoseconds;

class Clock {
public:
    virtual ~Clock() = default;
    virtual Duration now() const = 0;
    virtual void sleep_for(Duration d) = 0;
};

class SystemClock final : public Clock {
public:
    Duration now() const override;
    void sleep_for(Duration d) override;
};

/// Deterministic clock for tests: sleeping advances time instantly.
class FakeClock final : public Clock {
public:
    Duration now() const override;
    void sleep_for(Duration d) override;
    void advance(Duration d);
    /// Every sleep requested so far.
    std::vector<Duration> sleeps() const;

private:
    mutable std::mutex mu_;
    Duration now_{0};
    std::vector<Duration> sleeps_;
};

/// Sliding-window limiter: at most `max_requests` acquisitions in any window.
/// acquire() blocks (via the clock) and serialises callers.
class RequestThrottle {
public:
    RequestThrottle(Clock& clock, std::size_t max_requests, Duration window = std::chrono::seconds(1));
    void acquire();
    std::size_t max_requests() const noexcept { return max_; }

private:
    Clock& clock_;
    std::size_t max_;
    Duration window_;
    std::mutex mu_;
    std::deque<Duration> stamps_;
};

/// YYYY/MM/DD with a plausible month and day.
bool is_valid_date(std::string_view date);

struct SearchSpec {
    std::string query;
    std::optional<std::string> mindate;
    std::optional<std::string> maxdate;
    std::string email;
    std::size_t retmax = 10000;

    /// Throws InvalidArgument.
    void validate() const;
};

struct SearchResult {
    std::vector<std::string> pmids;
    std::size_t total = 0;
};

struct PubmedConfig {
    std::string base_url = "https://eutils.ncbi.nlm.nih.gov/entrez/eutils";
    std::string api_key;
    /// One initial try plus one retry per backoff step.
    std::vector<Duration> backoff = {std::chrono::seconds(1), std::chrono::seconds(2), std::chrono::seconds(4)};
    std::size_t max_results = 1'000'000;

    /// Reads NCBI_API_KEY and MESHSUGGEST_EUTILS_URL when set.
    static PubmedConfig from_environment();
};

/// E-utilities esearch client. Shareable across threads; dispatch goes through one throttle
/// (3 requests/s, 10 with an API key).
class PubmedClient {
public:
    PubmedClient(HttpTransport& transport, Clock& clock, PubmedConfig config = {});

    /// Fetches every page of PMIDs. Throws UpstreamUnavailable, RateLimited, QueryRejected,
    /// MalformedResponse, ResultTruncated, InvalidArgument.
    SearchResult esearch(const SearchSpec& spec);

    /// Raw esearch response for a keyword with no PMIDs requested, carrying the ATM translation.
    std::string translate(std::string_view keyword, const std::string& email);

    const PubmedConfig& config() const noexcept { return config_; }

private:
    std::string get(const std::vector<std::pair<std::string, std::string>>& params);

    HttpTransport& transport_;
    Clock& clock_;
    PubmedConfig config_;
    RequestThrottle throttle_;
};

/// MeSH headings tagged `[MeSH Terms]` in an esearch query translation, in order, unquoted,
/// without duplicates. Throws MalformedResponse when the translation field is missing.
std::vector<std::string> parse_atm_translation(std::string_view raw_response);

}  // namespace meshsuggest
