#include "meshsuggest/pubmed.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <thread>
#include <unordered_set>

#include <json.hpp>

#include "meshsuggest/errors.hpp"
#include "meshsuggest/http.hpp"

namespace meshsuggest {

Duration SystemClock::now() const {
    return std::chrono::duration_cast<Duration>(std::chrono::steady_clock::now().time_since_epoch());
}

void SystemClock::sleep_for(Duration d) {
    if (d > Duration::zero()) std::this_thread::sleep_for(d);
}

Duration FakeClock::now() const {
    std::lock_guard lock(mu_);
    return now_;
}

void FakeClock::sleep_for(Duration d) {
    std::lock_guard lock(mu_);
    sleeps_.push_back(d);
    if (d > Duration::zero()) now_ += d;
}

void FakeClock::advance(Duration d) {
    std::lock_guard lock(mu_);
    now_ += d;
}

std::vector<Duration> FakeClock::sleeps() const {
    std::lock_guard lock(mu_);
    return sleeps_;
}

RequestThrottle::RequestThrottle(Clock& clock, std::size_t max_requests, Duration window)
    : clock_(clock), max_(max_requests), window_(window) {
    if (max_ == 0) throw InvalidArgument("throttle needs a positive request budget");
}

void RequestThrottle::acquire() {
    std::lock_guard lock(mu_);
    auto now = clock_.now();
    auto expire = [&] {
        while (!stamps_.empty() && stamps_.front() + window_ <= now) stamps_.pop_front();
    };
    expire();
    if (stamps_.size() >= max_) {
        clock_.sleep_for(stamps_.front() + window_ - now);
        now = clock_.now();
        expire();
    }
    stamps_.push_back(now);
}

bool is_valid_date(std::string_view d) {
    if (d.size() != 10 || d[4] != '/' || d[7] != '/') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (!std::isdigit(static_cast<unsigned char>(d[i]))) return false;
    int month = (d[5] - '0') * 10 + (d[6] - '0');
    int day = (d[8] - '0') * 10 + (d[9] - '0');
    return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

void SearchSpec::validate() const {
    if (query.empty()) throw InvalidArgument("search query is empty");
    if (email.empty()) throw InvalidArgument("E-utilities requires a contact email");
    if (retmax == 0) throw InvalidArgument("retmax must be positive");
    if (mindate && !is_valid_date(*mindate)) throw InvalidArgument("bad mindate " + *mindate);
    if (maxdate && !is_valid_date(*maxdate)) throw InvalidArgument("bad maxdate " + *maxdate);
    // Zero-padded YYYY/MM/DD compares correctly as text.
    if (mindate && maxdate && *mindate > *maxdate) throw InvalidArgument("mindate is after maxdate");
}

PubmedConfig PubmedConfig::from_environment() {
    PubmedConfig c;
    if (const char* key = std::getenv("NCBI_API_KEY"); key && *key) c.api_key = key;
    if (const char* url = std::getenv("MESHSUGGEST_EUTILS_URL"); url && *url) c.base_url = url;
    return c;
}

PubmedClient::PubmedClient(HttpTransport& transport, Clock& clock, PubmedConfig config)
    : transport_(transport),
      clock_(clock),
      config_(std::move(config)),
      throttle_(clock, config_.api_key.empty() ? 3 : 10) {}

std::string PubmedClient::get(const std::vector<std::pair<std::string, std::string>>& params) {
    HttpRequest req;
    req.url = config_.base_url + "/esearch.fcgi";
    req.params = params;
    if (!config_.api_key.empty()) req.params.emplace_back("api_key", config_.api_key);

    enum class Failure { unavailable, rate_limited };
    Failure last = Failure::unavailable;
    std::string detail;
    const std::size_t attempts = config_.backoff.size() + 1;
    for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
        if (attempt > 0) clock_.sleep_for(config_.backoff[attempt - 1]);
        throttle_.acquire();
        HttpResponse resp;
        try {
            resp = transport_.send(req);
        } catch (const TransportError& e) {
            last = Failure::unavailable;
            detail = e.what();
            continue;
        }
        if (resp.status == 200) return resp.body;
        if (resp.status == 429) {
            last = Failure::rate_limited;
            detail = "HTTP 429";
            continue;
        }
        if (resp.status == 400) throw QueryRejected("E-utilities rejected the request: " + resp.body);
        last = Failure::unavailable;
        detail = "HTTP " + std::to_string(resp.status);
    }
    auto msg = "E-utilities failed after " + std::to_string(attempts) + " attempts (" + detail + ")";
    if (last == Failure::rate_limited) throw RateLimited(msg);
    throw UpstreamUnavailable(msg);
}

SearchResult PubmedClient::esearch(const SearchSpec& spec) {
    spec.validate();
    const std::size_t page = std::min(spec.retmax, config_.max_results);

    SearchResult result;
    std::unordered_set<std::string> seen;
    std::size_t retstart = 0;
    bool first = true;
    while (first || retstart < result.total) {
        std::vector<std::pair<std::string, std::string>> params = {
            {"db", "pubmed"},
            {"term", spec.query},
            {"retmode", "json"},
            {"retstart", std::to_string(retstart)},
            {"retmax", std::to_string(page)},
        };
        if (spec.mindate || spec.maxdate) params.emplace_back("datetype", "edat");
        if (spec.mindate) params.emplace_back("mindate", *spec.mindate);
        if (spec.maxdate) params.emplace_back("maxdate", *spec.maxdate);
        params.emplace_back("email", spec.email);

        auto body = get(params);
        std::vector<std::string> ids;
        std::size_t count = 0;
        try {
            auto doc = nlohmann::json::parse(body);
            if (doc.contains("error")) throw QueryRejected(doc["error"].dump());
            const auto& r = doc.at("esearchresult");
            if (r.contains("ERROR")) throw QueryRejected(r["ERROR"].get<std::string>());
            count = std::stoul(r.at("count").get<std::string>());
            ids = r.at("idlist").get<std::vector<std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw MalformedResponse(std::string("unparseable esearch response: ") + e.what());
        } catch (const std::logic_error&) {
            throw MalformedResponse("esearch count is not a number");
        }

        if (first) {
            result.total = count;
            if (count > config_.max_results) throw ResultTruncated(count, config_.max_results);
            first = false;
        } else if (count != result.total) {
            throw MalformedResponse("result count changed while paging");
        }
        if (ids.empty() && retstart < result.total) throw MalformedResponse("esearch paging returned an empty page");
        for (auto& id : ids)
            if (seen.insert(id).second) result.pmids.push_back(std::move(id));
        retstart += page;
    }
    if (result.pmids.size() != result.total)
        throw MalformedResponse("collected " + std::to_string(result.pmids.size()) + " PMIDs, upstream reported " +
                                std::to_string(result.total));
    return result;
}

std::string PubmedClient::translate(std::string_view keyword, const std::string& email) {
    if (email.empty()) throw InvalidArgument("E-utilities requires a contact email");
    return get({{"db", "pubmed"}, {"term", std::string(keyword)}, {"retmode", "json"}, {"retmax", "0"},
                {"email", email}});
}

std::vector<std::string> parse_atm_translation(std::string_view raw_response) {
    std::string translation;
    try {
        auto doc = nlohmann::json::parse(raw_response);
        translation = doc.at("esearchresult").at("querytranslation").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw MalformedResponse(std::string("no query translation in esearch response: ") + e.what());
    }

    static constexpr std::string_view tag = "[MeSH Terms]";
    std::vector<std::string> out;
    std::size_t pos = 0;
    while ((pos = translation.find(tag, pos)) != std::string::npos) {
        std::string term;
        if (pos >= 2 && translation[pos - 1] == '"') {
            auto open = translation.rfind('"', pos - 2);
            if (open != std::string::npos) term = translation.substr(open + 1, pos - 1 - (open + 1));
        } else {
            auto start = pos;
            while (start > 0) {
                char c = translation[start - 1];
                if (std::isspace(static_cast<unsigned char>(c)) || c == '(' || c == ')') break;
                --start;
            }
            term = translation.substr(start, pos - start);
        }
        if (!term.empty() && std::find(out.begin(), out.end(), term) == out.end()) out.push_back(term);
        pos += tag.size();
    }
    return out;
}

}  // namespace meshsuggest
