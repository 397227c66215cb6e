#include "meshsuggest/concept_mapper.hpp"

#include <json.hpp>

#include "meshsuggest/errors.hpp"
#include "meshsuggest/http.hpp"
#include "meshsuggest/text.hpp"

namespace meshsuggest {

std::vector<std::vector<std::string>> HttpConceptMapper::map_concepts(std::span<const std::string> texts) const {
    HttpRequest req;
    req.method = "POST";
    req.url = endpoint_;
    req.content_type = "application/json";
    req.body = nlohmann::json{{"texts", std::vector<std::string>(texts.begin(), texts.end())}}.dump();

    HttpResponse resp;
    try {
        resp = transport_.send(req);
    } catch (const TransportError& e) {
        throw UpstreamUnavailable(std::string("concept mapper: ") + e.what());
    }
    if (resp.status != 200) throw UpstreamUnavailable("concept mapper returned HTTP " + std::to_string(resp.status));
    try {
        auto doc = nlohmann::json::parse(resp.body);
        auto concepts = doc.at("concepts").get<std::vector<std::vector<std::string>>>();
        if (concepts.size() != texts.size())
            throw UpstreamUnavailable("concept mapper returned a different number of results than texts");
        return concepts;
    } catch (const nlohmann::json::exception& e) {
        throw UpstreamUnavailable(std::string("unparseable concept mapper response: ") + e.what());
    }
}

StubConceptMapper::StubConceptMapper(std::map<std::string, std::vector<std::string>> table) {
    for (auto& [text, ids] : table) table_[normalize_name(text)] = std::move(ids);
}

std::vector<std::vector<std::string>> StubConceptMapper::map_concepts(std::span<const std::string> texts) const {
    std::vector<std::vector<std::string>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
        auto it = table_.find(normalize_name(t));
        out.push_back(it == table_.end() ? std::vector<std::string>{} : it->second);
    }
    return out;
}

StubConceptMapper load_stub_concept_mapper(const std::string& path) {
    std::map<std::string, std::vector<std::string>> table;
    std::size_t lineno = 0;
    for (const auto& line : read_lines(path)) {
        ++lineno;
        if (trim(line).empty() || line[0] == '#') continue;
        auto fields = split(line, '\t');
        if (fields.size() != 2) throw MalformedRecord(lineno, "expected text<TAB>ids");
        std::vector<std::string> ids;
        for (auto& id : split(fields[1], ';'))
            if (auto t = trim(id); !t.empty()) ids.emplace_back(t);
        table[fields[0]] = std::move(ids);
    }
    return StubConceptMapper(std::move(table));
}

}  // namespace meshsuggest
