#include "meshsuggest/encoder.hpp"

#include <cmath>

#include <json.hpp>

#include "meshsuggest/errors.hpp"
#include "meshsuggest/http.hpp"
#include "meshsuggest/text.hpp"

namespace meshsuggest {

StoreEncoder::StoreEncoder(EmbeddingStore keywords) {
    std::vector<std::pair<std::string, std::vector<float>>> normalized;
    normalized.reserve(keywords.size());
    for (std::size_t r = 0; r < keywords.size(); ++r) {
        auto v = keywords.row(r);
        normalized.emplace_back(normalize_name(keywords.id(r)), std::vector<float>(v.begin(), v.end()));
    }
    store_ = EmbeddingStore::from_vectors(keywords.dim(), std::move(normalized));
}

std::vector<std::vector<float>> StoreEncoder::encode(std::span<const std::string> texts) const {
    std::vector<std::vector<float>> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
        auto v = store_.find(normalize_name(t));
        if (!v) throw UnknownKeyword(t);
        out.emplace_back(v->begin(), v->end());
    }
    return out;
}

HttpEncoder::HttpEncoder(HttpTransport& transport, std::string endpoint, std::size_t expected_dim,
                         EncoderOptions options)
    : transport_(transport), endpoint_(std::move(endpoint)), dim_(expected_dim), options_(std::move(options)) {}

std::vector<std::vector<float>> HttpEncoder::encode(std::span<const std::string> texts) const {
    nlohmann::json body;
    body["texts"] = std::vector<std::string>(texts.begin(), texts.end());
    if (!options_.tokenizer.empty()) body["tokenizer"] = options_.tokenizer;
    if (options_.q_max_len) body["q_max_len"] = *options_.q_max_len;
    if (options_.p_max_len) body["p_max_len"] = *options_.p_max_len;

    HttpRequest req;
    req.method = "POST";
    req.url = endpoint_;
    req.body = body.dump();
    req.content_type = "application/json";

    HttpResponse resp;
    try {
        resp = transport_.send(req);
    } catch (const TransportError& e) {
        throw EncoderUnavailable(e.what());
    }
    if (resp.status != 200) throw EncoderUnavailable("encoder returned HTTP " + std::to_string(resp.status));

    std::vector<std::vector<float>> out;
    try {
        auto doc = nlohmann::json::parse(resp.body);
        auto dim = doc.at("dim").get<std::size_t>();
        if (dim != dim_)
            throw EncoderBadResponse("encoder dim " + std::to_string(dim) + ", expected " + std::to_string(dim_));
        const auto& vectors = doc.at("vectors");
        if (!vectors.is_array() || vectors.size() != texts.size())
            throw EncoderBadResponse("encoder returned a different number of vectors than texts");
        for (const auto& v : vectors) {
            auto& row = out.emplace_back(v.get<std::vector<float>>());
            if (row.size() != dim_) throw EncoderBadResponse("encoder vector has wrong dimension");
            for (float x : row)
                if (!std::isfinite(x)) throw EncoderBadResponse("encoder vector has non-finite value");
        }
    } catch (const nlohmann::json::exception& e) {
        throw EncoderBadResponse(std::string("unparseable encoder response: ") + e.what());
    }
    return out;
}

std::vector<float> encode_query(std::string_view text, const QueryEncoder& encoder) {
    std::string s(text);
    auto vectors = encoder.encode(std::span<const std::string>(&s, 1));
    return std::move(vectors.front());
}

}  // namespace meshsuggest
