#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "meshsuggest/embeddings.hpp"

namespace meshsuggest {

class HttpTransport;

/// Turns keyword text into a dense query vector in the MeSH embedding space.
class QueryEncoder {
public:
    virtual ~QueryEncoder() = default;

    /// One vector per input text, in input order.
    virtual std::vector<std::vector<float>> encode(std::span<const std::string> texts) const = 0;
    virtual std::size_t dim() const = 0;
    /// "store" or "http"; reported by the service health check.
    virtual std::string kind() const = 0;
};

/// Offline provider: looks keywords up in a precomputed keyword embedding file.
/// Keys are matched after normalize_name.
class StoreEncoder final : public QueryEncoder {
public:
    explicit StoreEncoder(EmbeddingStore keywords);

    std::vector<std::vector<float>> encode(std::span<const std::string> texts) const override;  // UnknownKeyword
    std::size_t dim() const override { return store_.dim(); }
    std::string kind() const override { return "store"; }

private:
    EmbeddingStore store_;
};

/// Settings passed through to a remote encoder. They only matter on the encoder side.
struct EncoderOptions {
    std::string tokenizer;
    std::optional<int> q_max_len;
    std::optional<int> p_max_len;
};

/// Remote provider. POST {"texts": [...]} -> {"dim": n, "vectors": [[...], ...]}.
class HttpEncoder final : public QueryEncoder {
public:
    HttpEncoder(HttpTransport& transport, std::string endpoint, std::size_t expected_dim, EncoderOptions options = {});

    /// Throws EncoderUnavailable (no response, non-200) or EncoderBadResponse.
    std::vector<std::vector<float>> encode(std::span<const std::string> texts) const override;
    std::size_t dim() const override { return dim_; }
    std::string kind() const override { return "http"; }

private:
    HttpTransport& transport_;
    std::string endpoint_;
    std::size_t dim_;
    EncoderOptions options_;
};

std::vector<float> encode_query(std::string_view text, const QueryEncoder& encoder);

}  // namespace meshsuggest
