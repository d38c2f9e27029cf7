#include "dense/embedding.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "dense/text_util.hpp"

namespace dense {

using nlohmann::json;

std::vector<EmbeddingVector> embed_texts(EmbeddingProvider& provider,
                                         const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    const std::size_t limit = provider.batch_limit();

    std::size_t pos = 0;
    while (pos < texts.size()) {
        std::size_t n = std::min(limit, texts.size() - pos);
        std::vector<std::string> batch(texts.begin() + static_cast<long>(pos),
                                       texts.begin() + static_cast<long>(pos + n));
        std::vector<EmbeddingVector> vectors;
        std::string last_error;
        bool ok = false;
        for (int attempt = 0; attempt < 3; ++attempt) {
            if (attempt > 0 && provider.retry_backoff_ms() > 0) {
                std::this_thread::sleep_for(
                    std::chrono::milliseconds(provider.retry_backoff_ms() << (attempt - 1)));
            }
            try {
                vectors = provider.fetch(batch);
                ok = true;
                break;
            } catch (const TransportError& e) {
                last_error = e.what();
            }
        }
        if (!ok) {
            throw ProviderUnavailable("embedding provider '" + provider.profile() +
                                      "' unavailable after 3 attempts: " + last_error);
        }
        if (vectors.size() != batch.size()) {
            throw ProviderError("embedding provider returned " + std::to_string(vectors.size()) +
                                " vectors for " + std::to_string(batch.size()) + " texts");
        }
        for (auto& v : vectors) {
            if (v.size() != provider.dimension()) {
                throw DimensionMismatch("expected dimension " +
                                        std::to_string(provider.dimension()) + ", got " +
                                        std::to_string(v.size()));
            }
            if (!v.allFinite()) throw ProviderError("embedding contains non-finite components");
            float norm = v.norm();
            if (norm > 0.0f) v /= norm;
            out.push_back(std::move(v));
        }
        pos += n;
    }
    return out;
}

// ---------------------------------------------------------------------------
// HashedEmbedder
// ---------------------------------------------------------------------------

HashedEmbedder::HashedEmbedder(int dimension, std::string profile)
    : dimension_(dimension), profile_(std::move(profile)), salt_(fnv1a64(profile_)) {
    if (dimension < 1) throw ProviderError("embedding dimension must be positive");
}

EmbeddingVector HashedEmbedder::embed_one(const std::string& text) const {
    EmbeddingVector v = EmbeddingVector::Zero(dimension_);
    auto tokens = word_tokens(text);
    auto add_term = [&](const std::string& term) {
        std::uint64_t h = fnv1a64(term, salt_);
        auto bucket = static_cast<Eigen::Index>(h % static_cast<std::uint64_t>(dimension_));
        v[bucket] += (h >> 63) ? 1.0f : -1.0f;
    };
    for (const auto& t : tokens) add_term(t);
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) add_term(tokens[i] + " " + tokens[i + 1]);
    if (tokens.empty() && !text.empty()) add_term(text);
    return v;  // embed_texts normalizes
}

std::vector<EmbeddingVector> HashedEmbedder::fetch(const std::vector<std::string>& texts) {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(embed_one(t));
    return out;
}

// ---------------------------------------------------------------------------
// HttpEmbeddingClient
// ---------------------------------------------------------------------------

struct HttpEmbeddingClient::Impl {
    httplib::Client client;
    std::string api_key;

    explicit Impl(const std::string& url, std::string key)
        : client(url), api_key(std::move(key)) {
        client.set_connection_timeout(5, 0);
        client.set_read_timeout(60, 0);
    }
};

HttpEmbeddingClient::HttpEmbeddingClient(std::string url, int dimension, std::string profile,
                                         std::string api_key, int backoff_ms)
    : impl_(std::make_unique<Impl>(url, std::move(api_key))),
      dimension_(dimension),
      profile_(std::move(profile)),
      backoff_ms_(backoff_ms) {}

HttpEmbeddingClient::~HttpEmbeddingClient() = default;

std::vector<EmbeddingVector> HttpEmbeddingClient::fetch(const std::vector<std::string>& texts) {
    json body{{"texts", texts}};
    httplib::Headers headers;
    if (!impl_->api_key.empty()) headers.emplace("Authorization", "Bearer " + impl_->api_key);
    auto res = impl_->client.Post("/embed", headers, body.dump(), "application/json");
    if (!res) throw TransportError("no response from embedding endpoint");
    if (res->status != 200) {
        throw TransportError("embedding endpoint returned status " + std::to_string(res->status));
    }
    json reply;
    try {
        reply = json::parse(res->body);
    } catch (const json::exception& e) {
        throw TransportError(std::string("malformed embedding response: ") + e.what());
    }
    if (reply.contains("dimension") && reply.at("dimension").get<int>() != dimension_) {
        throw DimensionMismatch("endpoint reports dimension " +
                                std::to_string(reply.at("dimension").get<int>()) + ", expected " +
                                std::to_string(dimension_));
    }
    std::vector<EmbeddingVector> out;
    for (const auto& arr : reply.at("vectors")) {
        EmbeddingVector v(arr.size());
        Eigen::Index i = 0;
        for (const auto& x : arr) v[i++] = x.get<float>();
        out.push_back(std::move(v));
    }
    return out;
}

// ---------------------------------------------------------------------------
// profiles
// ---------------------------------------------------------------------------

std::unique_ptr<EmbeddingProvider> make_retrieval_provider(const std::string& url,
                                                           const std::string& api_key) {
    if (url.empty()) return std::make_unique<HashedEmbedder>(384, "fallback-retrieval-384");
    return std::make_unique<HttpEmbeddingClient>(url, 384, "remote-retrieval-384", api_key);
}

std::unique_ptr<EmbeddingProvider> make_evaluation_provider(const std::string& url,
                                                            const std::string& api_key) {
    if (url.empty()) return std::make_unique<HashedEmbedder>(768, "fallback-evaluation-768");
    return std::make_unique<HttpEmbeddingClient>(url, 768, "remote-evaluation-768", api_key);
}

}  // namespace dense
