#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace dense {

using EmbeddingVector = Eigen::VectorXf;

struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Transport kept failing after the retry budget.
struct ProviderUnavailable : ProviderError {
    using ProviderError::ProviderError;
};
/// A vector of the wrong dimension. Never retried.
struct DimensionMismatch : ProviderError {
    using ProviderError::ProviderError;
};
/// Internal signal for one failed transport attempt; embed_texts retries it.
struct TransportError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual const std::string& profile() const = 0;  // provider_id
    virtual int dimension() const = 0;
    virtual std::size_t batch_limit() const = 0;
    virtual int retry_backoff_ms() const { return 200; }

    /// One raw batch; may throw TransportError.
    virtual std::vector<EmbeddingVector> fetch(const std::vector<std::string>& texts) = 0;
};

/// Batches through the provider, preserving order, retrying each batch up to
/// three attempts with exponential backoff, then throwing
/// ProviderUnavailable. Vectors are validated finite and L2-normalized on
/// receipt (a zero vector stays zero).
std::vector<EmbeddingVector> embed_texts(EmbeddingProvider& provider,
                                         const std::vector<std::string>& texts);

/// The deterministic offline embedder: term counts of lowercased word
/// 1-2-grams, signed feature hashing into `dimension` buckets, L2
/// normalization. The profile name salts the hash so distinct profiles give
/// unrelated spaces. Tokenless non-empty text hashes as a single raw term;
/// empty text embeds to the zero vector.
class HashedEmbedder : public EmbeddingProvider {
public:
    HashedEmbedder(int dimension, std::string profile);

    const std::string& profile() const override { return profile_; }
    int dimension() const override { return dimension_; }
    std::size_t batch_limit() const override { return 512; }
    int retry_backoff_ms() const override { return 0; }

    std::vector<EmbeddingVector> fetch(const std::vector<std::string>& texts) override;

    EmbeddingVector embed_one(const std::string& text) const;

private:
    int dimension_;
    std::string profile_;
    std::uint64_t salt_;
};

/// Remote wire contract: POST {url}/embed with {"texts": [...]}, expecting
/// {"vectors": [[...], ...], "dimension": D}. Non-200 or malformed JSON is a
/// transport failure.
class HttpEmbeddingClient : public EmbeddingProvider {
public:
    HttpEmbeddingClient(std::string url, int dimension, std::string profile,
                        std::string api_key = {}, int backoff_ms = 200);
    ~HttpEmbeddingClient() override;

    const std::string& profile() const override { return profile_; }
    int dimension() const override { return dimension_; }
    std::size_t batch_limit() const override { return 64; }
    int retry_backoff_ms() const override { return backoff_ms_; }

    std::vector<EmbeddingVector> fetch(const std::vector<std::string>& texts) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    int dimension_;
    std::string profile_;
    int backoff_ms_;
};

/// Default retrieval profile (384-dim) and evaluation profile (768-dim).
/// Offline they resolve to HashedEmbedder; with a URL, to the HTTP client.
std::unique_ptr<EmbeddingProvider> make_retrieval_provider(const std::string& url = {},
                                                           const std::string& api_key = {});
std::unique_ptr<EmbeddingProvider> make_evaluation_provider(const std::string& url = {},
                                                            const std::string& api_key = {});

}  // namespace dense
