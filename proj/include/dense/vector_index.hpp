#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dense/chunk.hpp"
#include "dense/embedding.hpp"

namespace dense {

struct IndexError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using MetadataFilter = std::function<bool(const ChunkMetadata&)>;

struct SearchHit {
    std::string chunk_id;
    double score = 0.0;  // cosine, in [-1, 1]
};

/// Exact in-process cosine index. Entries share one dimension and one
/// provider profile; stored vectors are kept L2-normalized so similarity is a
/// dot product. Reads are const and thread-safe; writes take the
/// single-writer contract.
class VectorIndex {
public:
    VectorIndex(int dimension, std::string provider_id);

    int dimension() const { return dimension_; }
    const std::string& provider_id() const { return provider_id_; }
    std::size_t size() const { return chunks_.size(); }

    /// Inserts chunk/vector pairs. Re-adding an existing chunk_id with an
    /// identical vector is a no-op; a conflicting vector or a wrong dimension
    /// is an IndexError.
    void add(const std::vector<Chunk>& chunks, const std::vector<EmbeddingVector>& vectors);

    /// Up to k hits passing the filter, by descending cosine, ties broken by
    /// ascending chunk_id. Fewer than k matches returns them all. Scores
    /// accumulate left-to-right in double, so an independent scan reproduces
    /// them bit-exactly.
    std::vector<SearchHit> query_topk(const EmbeddingVector& query, std::size_t k,
                                      const MetadataFilter& filter = {}) const;

    const Chunk* find(const std::string& chunk_id) const;
    const std::vector<Chunk>& chunks() const { return chunks_; }

    /// Persistence: `dir/manifest.json` (dimension, provider_id, count) plus
    /// `dir/entries.jsonl`.
    void save(const std::string& dir) const;
    static VectorIndex load(const std::string& dir);

private:
    int dimension_;
    std::string provider_id_;
    std::vector<Chunk> chunks_;
    std::vector<EmbeddingVector> vectors_;
    std::unordered_map<std::string, std::size_t> by_id_;
};

}  // namespace dense
