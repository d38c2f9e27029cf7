#include "dense/vector_index.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace dense {

using nlohmann::json;
namespace fs = std::filesystem;

VectorIndex::VectorIndex(int dimension, std::string provider_id)
    : dimension_(dimension), provider_id_(std::move(provider_id)) {
    if (dimension < 1) throw IndexError("index dimension must be positive");
}

void VectorIndex::add(const std::vector<Chunk>& chunks, const std::vector<EmbeddingVector>& vectors) {
    if (chunks.size() != vectors.size()) {
        throw IndexError("chunk/vector count mismatch: " + std::to_string(chunks.size()) + " vs " +
                         std::to_string(vectors.size()));
    }
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        if (vectors[i].size() != dimension_) {
            throw IndexError("vector dimension " + std::to_string(vectors[i].size()) +
                             " does not match index dimension " + std::to_string(dimension_));
        }
        EmbeddingVector v = vectors[i];
        float norm = v.norm();
        // already-normalized input is stored bit-for-bit; only an
        // out-of-tolerance vector is rescaled
        if (norm > 0.0f && std::abs(norm - 1.0f) > 1e-6f) v /= norm;

        auto it = by_id_.find(chunks[i].chunk_id);
        if (it != by_id_.end()) {
            if (vectors_[it->second] == v) continue;  // idempotent re-add
            throw IndexError("chunk " + chunks[i].chunk_id + " re-added with a different vector");
        }
        by_id_.emplace(chunks[i].chunk_id, chunks_.size());
        chunks_.push_back(chunks[i]);
        vectors_.push_back(std::move(v));
    }
}

std::vector<SearchHit> VectorIndex::query_topk(const EmbeddingVector& query, std::size_t k,
                                               const MetadataFilter& filter) const {
    if (query.size() != dimension_) {
        throw IndexError("query dimension " + std::to_string(query.size()) +
                         " does not match index dimension " + std::to_string(dimension_));
    }
    std::vector<SearchHit> hits;
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        if (filter && !filter(chunks_[i].metadata)) continue;
        const float* a = vectors_[i].data();
        const float* b = query.data();
        double score = 0.0;
        for (int j = 0; j < dimension_; ++j) {
            score += static_cast<double>(a[j]) * static_cast<double>(b[j]);
        }
        hits.push_back({chunks_[i].chunk_id, score});
    }
    std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.chunk_id < b.chunk_id;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

const Chunk* VectorIndex::find(const std::string& chunk_id) const {
    auto it = by_id_.find(chunk_id);
    return it == by_id_.end() ? nullptr : &chunks_[it->second];
}

void VectorIndex::save(const std::string& dir) const {
    fs::create_directories(dir);
    {
        std::ofstream manifest(fs::path(dir) / "manifest.json");
        manifest << json{{"dimension", dimension_},
                         {"provider_id", provider_id_},
                         {"count", chunks_.size()}}
                        .dump(2)
                 << '\n';
    }
    std::ofstream entries(fs::path(dir) / "entries.jsonl");
    for (std::size_t i = 0; i < chunks_.size(); ++i) {
        const Chunk& c = chunks_[i];
        std::vector<float> vec(vectors_[i].data(), vectors_[i].data() + vectors_[i].size());
        entries << json{{"chunk_id", c.chunk_id},
                        {"text", c.text},
                        {"subject_id", c.metadata.subject_id},
                        {"hadm_id", c.metadata.hadm_id},
                        {"chartdate", c.metadata.chartdate},
                        {"note_type", std::string(note_type_name(c.metadata.note_type))},
                        {"section", c.metadata.section},
                        {"char_start", c.metadata.char_start},
                        {"char_end", c.metadata.char_end},
                        {"seq_index", c.metadata.seq_index},
                        {"vector", vec}}
                       .dump()
                << '\n';
    }
}

VectorIndex VectorIndex::load(const std::string& dir) {
    std::ifstream manifest_in(fs::path(dir) / "manifest.json");
    if (!manifest_in) throw IndexError("missing index manifest in " + dir);
    json manifest = json::parse(manifest_in);
    VectorIndex index(manifest.at("dimension").get<int>(),
                      manifest.at("provider_id").get<std::string>());

    std::ifstream entries(fs::path(dir) / "entries.jsonl");
    if (!entries) throw IndexError("missing index entries in " + dir);
    std::string line;
    while (std::getline(entries, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        Chunk c;
        c.chunk_id = j.at("chunk_id").get<std::string>();
        c.text = j.at("text").get<std::string>();
        c.metadata.subject_id = j.at("subject_id").get<std::string>();
        c.metadata.hadm_id = j.at("hadm_id").get<std::string>();
        c.metadata.chartdate = j.at("chartdate").get<std::string>();
        auto type = note_type_from_name(j.at("note_type").get<std::string>());
        if (!type) throw IndexError("unknown note_type in index entry");
        c.metadata.note_type = *type;
        c.metadata.section = j.at("section").get<std::string>();
        c.metadata.char_start = j.at("char_start").get<std::size_t>();
        c.metadata.char_end = j.at("char_end").get<std::size_t>();
        c.metadata.seq_index = j.at("seq_index").get<int>();
        auto values = j.at("vector").get<std::vector<float>>();
        EmbeddingVector v(static_cast<Eigen::Index>(values.size()));
        for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
        index.add({std::move(c)}, {std::move(v)});
    }
    std::size_t expected = manifest.at("count").get<std::size_t>();
    if (index.size() != expected) {
        throw IndexError("index entry count " + std::to_string(index.size()) +
                         " does not match manifest count " + std::to_string(expected));
    }
    return index;
}

}  // namespace dense
