#include "dense/chunk.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "dense/text_util.hpp"

namespace dense {

using nlohmann::json;

namespace {

std::string make_chunk_id(const ChunkMetadata& m, std::size_t section_ordinal) {
    std::string key = m.subject_id;
    key += '|';
    key += m.hadm_id;
    key += '|';
    key += note_type_name(m.note_type);
    key += '|';
    key += m.section;
    key += '#';
    key += std::to_string(section_ordinal);
    key += '|';
    key += std::to_string(m.char_start);
    return content_digest(key);
}

}  // namespace

std::vector<Chunk> chunk_section(const std::string& body, const ChunkMetadata& base,
                                 std::size_t section_ordinal, const ChunkingConfig& config) {
    if (config.window_size == 0) throw ChunkError("window_size must be positive");
    if (config.overlap >= config.window_size) {
        throw ChunkError("overlap (" + std::to_string(config.overlap) +
                         ") must be smaller than window_size (" +
                         std::to_string(config.window_size) + ")");
    }
    std::vector<Chunk> chunks;
    if (body.empty()) return chunks;

    const std::size_t stride = config.window_size - config.overlap;
    std::size_t start = 0;
    while (true) {
        std::size_t end = std::min(start + config.window_size, body.size());
        Chunk c;
        c.metadata = base;
        c.metadata.char_start = start;
        c.metadata.char_end = end;
        c.text = body.substr(start, end - start);
        c.chunk_id = make_chunk_id(c.metadata, section_ordinal);
        chunks.push_back(std::move(c));
        if (end == body.size()) break;
        start += stride;
    }
    return chunks;
}

std::vector<Chunk> chunk_note(const CleanNote& note, const std::string& chartdate,
                              const ChunkingConfig& config, int& seq_start) {
    std::vector<Chunk> chunks;
    std::size_t ordinal = 0;
    for (const auto& section : note.sections) {
        ChunkMetadata base;
        base.subject_id = note.subject_id;
        base.hadm_id = note.hadm_id;
        base.chartdate = chartdate;
        base.note_type = note.note_type;
        base.section = section.header;
        auto windows = chunk_section(section.body, base, ordinal, config);
        for (auto& c : windows) {
            c.metadata.seq_index = seq_start++;
            chunks.push_back(std::move(c));
        }
        ++ordinal;
    }
    return chunks;
}

std::vector<Chunk> chunk_visit(std::vector<CleanNote> notes, const std::string& chartdate,
                               const ChunkingConfig& config) {
    std::sort(notes.begin(), notes.end(), [](const CleanNote& a, const CleanNote& b) {
        return note_type_name(a.note_type) < note_type_name(b.note_type);
    });
    std::vector<Chunk> chunks;
    int seq = 0;
    for (const auto& note : notes) {
        auto part = chunk_note(note, chartdate, config, seq);
        chunks.insert(chunks.end(), std::make_move_iterator(part.begin()),
                      std::make_move_iterator(part.end()));
    }
    return chunks;
}

std::string reconstruct_section(const std::vector<Chunk>& chunks) {
    if (chunks.empty()) return {};
    if (chunks.front().metadata.char_start != 0) {
        throw ChunkError("section does not start at offset 0");
    }
    std::string body;
    std::size_t covered_end = 0;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        const Chunk& c = chunks[i];
        if (c.metadata.char_end - c.metadata.char_start != c.text.size()) {
            throw ChunkError("chunk offsets disagree with its text length");
        }
        if (i == 0) {
            body = c.text;
            covered_end = c.metadata.char_end;
            continue;
        }
        if (c.metadata.char_start > covered_end) {
            throw ChunkError("gap of " + std::to_string(c.metadata.char_start - covered_end) +
                             " chars before offset " + std::to_string(c.metadata.char_start));
        }
        std::size_t shared = covered_end - c.metadata.char_start;
        if (shared > c.text.size()) shared = c.text.size();
        if (body.compare(c.metadata.char_start, shared, c.text, 0, shared) != 0) {
            throw ChunkError("overlapping chunk text disagrees at offset " +
                             std::to_string(c.metadata.char_start));
        }
        body += c.text.substr(shared);
        covered_end = std::max(covered_end, c.metadata.char_end);
    }
    return body;
}

void write_chunks_jsonl(std::ostream& out, const std::vector<Chunk>& chunks) {
    for (const auto& c : chunks) {
        out << json{{"chunk_id", c.chunk_id},
                    {"text", c.text},
                    {"subject_id", c.metadata.subject_id},
                    {"hadm_id", c.metadata.hadm_id},
                    {"chartdate", c.metadata.chartdate},
                    {"note_type", std::string(note_type_name(c.metadata.note_type))},
                    {"section", c.metadata.section},
                    {"char_start", c.metadata.char_start},
                    {"char_end", c.metadata.char_end},
                    {"seq_index", c.metadata.seq_index}}
                   .dump()
            << '\n';
    }
}

std::vector<Chunk> read_chunks_jsonl(std::istream& in) {
    std::vector<Chunk> chunks;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        Chunk c;
        c.chunk_id = j.at("chunk_id").get<std::string>();
        c.text = j.at("text").get<std::string>();
        c.metadata.subject_id = j.at("subject_id").get<std::string>();
        c.metadata.hadm_id = j.at("hadm_id").get<std::string>();
        c.metadata.chartdate = j.at("chartdate").get<std::string>();
        auto type = note_type_from_name(j.at("note_type").get<std::string>());
        if (!type) throw ChunkError("unknown note_type in chunk store");
        c.metadata.note_type = *type;
        c.metadata.section = j.at("section").get<std::string>();
        c.metadata.char_start = j.at("char_start").get<std::size_t>();
        c.metadata.char_end = j.at("char_end").get<std::size_t>();
        c.metadata.seq_index = j.at("seq_index").get<int>();
        chunks.push_back(std::move(c));
    }
    return chunks;
}

}  // namespace dense
