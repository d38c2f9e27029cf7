#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "dense/note_types.hpp"
#include "dense/preprocess.hpp"

namespace dense {

struct ChunkError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ChunkMetadata {
    std::string subject_id;
    std::string hadm_id;
    std::string chartdate;
    NoteType note_type = NoteType::misc_notes;
    std::string section;          // canonical header
    std::size_t char_start = 0;   // offsets into the section body
    std::size_t char_end = 0;
    int seq_index = 0;            // chronological ordinal within the visit
};

struct Chunk {
    std::string chunk_id;  // deterministic hex id, unique within a corpus
    std::string text;
    ChunkMetadata metadata;
};

struct ChunkingConfig {
    std::size_t window_size = 3000;
    std::size_t overlap = 300;
};

/// Windows one section body. Bodies at most window_size long yield a single
/// chunk; longer bodies yield windows starting at multiples of
/// (window_size - overlap), the last one ending exactly at the body end.
/// `section_ordinal` distinguishes repeated canonical headers within one
/// visit column so chunk ids stay unique. Empty bodies yield no chunks.
/// Throws ChunkError when overlap >= window_size or window_size == 0.
std::vector<Chunk> chunk_section(const std::string& body, const ChunkMetadata& base,
                                 std::size_t section_ordinal, const ChunkingConfig& config);

/// Chunks every section of one CleanNote, assigning seq_index from
/// `seq_start` onward. Returns the chunks; `seq_start` advances past them.
std::vector<Chunk> chunk_note(const CleanNote& note, const std::string& chartdate,
                              const ChunkingConfig& config, int& seq_start);

/// Chunks a whole visit: notes ordered by note type name, sections in
/// document order, seq_index dense from zero.
std::vector<Chunk> chunk_visit(std::vector<CleanNote> notes, const std::string& chartdate,
                               const ChunkingConfig& config);

/// Reassembles the original section body from its chunks (sorted by
/// char_start). Throws ChunkError on a gap between consecutive chunks or
/// when the shared region disagrees between neighbours.
std::string reconstruct_section(const std::vector<Chunk>& chunks);

void write_chunks_jsonl(std::ostream& out, const std::vector<Chunk>& chunks);
std::vector<Chunk> read_chunks_jsonl(std::istream& in);

}  // namespace dense
