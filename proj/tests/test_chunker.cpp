#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dense/chunk.hpp"

#include <random>
#include <set>
#include <sstream>

using namespace dense;

namespace {

ChunkMetadata base_meta() {
    ChunkMetadata m;
    m.subject_id = "s1";
    m.hadm_id = "h1";
    m.chartdate = "2131-04-02";
    m.note_type = NoteType::radiology_reports;
    m.section = "Findings";
    return m;
}

// Independent window-arithmetic oracle: enumerate starts with the stride and
// clip the final end.
std::vector<std::pair<std::size_t, std::size_t>> window_oracle(std::size_t len, std::size_t window,
                                                               std::size_t overlap) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    if (len == 0) return spans;
    std::size_t stride = window - overlap;
    for (std::size_t start = 0;; start += stride) {
        std::size_t end = start + window < len ? start + window : len;
        spans.emplace_back(start, end);
        if (end == len) break;
    }
    return spans;
}

std::string deterministic_text(std::size_t len, std::uint32_t seed) {
    std::string s(len, 'x');
    std::mt19937 rng(seed);
    for (auto& c : s) c = static_cast<char>('a' + rng() % 26);
    return s;
}

}  // namespace

TEST_CASE("short section yields a single chunk") {
    std::string body = deterministic_text(100, 1);
    auto chunks = chunk_section(body, base_meta(), 0, {});
    REQUIRE(chunks.size() == 1);
    CHECK(chunks[0].metadata.char_start == 0);
    CHECK(chunks[0].metadata.char_end == 100);
    CHECK(chunks[0].text == body);
}

TEST_CASE("6000-char section produces the documented spans") {
    std::string body = deterministic_text(6000, 2);
    auto chunks = chunk_section(body, base_meta(), 0, {});
    REQUIRE(chunks.size() == 3);
    CHECK(chunks[0].metadata.char_start == 0);
    CHECK(chunks[0].metadata.char_end == 3000);
    CHECK(chunks[1].metadata.char_start == 2700);
    CHECK(chunks[1].metadata.char_end == 5700);
    CHECK(chunks[2].metadata.char_start == 5400);
    CHECK(chunks[2].metadata.char_end == 6000);
    // consecutive windows share exactly `overlap` characters here
    CHECK(chunks[0].text.substr(2700) == chunks[1].text.substr(0, 300));
}

TEST_CASE("empty section yields no chunks") {
    CHECK(chunk_section("", base_meta(), 0, {}).empty());
}

TEST_CASE("overlap >= window is rejected") {
    CHECK_THROWS_AS(chunk_section("abc", base_meta(), 0, {100, 100}), ChunkError);
    CHECK_THROWS_AS(chunk_section("abc", base_meta(), 0, {0, 0}), ChunkError);
}

TEST_CASE("spans match the window oracle across lengths") {
    for (std::size_t len : {1u, 299u, 300u, 2999u, 3000u, 3001u, 5700u, 5701u, 8100u, 20000u}) {
        std::string body = deterministic_text(len, static_cast<std::uint32_t>(len));
        auto chunks = chunk_section(body, base_meta(), 0, {});
        auto oracle = window_oracle(len, 3000, 300);
        REQUIRE(chunks.size() == oracle.size());
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            CHECK(chunks[i].metadata.char_start == oracle[i].first);
            CHECK(chunks[i].metadata.char_end == oracle[i].second);
        }
        // boundary sanity: all chunks within the window, non-final windows full
        for (std::size_t i = 0; i < chunks.size(); ++i) {
            CHECK(chunks[i].text.size() <= 3000);
            if (i + 1 < chunks.size()) CHECK(chunks[i].text.size() == 3000);
        }
    }
}

TEST_CASE("round-trip over randomized section lengths") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 120; ++trial) {
        std::size_t len = rng() % 20001;
        std::string body = deterministic_text(len, rng());
        auto chunks = chunk_section(body, base_meta(), 0, {});
        CHECK(reconstruct_section(chunks) == body);
        // coverage: the union of [start,end) is [0,len)
        std::size_t covered = 0;
        for (const auto& c : chunks) {
            CHECK(c.metadata.char_start <= covered);
            covered = std::max(covered, c.metadata.char_end);
        }
        CHECK(covered == len);
    }
}

TEST_CASE("round-trip with non-default geometry") {
    std::string body = deterministic_text(1234, 5);
    ChunkingConfig cfg{100, 30};
    auto chunks = chunk_section(body, base_meta(), 0, cfg);
    CHECK(reconstruct_section(chunks) == body);
}

TEST_CASE("reconstruct rejects gaps and inconsistent overlaps") {
    std::string body = deterministic_text(6000, 7);
    auto chunks = chunk_section(body, base_meta(), 0, {});
    REQUIRE(chunks.size() == 3);

    auto gap = chunks;
    gap.erase(gap.begin() + 1);
    CHECK_THROWS_AS(reconstruct_section(gap), ChunkError);

    auto bad = chunks;
    bad[1].text[0] = bad[1].text[0] == 'a' ? 'b' : 'a';
    CHECK_THROWS_AS(reconstruct_section(bad), ChunkError);

    // single chunk is its own reconstruction
    CHECK(reconstruct_section({chunks[0]}) == chunks[0].text);
}

TEST_CASE("chunk ids are deterministic and unique across a visit") {
    CleanNote note;
    note.note_type = NoteType::radiology_reports;
    note.subject_id = "s1";
    note.hadm_id = "h1";
    // the same canonical section appearing twice must not collide
    note.sections.push_back({"Findings", deterministic_text(4000, 11), "Findings:"});
    note.sections.push_back({"Findings", deterministic_text(200, 12), "Findings:"});
    auto chunks = chunk_visit({note}, "2131-04-02", {});
    std::set<std::string> ids;
    for (const auto& c : chunks) ids.insert(c.chunk_id);
    CHECK(ids.size() == chunks.size());

    auto again = chunk_visit({note}, "2131-04-02", {});
    REQUIRE(again.size() == chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) CHECK(again[i].chunk_id == chunks[i].chunk_id);
}

TEST_CASE("visit chunking orders by note type and numbers seq_index densely") {
    CleanNote rad;
    rad.note_type = NoteType::radiology_reports;
    rad.subject_id = "s1";
    rad.hadm_id = "h1";
    rad.sections.push_back({"Impression", "clear", "Impression:"});
    CleanNote adm;
    adm.note_type = NoteType::admission_notes;
    adm.subject_id = "s1";
    adm.hadm_id = "h1";
    adm.sections.push_back({"Chief Complaint", "dyspnea", "Chief Complaint:"});
    auto chunks = chunk_visit({rad, adm}, "2131-04-02", {});
    REQUIRE(chunks.size() == 2);
    CHECK(chunks[0].metadata.note_type == NoteType::admission_notes);
    CHECK(chunks[0].metadata.seq_index == 0);
    CHECK(chunks[1].metadata.note_type == NoteType::radiology_reports);
    CHECK(chunks[1].metadata.seq_index == 1);
}

TEST_CASE("chunk store round-trips through JSONL") {
    std::string body = deterministic_text(7000, 21);
    auto chunks = chunk_section(body, base_meta(), 0, {});
    std::ostringstream out;
    write_chunks_jsonl(out, chunks);
    std::istringstream in(out.str());
    auto back = read_chunks_jsonl(in);
    REQUIRE(back.size() == chunks.size());
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        CHECK(back[i].chunk_id == chunks[i].chunk_id);
        CHECK(back[i].text == chunks[i].text);
        CHECK(back[i].metadata.char_start == chunks[i].metadata.char_start);
        CHECK(back[i].metadata.seq_index == chunks[i].metadata.seq_index);
        CHECK(back[i].metadata.note_type == chunks[i].metadata.note_type);
    }
    CHECK(reconstruct_section(back) == body);
}
