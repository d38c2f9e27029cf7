#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dense/preprocess.hpp"
#include "dense/synthetic.hpp"
#include "dense/text_util.hpp"

#include <map>
#include <sstream>

using namespace dense;

TEST_CASE("de-identification spans become typed placeholders") {
    CHECK(clean_generic("Pt seen on [**2131-4-2**]") == "Pt seen on <DATE>");
    CHECK(clean_generic("Discussed with [**Dr. Alvarez**]") == "Discussed with <NAME>");
    CHECK(clean_generic("Transferred from [**Hospital 12**]") == "Transferred from <LOC>");
    CHECK(clean_generic("ID [**4321 XQ**]") == "ID <PHI>");
    CHECK(clean_generic("") == "");
}

TEST_CASE("unterminated de-id span closes at end of text with a warning") {
    CleanStats stats;
    CHECK(clean_generic("ends with [**2131-4-2", &stats) == "ends with <DATE>");
    CHECK(stats.unterminated_deid == 1);
    CHECK(clean_generic("no problem here", &stats) == "no problem here");
    CHECK(stats.unterminated_deid == 1);
}

TEST_CASE("bullets convert to sentence prose") {
    CHECK(clean_generic("- afebrile\n- tolerating diet") == "afebrile. tolerating diet.");
    CHECK(clean_generic("* one\n* two!") == "one. two!");
    CHECK(clean_generic("1. first\n2) second") == "first. second.");
    CHECK(clean_generic("\xe2\x80\xa2 dot item") == "dot item.");
    // a hyphen mid-sentence is not a bullet
    CHECK(clean_generic("well-appearing patient") == "well-appearing patient");
}

TEST_CASE("key-value runs join into sentences; single pairs stay put") {
    CHECK(clean_generic("HR: 72\nBP: 120/80") == "HR: 72. BP: 120/80.");
    CHECK(clean_generic("HR: 72") == "HR: 72");
    // a protected header key never consolidates
    CHECK(clean_generic("Impression: clear\nFindings: none") == "Impression: clear\nFindings: none");
}

TEST_CASE("whitespace normalizes and output has no carriage returns") {
    CHECK(clean_generic("a   b\t c") == "a b c");
    CHECK(clean_generic("one\r\ntwo\rthree") == "one\ntwo\nthree");
    CHECK(clean_generic("para one\n\n\n\npara two") == "para one\n\npara two");
    CHECK(clean_generic("  \n\nx\n\n ") == "x");
}

TEST_CASE("clean_generic is byte-idempotent on synthetic bodies") {
    auto corpus = generate_synthetic_corpus({5, 2, 6, default_coverage(), 21});
    for (const auto& r : corpus) {
        std::string once = clean_generic(r.text);
        CHECK(clean_generic(once) == once);
        CHECK(once.find("[**") == std::string::npos);
        CHECK(once.find('\r') == std::string::npos);
    }
}

TEST_CASE("radiology impression line maps to the canonical header") {
    std::string text = clean_generic("IMPRESSION: No acute process.\nFINDINGS:\nClear lungs.");
    CleanNote note = standardize_headers(text, NoteType::radiology_reports,
                                         HeaderCatalog::defaults());
    REQUIRE(note.sections.size() == 2);
    CHECK(note.sections[0].header == "Impression");
    CHECK(note.sections[0].body == "No acute process.");
    CHECK(note.sections[1].header == "Findings");
    CHECK(note.sections[1].body == "Clear lungs.");
}

TEST_CASE("SOAP short aliases map to the four canonical sections") {
    std::string text = clean_generic("S: tired\nO: afebrile\nA: improving\nP: discharge tomorrow");
    CleanNote note = standardize_headers(text, NoteType::progress_notes,
                                         HeaderCatalog::defaults());
    REQUIRE(note.sections.size() == 4);
    CHECK(note.sections[0].header == "Subjective");
    CHECK(note.sections[1].header == "Objective");
    CHECK(note.sections[2].header == "Assessment");
    CHECK(note.sections[3].header == "Plan");
    CHECK(note.sections[3].body == "discharge tomorrow");
}

TEST_CASE("header-free text becomes a single Preamble") {
    CleanNote note = standardize_headers("just plain prose with no headers",
                                         NoteType::misc_notes, HeaderCatalog::defaults());
    REQUIRE(note.sections.size() == 1);
    CHECK(note.sections[0].header == "Preamble");
    CHECK(note.sections[0].body == "just plain prose with no headers");
}

TEST_CASE("text before the first header lands in a Preamble") {
    std::string text = "prefix narrative\nImpression:\nall clear";
    CleanNote note = standardize_headers(text, NoteType::radiology_reports,
                                         HeaderCatalog::defaults());
    REQUIRE(note.sections.size() == 2);
    CHECK(note.sections[0].header == "Preamble");
    CHECK(note.sections[0].body == "prefix narrative");
    CHECK(note.sections[1].header == "Impression");
}

TEST_CASE("a sentence starting with an alias word is not a header") {
    std::string text = "Plan to follow up in clinic";
    CleanNote note = standardize_headers(text, NoteType::progress_notes,
                                         HeaderCatalog::defaults());
    REQUIRE(note.sections.size() == 1);
    CHECK(note.sections[0].header == "Preamble");
}

TEST_CASE("content conservation: body tokens equal input tokens minus header lines") {
    auto corpus = generate_synthetic_corpus({4, 2, 6, default_coverage(), 33});
    const HeaderCatalog& catalog = HeaderCatalog::defaults();
    // reuse the synthetic stream per type via its label categories: simplest
    // is to standardize under every type and compare token multisets
    for (const auto& r : corpus) {
        std::string cleaned = clean_generic(r.text);
        for (NoteType t : all_note_types()) {
            CleanNote note = standardize_headers(cleaned, t, catalog);
            std::multiset<std::string> input_tokens;
            {
                auto toks = word_tokens(cleaned);
                input_tokens.insert(toks.begin(), toks.end());
            }
            std::multiset<std::string> covered;
            for (const auto& s : note.sections) {
                for (auto& tok : word_tokens(s.body)) covered.insert(tok);
                for (auto& tok : word_tokens(s.source_line)) covered.insert(tok);
            }
            // header remainders live in the body, the alias words in
            // source_line; together they partition the input
            for (const auto& s : note.sections) {
                if (s.source_line.empty()) continue;
                // remainder tokens are double counted when the header line
                // carried content: drop them once
                std::string remainder;
                std::size_t colon = s.source_line.find(':');
                if (colon != std::string::npos) remainder = s.source_line.substr(colon + 1);
                for (auto& tok : word_tokens(remainder)) {
                    auto it = covered.find(tok);
                    if (it != covered.end()) covered.erase(it);
                }
            }
            CHECK(covered == input_tokens);
        }
    }
}

TEST_CASE("full preprocessor is a no-op on its own rendering") {
    auto corpus = generate_synthetic_corpus({4, 2, 5, default_coverage(), 44});
    const HeaderCatalog& catalog = HeaderCatalog::defaults();
    for (const auto& r : corpus) {
        for (NoteType t : all_note_types()) {
            std::string cleaned = clean_generic(r.text);
            CleanNote note = standardize_headers(cleaned, t, catalog);
            std::string rendered = render_clean_note(note);
            CHECK(clean_generic(rendered) == rendered);
            CleanNote again = standardize_headers(rendered, t, catalog);
            REQUIRE(again.sections.size() == note.sections.size());
            for (std::size_t i = 0; i < note.sections.size(); ++i) {
                CHECK(again.sections[i].header == note.sections[i].header);
                CHECK(again.sections[i].body == note.sections[i].body);
            }
            CHECK(render_clean_note(again) == rendered);
        }
    }
}

TEST_CASE("catalog round-trips through its file format") {
    std::ostringstream out;
    HeaderCatalog::defaults().save(out);
    std::istringstream in(out.str());
    HeaderCatalog loaded = HeaderCatalog::parse(in);
    for (NoteType t : all_note_types()) {
        const auto& a = HeaderCatalog::defaults().entries_for(t);
        const auto& b = loaded.entries_for(t);
        REQUIRE(a.size() == b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].canonical == b[i].canonical);
            CHECK(a[i].aliases == b[i].aliases);
        }
    }
    std::istringstream missing("progress_notes\tSubjective\ts\n");
    CHECK_THROWS_AS(HeaderCatalog::parse(missing), CatalogError);  // other types absent
    std::istringstream bad("not_a_type\tHeader\t\n");
    CHECK_THROWS_AS(HeaderCatalog::parse(bad), CatalogError);
}
