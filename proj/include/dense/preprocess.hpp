#pragma once

#include <array>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dense/note_types.hpp"

namespace dense {

struct CatalogError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HeaderEntry {
    std::string canonical;
    std::vector<std::string> aliases;  // surface forms; the canonical itself always matches
};

/// Ordered canonical section headers per note type, with alias surface forms.
/// Every type has an entry; misc_notes carries the single "Free-text"
/// pseudo-section.
class HeaderCatalog {
public:
    static const HeaderCatalog& defaults();

    /// Line format: `note_type <TAB> canonical_header <TAB> alias1|alias2|...`
    /// (alias list may be empty). '#' comments and blank lines are skipped.
    static HeaderCatalog load_file(const std::string& path);
    static HeaderCatalog parse(std::istream& in);
    void save(std::ostream& out) const;

    const std::vector<HeaderEntry>& entries_for(NoteType t) const {
        return entries_[static_cast<std::size_t>(t)];
    }

    /// Lowercased canonicals and aliases across all types. clean_generic
    /// treats these as protected keys so key-value consolidation never eats a
    /// section header line.
    const std::set<std::string>& protected_keys() const { return protected_keys_; }

private:
    void add(NoteType t, HeaderEntry entry);
    void finalize();

    std::array<std::vector<HeaderEntry>, kNoteTypeCount> entries_;
    std::set<std::string> protected_keys_;
};

struct CleanStats {
    int unterminated_deid = 0;
};

/// Generic cleaning: Unicode composition, de-identification of `[** ... **]`
/// spans into {<DATE>, <NAME>, <LOC>, <PHI>}, bullet runs to sentence prose,
/// key-value runs joined into sentences, whitespace normalization. Line
/// passes iterate to a fixed point, which makes the whole function
/// byte-idempotent. An unterminated `[**` is closed at end of text and
/// counted in `stats`.
std::string clean_generic(std::string_view text, CleanStats* stats = nullptr);

struct CleanSection {
    std::string header;       // canonical name, or "Preamble"
    std::string body;
    std::string source_line;  // the original header line, empty for Preamble
};

struct CleanNote {
    NoteType note_type = NoteType::misc_notes;
    std::vector<CleanSection> sections;  // document order
    std::string subject_id;
    std::string hadm_id;
};

/// Splits cleaned text at alias lines (line-initial, trailing colon or
/// full-line match, case-insensitive) and rewrites them to canonical headers.
/// Content before any header lands in a synthetic "Preamble" section; a note
/// with no detected headers is a single Preamble.
CleanNote standardize_headers(std::string_view cleaned_text, NoteType type,
                              const HeaderCatalog& catalog, std::string subject_id = {},
                              std::string hadm_id = {});

/// Inverse-ish rendering: canonical header lines and bodies, Preamble body
/// without a header line. Re-running the preprocessor on the rendering is a
/// byte-level no-op.
std::string render_clean_note(const CleanNote& note);

}  // namespace dense
