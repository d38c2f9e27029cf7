#pragma once

#include <iosfwd>
#include <regex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dense/note_types.hpp"

namespace dense {

struct RuleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One remapping rule. `pattern` is a case-insensitive ECMAScript regex
/// searched against the *normalized* description (anchor with ^...$ for an
/// exact match; ".*" matches anything). `category_guard`, when non-empty,
/// restricts the rule to records whose normalized category equals the
/// normalized guard. Lower priority fires first.
struct RemapRule {
    int priority = 0;
    std::string pattern;
    std::string category_guard;
    NoteType target = NoteType::misc_notes;
};

/// Lowercases, collapses punctuation to single spaces, collapses whitespace
/// runs and strips the ends. Idempotent; empty in, empty out.
std::string normalize_label(std::string_view raw);

/// An ordered, compiled rule list. Classification is pure and stateless after
/// construction, so a const RuleSet is safe to share across threads.
class RuleSet {
public:
    /// The shipped default covering the standard description variants,
    /// category fallbacks and the documented misspellings. The split between
    /// nursing_shift_notes and nursing_other_notes uses clock-range detection
    /// on the description, which is a best-effort stand-in; extend via a rule
    /// file for site-specific labels.
    static RuleSet defaults();

    /// Sorts by priority (stable) and compiles patterns. Throws RuleError on
    /// a pattern that does not compile.
    static RuleSet from_rules(std::vector<RemapRule> rules);

    /// Line format: `priority <TAB> pattern <TAB> category-guard <TAB> target`
    /// (guard may be empty). '#' comments and blank lines are skipped.
    static RuleSet load_file(const std::string& path);
    static RuleSet parse(std::istream& in);

    void save(std::ostream& out) const;

    const std::vector<RemapRule>& rules() const { return rules_; }

    /// Index of the first rule matching (normalized category, normalized
    /// description), or -1.
    int first_match(const std::string& norm_category, const std::string& norm_description) const;

    bool rule_matches(std::size_t rule_index, const std::string& norm_category,
                      const std::string& norm_description) const;

private:
    std::vector<RemapRule> rules_;
    std::vector<std::regex> compiled_;
    std::vector<std::string> norm_guards_;
};

/// Total function: highest-priority matching rule wins, misc_notes when
/// nothing matches.
NoteType classify_label(std::string_view category, std::string_view description,
                        const RuleSet& rules);

inline NoteType classify_note(const RawNoteRecord& record, const RuleSet& rules) {
    return classify_label(record.category, record.description, rules);
}

// ---------------------------------------------------------------------------
// Rule-set validation
// ---------------------------------------------------------------------------

struct RuleValidationReport {
    std::vector<std::string> errors;    // equal-priority rules matching one fixture
    std::vector<std::string> warnings;  // duplicate priorities, unreachable rules
    bool ok() const { return errors.empty(); }
};

/// Fixtures are (category, description) pairs. A rule nobody reaches on the
/// fixture corpus is flagged unreachable; two rules of equal priority that
/// both match some fixture are an error.
RuleValidationReport validate_rules(const RuleSet& rules,
                                    const std::vector<std::pair<std::string, std::string>>& fixtures);

/// The built-in fixture corpus used to gate the default rule set.
const std::vector<std::pair<std::string, std::string>>& default_rule_fixtures();

// ---------------------------------------------------------------------------
// Notes CSV: header row
// ROW_ID,SUBJECT_ID,HADM_ID,CHARTDATE,CHARTTIME,CATEGORY,DESCRIPTION,TEXT
// ---------------------------------------------------------------------------

std::vector<RawNoteRecord> read_notes_csv(std::istream& in);
void write_notes_csv(std::ostream& out, const std::vector<RawNoteRecord>& records);

/// Classified CSV appends a NOTE_TYPE column.
void write_classified_csv(std::ostream& out, const std::vector<RawNoteRecord>& records,
                          const std::vector<NoteType>& types);
std::vector<std::pair<RawNoteRecord, NoteType>> read_classified_csv(std::istream& in);

}  // namespace dense
