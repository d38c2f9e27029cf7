#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dense/note_types.hpp"

namespace dense {

/// One hospital admission, pivoted: a column per canonical note type. Empty
/// string means the type is absent. Texts within a column are concatenated in
/// (charttime, row_id) order with a blank-line separator, so downstream
/// chunking can treat the join as a paragraph break.
struct VisitRecord {
    std::string subject_id;
    std::string hadm_id;
    std::string chartdate;  // earliest note date of the admission
    std::array<std::string, kNoteTypeCount> notes{};
    std::vector<long long> source_row_ids;

    const std::string& text_for(NoteType t) const { return notes[static_cast<std::size_t>(t)]; }
    std::string& text_for(NoteType t) { return notes[static_cast<std::size_t>(t)]; }
};

struct RejectedRecord {
    long long row_id = 0;
    std::string reason;
};

struct PivotResult {
    std::vector<VisitRecord> visits;   // sorted by (subject_id, hadm_id)
    std::vector<RejectedRecord> rejects;
};

/// Groups classified records into one VisitRecord per (subject_id, hadm_id).
/// Records lacking either id go to the rejects report. Notes with empty text
/// contribute their row_id but no column text.
PivotResult pivot_notes(const std::vector<std::pair<RawNoteRecord, NoteType>>& records);

inline constexpr const char* kColumnSeparator = "\n\n";

struct PatientTimeline {
    std::string subject_id;
    std::vector<VisitRecord> visits;  // ascending (chartdate, hadm_id); index == visit_index
};

std::vector<PatientTimeline> build_timelines(std::vector<VisitRecord> visits);

/// Keeps timelines with at least `min_visits` visits; with `require_type`
/// set, additionally demands non-empty text of that type on every visit.
std::vector<PatientTimeline> filter_cohort(const std::vector<PatientTimeline>& timelines,
                                           int min_visits,
                                           std::optional<NoteType> require_type = std::nullopt);

// ---------------------------------------------------------------------------
// Serialization: JSONL with one object per line; all 16 note keys always
// present on a visit. Rejects go to CSV (ROW_ID,REASON).
// ---------------------------------------------------------------------------

void write_visits_jsonl(std::ostream& out, const std::vector<VisitRecord>& visits);
std::vector<VisitRecord> read_visits_jsonl(std::istream& in);

void write_timelines_jsonl(std::ostream& out, const std::vector<PatientTimeline>& timelines);
std::vector<PatientTimeline> read_timelines_jsonl(std::istream& in);

void write_rejects_csv(std::ostream& out, const std::vector<RejectedRecord>& rejects);

}  // namespace dense
