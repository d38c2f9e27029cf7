#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace dense {

/// The closed set of 16 canonical note types. Every classified note maps to
/// exactly one value; misc_notes is the unique fallback.
enum class NoteType {
    admission_notes,
    consult_notes,
    discharge_planning,
    discharge_summary,
    ecg_reports,
    echo_reports,
    event_notes,
    misc_notes,
    nursing_other_notes,
    nursing_shift_notes,
    nutrition_notes,
    pharmacy_notes,
    procedure_notes,
    progress_notes,
    radiology_reports,
    transfer_notes,
};

inline constexpr std::size_t kNoteTypeCount = 16;

constexpr std::array<NoteType, kNoteTypeCount> all_note_types() {
    return {
        NoteType::admission_notes,   NoteType::consult_notes,
        NoteType::discharge_planning, NoteType::discharge_summary,
        NoteType::ecg_reports,       NoteType::echo_reports,
        NoteType::event_notes,       NoteType::misc_notes,
        NoteType::nursing_other_notes, NoteType::nursing_shift_notes,
        NoteType::nutrition_notes,   NoteType::pharmacy_notes,
        NoteType::procedure_notes,   NoteType::progress_notes,
        NoteType::radiology_reports, NoteType::transfer_notes,
    };
}

std::string_view note_type_name(NoteType t);
std::optional<NoteType> note_type_from_name(std::string_view name);

/// One row of the source note table.
struct RawNoteRecord {
    long long row_id = 0;
    std::string subject_id;
    std::string hadm_id;
    std::string chartdate;  // ISO YYYY-MM-DD
    std::string charttime;  // ISO "YYYY-MM-DD HH:MM:SS", may be empty
    std::string category;
    std::string description;
    std::string text;
};

}  // namespace dense
