#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "dense/note_types.hpp"

namespace dense {

struct SynthesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Desk-scale corpus shape. `coverage` gives, per note type, the fraction of
/// visits that contain at least one note of that type; missing types default
/// to zero. Generation is deterministic (per-patient seeds derived from
/// `seed`), so identical specs yield byte-identical corpora.
struct SyntheticCorpusSpec {
    int patient_count = 0;
    int min_visits = 1;  // inclusive
    int max_visits = 1;  // inclusive
    std::map<NoteType, double> coverage;
    std::uint64_t seed = 0;
};

/// Coverage defaults shaped like the public corpus: nursing notes and
/// radiology nearly everywhere, physician progress notes on ~8.6% of visits.
std::map<NoteType, double> default_coverage();

/// Throws SynthesisError on patient_count < 1, a visit range outside
/// [1, 100], or probabilities outside [0, 1]. Record categories and
/// descriptions are chosen so the default rule set classifies every record
/// back to its intended type; bodies carry type-appropriate section headers,
/// de-identification spans, bullets and key-value runs.
std::vector<RawNoteRecord> generate_synthetic_corpus(const SyntheticCorpusSpec& spec);

}  // namespace dense
