#include "dense/synthetic.hpp"

#include <array>
#include <random>
#include <string>

#include "dense/text_util.hpp"

namespace dense {

namespace {

// mt19937_64 drawn through fixed arithmetic (no std distributions, whose
// output is implementation-defined).
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }
    int below(int n) { return n <= 1 ? 0 : static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
    int range(int lo, int hi) { return lo + below(hi - lo + 1); }
    double prob() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    bool chance(double p) { return prob() < p; }

    template <std::size_t N>
    const char* pick(const std::array<const char*, N>& bank) {
        return bank[static_cast<std::size_t>(below(static_cast<int>(N)))];
    }

private:
    std::mt19937_64 gen_;
};

// --- civil date arithmetic (days since 1970-01-01) --------------------------

long long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

void civil_from_days(long long z, int& y, int& m, int& d) {
    z += 719468;
    const long long era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long long yr = static_cast<long long>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yr + (m <= 2));
}

std::string pad2(int v) {
    std::string s = std::to_string(v);
    return s.size() < 2 ? "0" + s : s;
}

std::string format_date(long long days) {
    int y, m, d;
    civil_from_days(days, y, m, d);
    return std::to_string(y) + "-" + pad2(m) + "-" + pad2(d);
}

// --- phrase banks ------------------------------------------------------------

constexpr std::array<const char*, 8> kProblems = {
    "congestive heart failure", "type 2 diabetes", "chronic kidney disease",
    "atrial fibrillation",      "COPD",            "hypertension",
    "community acquired pneumonia", "cirrhosis",
};

constexpr std::array<const char*, 8> kMeds = {
    "lisinopril", "metoprolol", "furosemide", "insulin glargine",
    "warfarin",   "albuterol",  "ceftriaxone", "pantoprazole",
};

constexpr std::array<const char*, 6> kSubjective = {
    "Patient reports feeling somewhat improved since yesterday.",
    "Patient complains of mild shortness of breath on exertion.",
    "Patient denies chest pain, fevers, or chills overnight.",
    "Patient notes decreased appetite but adequate oral intake.",
    "Patient describes intermittent dizziness when standing.",
    "Family at bedside, no new complaints voiced.",
};

constexpr std::array<const char*, 6> kObjectiveExtra = {
    "Lungs with scattered crackles at the bases bilaterally.",
    "Abdomen soft, nontender, normoactive bowel sounds.",
    "Extremities warm with trace pitting edema.",
    "Alert and oriented, no focal neurologic deficits.",
    "Heart regular rate and rhythm without murmur.",
    "Incision clean, dry, and intact without erythema.",
};

constexpr std::array<const char*, 5> kAssessmentLead = {
    "Clinical status is stable overall.",
    "Gradual improvement on current regimen.",
    "Slow progress with persistent volume overload.",
    "Improving respiratory status on supplemental oxygen.",
    "No acute events in the past day.",
};

constexpr std::array<const char*, 5> kPlanExtra = {
    "Advance diet as tolerated.",
    "Physical therapy to evaluate mobility.",
    "Repeat basic metabolic panel in the morning.",
    "Wean supplemental oxygen as tolerated.",
    "Anticipate discharge planning discussion with family.",
};

constexpr std::array<const char*, 5> kSurnames = {
    "Alvarez", "Chen", "Okafor", "Hansen", "Rossi",
};

constexpr std::array<const char*, 5> kRadFindings = {
    "Lung volumes are low with bibasilar atelectasis.",
    "No focal consolidation, effusion, or pneumothorax identified.",
    "Mild pulmonary vascular congestion without overt edema.",
    "Small left pleural effusion, stable from prior exam.",
    "Endotracheal tube terminates 4 cm above the carina.",
};

constexpr std::array<const char*, 4> kRadImpression = {
    "No acute cardiopulmonary process.",
    "Findings consistent with mild fluid overload.",
    "Stable chest radiograph compared with prior study.",
    "Improving aeration at the lung bases.",
};

struct PatientProfile {
    std::vector<const char*> problems;
    std::vector<const char*> meds;
};

std::string deid_date(DetRng& rng, long long day) {
    int y, m, d;
    civil_from_days(day - rng.below(30), y, m, d);
    return "[**" + std::to_string(y) + "-" + std::to_string(m) + "-" + std::to_string(d) + "**]";
}

std::string deid_doctor(DetRng& rng) {
    return std::string("[**Dr. ") + rng.pick(kSurnames) + "**]";
}

std::string vitals_block(DetRng& rng) {
    return "HR: " + std::to_string(60 + rng.below(50)) + "\nBP: " + std::to_string(95 + rng.below(50)) +
           "/" + std::to_string(55 + rng.below(35)) + "\nRR: " + std::to_string(12 + rng.below(14)) +
           "\nSpO2: " + std::to_string(90 + rng.below(10)) + "%";
}

std::string problem_sentences(DetRng& rng, const PatientProfile& profile) {
    std::string out;
    for (const char* p : profile.problems) {
        out += std::string(p) + (rng.chance(0.5) ? " remains the active issue." : " is being managed medically.");
        out += " ";
    }
    return out;
}

std::string plan_bullets(DetRng& rng, const PatientProfile& profile) {
    std::string out;
    for (const char* m : profile.meds) {
        out += std::string("- continue ") + m + "\n";
    }
    out += "- monitor fluid balance\n- follow up pending cultures";
    if (rng.chance(0.4)) out += "\n- " + std::string(rng.pick(kPlanExtra));
    return out;
}

// Builds one note body for the type. Bodies intentionally mix alias-style
// headers, bullets, key-value runs and de-identification spans so the
// preprocessing path sees realistic input.
std::string note_body(NoteType type, DetRng& rng, const PatientProfile& profile, long long day) {
    std::string s;
    switch (type) {
        case NoteType::admission_notes:
            s = "Chief Complaint:\n" + std::string(rng.pick(kSubjective)) + "\n\n";
            s += "History of Present Illness:\nSeen previously on " + deid_date(rng, day) + " by " +
                 deid_doctor(rng) + ". " + problem_sentences(rng, profile) + "\n\n";
            s += "Physical Exam:\n" + vitals_block(rng) + "\n" + rng.pick(kObjectiveExtra);
            break;
        case NoteType::consult_notes:
            s = "Reason for Consultation:\nEvaluation of " + std::string(profile.problems[0]) + ".\n\n";
            s += "Assessment:\n" + std::string(rng.pick(kAssessmentLead)) + " " + problem_sentences(rng, profile) + "\n\n";
            s += "Plan:\n" + plan_bullets(rng, profile);
            break;
        case NoteType::discharge_planning:
            s = "Education:\nMedication teaching provided to patient and family.\n\n";
            s += "Home Needs:\n- home oxygen assessment\n- visiting nurse referral\n\n";
            s += "Follow-up:\nClinic visit with " + deid_doctor(rng) + " within two weeks.";
            break;
        case NoteType::discharge_summary:
            s = "Hospital Course:\nAdmitted on " + deid_date(rng, day) + " for " +
                std::string(profile.problems[0]) + ". " + std::string(rng.pick(kAssessmentLead)) + " " +
                problem_sentences(rng, profile) + "\n\n";
            s += "Discharge Medications:\n" + plan_bullets(rng, profile);
            break;
        case NoteType::ecg_reports:
            s = "Findings:\nSinus rhythm at " + std::to_string(58 + rng.below(50)) +
                " bpm. Normal axis and intervals.\n\n";
            s += "Rhythm Analysis:\n";
            s += rng.chance(0.5) ? "No ectopy observed during the recording."
                                 : "Occasional premature atrial complexes noted.";
            break;
        case NoteType::echo_reports:
            s = "Ejection Fraction:\nEstimated at " + std::to_string(30 + 5 * rng.below(7)) + "%.\n\n";
            s += "Valve Assessment:\nMild mitral regurgitation. No significant aortic stenosis.";
            break;
        case NoteType::event_notes:
            s = "Event Description:\nBrief episode of hypotension responding to fluids, discussed with " +
                deid_doctor(rng) + ".\n\n";
            s += "Clinical Response:\n" + std::string(rng.pick(kObjectiveExtra));
            break;
        case NoteType::misc_notes:
            s = std::string(rng.pick(kSubjective)) + " Documented for the record.";
            break;
        case NoteType::nursing_other_notes: {
            s = "Fluid Balance:\nIntake " + std::to_string(800 + 10 * rng.below(120)) + " ml, output " +
                std::to_string(600 + 10 * rng.below(120)) + " ml over the shift.\n";
            if (rng.chance(0.25)) {
                // a long narrative section, enough to need windowing downstream
                int target = 3500 + rng.below(3500);
                while (static_cast<int>(s.size()) < target) {
                    s += std::string(rng.pick(kObjectiveExtra)) + " " +
                         std::string(rng.pick(kSubjective)) + " ";
                }
                s += "\n";
            }
            s += "\nPain Assessment:\nPain " + std::to_string(rng.below(7)) +
                 "/10, managed with current regimen.";
            break;
        }
        case NoteType::nursing_shift_notes:
            s = "Physical Assessment:\n" + vitals_block(rng) + "\n" + rng.pick(kObjectiveExtra) + "\n\n";
            s += "Interventions:\n- turned and repositioned\n- oral care provided\n- telemetry continued";
            break;
        case NoteType::nutrition_notes:
            s = "Diet:\nCardiac diet, " + std::string(rng.chance(0.5) ? "good" : "fair") + " oral intake.\n\n";
            s += "Weight:\n" + std::to_string(55 + rng.below(60)) + " kg.\n\n";
            s += "Recommendations:\nContinue current diet with protein supplementation.";
            break;
        case NoteType::pharmacy_notes:
            s = "Medication List:\n" + plan_bullets(rng, profile) + "\n\n";
            s += "Dose:\nRenally adjusted where indicated.\n\nRoute:\nOral unless specified.";
            break;
        case NoteType::procedure_notes:
            s = "Technique:\nPerformed at the bedside under sterile conditions by " + deid_doctor(rng) +
                " on " + deid_date(rng, day) + ".\n\n";
            s += "Complications:\nNone immediate.";
            break;
        case NoteType::progress_notes: {
            bool alias = rng.chance(0.5);
            s = std::string(alias ? "S:" : "Subjective:") + "\n" + rng.pick(kSubjective) + "\n\n";
            s += std::string(alias ? "O:" : "Objective:") + "\n" + vitals_block(rng) + "\n" +
                 rng.pick(kObjectiveExtra) + "\n\n";
            s += std::string(alias ? "A:" : "Assessment:") + "\n" + rng.pick(kAssessmentLead) + " " +
                 problem_sentences(rng, profile) + "\n\n";
            s += std::string(alias ? "P:" : "Plan:") + "\n" + plan_bullets(rng, profile);
            break;
        }
        case NoteType::radiology_reports:
            s = "FINDINGS:\n" + std::string(rng.pick(kRadFindings)) + " " + rng.pick(kRadFindings) + "\n\n";
            s += "IMPRESSION:\n" + std::string(rng.pick(kRadImpression));
            break;
        case NoteType::transfer_notes:
            s = "Status:\n" + std::string(rng.pick(kAssessmentLead)) + "\n\n";
            s += "Destination Unit:\n" + std::string(rng.chance(0.5) ? "Medical floor." : "Step-down unit.");
            break;
    }
    return s;
}

struct TypeLabel {
    const char* category;
    std::array<const char*, 2> descriptions;
};

// Labels are picked so the default rule set maps each record back to the
// intended type.
const TypeLabel& label_for(NoteType t) {
    static const std::array<TypeLabel, kNoteTypeCount> labels = {{
        {"Physician", {{"Admission Note", "Admission Note"}}},
        {"Consult", {{"Cardiology Consult", "GI Consult"}}},
        {"Case Management", {{"DC Plan", "Discharge Planning Update"}}},
        {"Discharge summary", {{"Report", "Report"}}},
        {"ECG", {{"Report", "ECG"}}},
        {"Echo", {{"Report", "Echocardiogram Report"}}},
        {"General", {{"Family Meeting", "Code Discussion"}}},
        {"General", {{"Generic Note", "--error--"}}},
        {"Nursing/other", {{"Report", "Report"}}},
        {"Nursing", {{"Nursing Note 0700-1900", "Nursing Note 7a-7p"}}},
        {"Nutrition", {{"Nutrition Assessment", "Clinical Nutrition Note"}}},
        {"Pharmacy", {{"Pharmacy Note", "Medication Reconciliation"}}},
        {"Physician", {{"thoracentesis", "intubation"}}},
        {"Physician", {{"Progress Note", "Physician Resident Progress Note"}}},
        {"Radiology", {{"CHEST (PORTABLE AP)", "Report"}}},
        {"Physician", {{"Transfer Note", "Transfer Note"}}},
    }};
    return labels[static_cast<std::size_t>(t)];
}

}  // namespace

std::map<NoteType, double> default_coverage() {
    return {
        {NoteType::nursing_other_notes, 0.98}, {NoteType::radiology_reports, 0.92},
        {NoteType::ecg_reports, 0.80},         {NoteType::misc_notes, 0.65},
        {NoteType::discharge_summary, 0.60},   {NoteType::transfer_notes, 0.35},
        {NoteType::echo_reports, 0.20},        {NoteType::admission_notes, 0.12},
        {NoteType::procedure_notes, 0.10},     {NoteType::progress_notes, 0.0856},
        {NoteType::consult_notes, 0.05},       {NoteType::nutrition_notes, 0.05},
        {NoteType::event_notes, 0.02},         {NoteType::discharge_planning, 0.01},
        {NoteType::pharmacy_notes, 0.005},     {NoteType::nursing_shift_notes, 0.003},
    };
}

std::vector<RawNoteRecord> generate_synthetic_corpus(const SyntheticCorpusSpec& spec) {
    if (spec.patient_count < 1) {
        throw SynthesisError("patient_count must be >= 1");
    }
    if (spec.min_visits < 1 || spec.max_visits > 100 || spec.min_visits > spec.max_visits) {
        throw SynthesisError("visits_per_patient range must lie within [1, 100]");
    }
    for (const auto& [type, p] : spec.coverage) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw SynthesisError("coverage probability for " + std::string(note_type_name(type)) +
                                 " outside [0, 1]");
        }
    }

    auto coverage_of = [&spec](NoteType t) {
        auto it = spec.coverage.find(t);
        return it == spec.coverage.end() ? 0.0 : it->second;
    };

    std::vector<RawNoteRecord> records;
    for (int p = 0; p < spec.patient_count; ++p) {
        DetRng rng(fnv1a64("patient:" + std::to_string(p), spec.seed));
        const std::string subject = std::to_string(10000 + p);
        long long row_id = static_cast<long long>(p) * 10000 + 1;

        PatientProfile profile;
        int n_problems = rng.range(2, 4);
        for (int i = 0; i < n_problems; ++i) profile.problems.push_back(rng.pick(kProblems));
        int n_meds = rng.range(2, 3);
        for (int i = 0; i < n_meds; ++i) profile.meds.push_back(rng.pick(kMeds));

        int visit_count = rng.range(spec.min_visits, spec.max_visits);
        long long day = days_from_civil(2100 + rng.below(60), 1 + rng.below(12), 1 + rng.below(28));

        for (int v = 0; v < visit_count; ++v) {
            const std::string hadm = std::to_string(100000 + p * 1000 + v);
            const std::string date = format_date(day);
            for (NoteType type : all_note_types()) {
                if (!rng.chance(coverage_of(type))) continue;
                int copies = rng.chance(0.15) ? 2 : 1;
                for (int c = 0; c < copies; ++c) {
                    RawNoteRecord r;
                    r.row_id = row_id++;
                    r.subject_id = subject;
                    r.hadm_id = hadm;
                    r.chartdate = date;
                    if (rng.chance(0.8)) {
                        r.charttime = date + " " + pad2(6 + rng.below(15)) + ":" + pad2(rng.below(60)) + ":00";
                    }
                    const TypeLabel& label = label_for(type);
                    r.category = label.category;
                    r.description = label.descriptions[static_cast<std::size_t>(rng.below(2))];
                    // an occasional empty-text misc record exercises the
                    // classified-then-dropped path
                    if (type == NoteType::misc_notes && rng.chance(0.15)) {
                        r.text = "";
                    } else {
                        r.text = note_body(type, rng, profile, day);
                    }
                    records.push_back(std::move(r));
                }
            }
            day += 5 + rng.below(116);
        }
    }
    return records;
}

}  // namespace dense
