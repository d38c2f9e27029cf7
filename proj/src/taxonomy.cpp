#include "dense/taxonomy.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "dense/csv.hpp"
#include "dense/text_util.hpp"

namespace dense {

namespace {

constexpr std::array<std::string_view, kNoteTypeCount> kNoteTypeNames = {
    "admission_notes",    "consult_notes",       "discharge_planning",
    "discharge_summary",  "ecg_reports",         "echo_reports",
    "event_notes",        "misc_notes",          "nursing_other_notes",
    "nursing_shift_notes", "nutrition_notes",    "pharmacy_notes",
    "procedure_notes",    "progress_notes",      "radiology_reports",
    "transfer_notes",
};

}  // namespace

std::string_view note_type_name(NoteType t) {
    return kNoteTypeNames[static_cast<std::size_t>(t)];
}

std::optional<NoteType> note_type_from_name(std::string_view name) {
    for (std::size_t i = 0; i < kNoteTypeCount; ++i) {
        if (kNoteTypeNames[i] == name) return static_cast<NoteType>(i);
    }
    return std::nullopt;
}

std::string normalize_label(std::string_view raw) {
    std::string mapped;
    mapped.reserve(raw.size());
    for (unsigned char c : raw) {
        if (c < 0x80 && std::isalnum(c)) {
            mapped.push_back(static_cast<char>(std::tolower(c)));
        } else {
            mapped.push_back(' ');  // punctuation and non-ASCII become spaces
        }
    }
    return collapse_whitespace(mapped);
}

// ---------------------------------------------------------------------------
// RuleSet
// ---------------------------------------------------------------------------

RuleSet RuleSet::from_rules(std::vector<RemapRule> rules) {
    std::stable_sort(rules.begin(), rules.end(),
                     [](const RemapRule& a, const RemapRule& b) { return a.priority < b.priority; });
    RuleSet set;
    set.rules_ = std::move(rules);
    set.compiled_.reserve(set.rules_.size());
    set.norm_guards_.reserve(set.rules_.size());
    for (const auto& r : set.rules_) {
        try {
            set.compiled_.emplace_back(r.pattern, std::regex::ECMAScript | std::regex::icase);
        } catch (const std::regex_error& e) {
            throw RuleError("bad pattern '" + r.pattern + "': " + e.what());
        }
        set.norm_guards_.push_back(normalize_label(r.category_guard));
    }
    return set;
}

bool RuleSet::rule_matches(std::size_t i, const std::string& norm_category,
                           const std::string& norm_description) const {
    if (!norm_guards_[i].empty() && norm_guards_[i] != norm_category) return false;
    return std::regex_search(norm_description, compiled_[i]);
}

int RuleSet::first_match(const std::string& norm_category, const std::string& norm_description) const {
    for (std::size_t i = 0; i < rules_.size(); ++i) {
        if (rule_matches(i, norm_category, norm_description)) return static_cast<int>(i);
    }
    return -1;
}

NoteType classify_label(std::string_view category, std::string_view description,
                        const RuleSet& rules) {
    const std::string norm_cat = normalize_label(category);
    const std::string norm_desc = normalize_label(description);
    int idx = rules.first_match(norm_cat, norm_desc);
    if (idx >= 0) return rules.rules()[static_cast<std::size_t>(idx)].target;
    return NoteType::misc_notes;
}

RuleSet RuleSet::defaults() {
    using NT = NoteType;
    // Description rules come before the ".*" category fallbacks so the more
    // specific pattern always wins.
    std::vector<RemapRule> rules = {
        // Clock ranges in nursing descriptions mark shift handoffs.
        {100, R"(\b([01]?\d|2[0-3])[0-5]\d ([01]?\d|2[0-3])[0-5]\d\b)", "Nursing", NT::nursing_shift_notes},
        {101, R"(\b([01]?\d|2[0-3])[0-5]\d ([01]?\d|2[0-3])[0-5]\d\b)", "Nursing/other", NT::nursing_shift_notes},
        {102, R"(\b\d{1,2}(a|p|am|pm) (to )?\d{1,2}(a|p|am|pm)\b)", "Nursing", NT::nursing_shift_notes},
        {103, R"(\b\d{1,2}(a|p|am|pm) (to )?\d{1,2}(a|p|am|pm)\b)", "Nursing/other", NT::nursing_shift_notes},
        // Bare "Report" is meaningful only through its category.
        {110, "^report$", "Nursing/other", NT::nursing_other_notes},
        {111, "^report$", "Radiology", NT::radiology_reports},
        {112, "^report$", "ECG", NT::ecg_reports},
        {113, "^report$", "Echo", NT::echo_reports},
        {120, R"(discha{1,2}rge summ|dishcarge summ)", "", NT::discharge_summary},
        {121, R"(discha{1,2}rge plan|\bdc plan|hospice referral|dishcarge plan)", "", NT::discharge_planning},
        {130, R"(admission note|admitting note|admit note)", "", NT::admission_notes},
        {135, R"(nutrition|dietician|dietitian|diet note|diet consult)", "", NT::nutrition_notes},
        {136, R"(pharmacy|medication reconciliation|\bmed rec\b)", "", NT::pharmacy_notes},
        {140, "consult", "", NT::consult_notes},
        {150, R"(family meeting|code discussion|death note|code status|event note)", "", NT::event_notes},
        {160, R"(thoracentesis|intubation|extubation|paracentesis|bronchoscopy|lumbar puncture|central line|procedure)", "", NT::procedure_notes},
        {170, "transfer", "", NT::transfer_notes},
        {180, "echo", "", NT::echo_reports},
        {181, R"(\becg\b|\bekg\b|electrocardiogram)", "", NT::ecg_reports},
        {182, R"(x ray|xray|ct scan|\bct\b|\bmri\b|ultrasound|radiograph|chest portable|portable chest)", "", NT::radiology_reports},
        {190, R"(progres{1,2} note|\battending pn\b|^pn$|daily note|^soap\b|soap note)", "", NT::progress_notes},
        {191, R"(^(physician|physican)( note)?$)", "", NT::progress_notes},
        {200, R"(^error$|^generic note$|^note$|^blank$)", "", NT::misc_notes},
        // Category fallbacks.
        {900, ".*", "Nursing/other", NT::nursing_other_notes},
        {901, ".*", "Radiology", NT::radiology_reports},
        {902, ".*", "ECG", NT::ecg_reports},
        {903, ".*", "Echo", NT::echo_reports},
        {904, ".*", "Discharge summary", NT::discharge_summary},
        {905, ".*", "Nursing", NT::nursing_other_notes},
        {906, ".*", "Physician", NT::progress_notes},
        {907, ".*", "Nutrition", NT::nutrition_notes},
        {908, ".*", "Pharmacy", NT::pharmacy_notes},
        {909, ".*", "Consult", NT::consult_notes},
        {910, ".*", "Case Management", NT::discharge_planning},
        {911, ".*", "General", NT::misc_notes},
        {912, ".*", "Social Work", NT::misc_notes},
        {913, ".*", "Rehab Services", NT::consult_notes},
        {914, ".*", "Respiratory", NT::misc_notes},
    };
    return from_rules(std::move(rules));
}

RuleSet RuleSet::parse(std::istream& in) {
    std::vector<RemapRule> rules;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        std::vector<std::string> fields;
        std::size_t pos = 0;
        while (fields.size() < 3) {
            std::size_t tab = line.find('\t', pos);
            if (tab == std::string::npos) break;
            fields.push_back(line.substr(pos, tab - pos));
            pos = tab + 1;
        }
        fields.push_back(line.substr(pos));
        if (fields.size() != 4) {
            throw RuleError("rule file line " + std::to_string(line_no) +
                            ": expected 4 tab-separated fields");
        }
        RemapRule rule;
        try {
            rule.priority = std::stoi(fields[0]);
        } catch (const std::exception&) {
            throw RuleError("rule file line " + std::to_string(line_no) + ": bad priority '" +
                            fields[0] + "'");
        }
        rule.pattern = fields[1];
        rule.category_guard = fields[2];
        auto target = note_type_from_name(trim(fields[3]));
        if (!target) {
            throw RuleError("rule file line " + std::to_string(line_no) +
                            ": unknown target '" + fields[3] + "'");
        }
        rule.target = *target;
        rules.push_back(std::move(rule));
    }
    if (rules.empty()) throw RuleError("rule file contains no rules");
    return from_rules(std::move(rules));
}

RuleSet RuleSet::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw RuleError("cannot open rule file: " + path);
    return parse(in);
}

void RuleSet::save(std::ostream& out) const {
    out << "# priority <TAB> pattern <TAB> category-guard <TAB> target\n";
    for (const auto& r : rules_) {
        out << r.priority << '\t' << r.pattern << '\t' << r.category_guard << '\t'
            << note_type_name(r.target) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

const std::vector<std::pair<std::string, std::string>>& default_rule_fixtures() {
    static const std::vector<std::pair<std::string, std::string>> fixtures = {
        {"Nursing/other", "Report"},
        {"Radiology", "Report"},
        {"ECG", "Report"},
        {"Echo", "Report"},
        {"Radiology", "CHEST (PORTABLE AP)"},
        {"ECG", "ECG"},
        {"Echo", "Echocardiogram Report"},
        {"Physician", "Progress Note"},
        {"Physician", "Attending PN"},
        {"Physician", "Physician Resident Progress Note"},
        {"Physician", "MICU Resident Progres Note"},
        {"Physician", "Progress Note - MICU"},
        {"Physician", "Daily note"},
        {"Physician", "SOAP"},
        {"Physician", "Physican"},
        {"Physician", "Transfer Note"},
        {"Physician", "Admission Note"},
        {"Physician", "thoracentesis"},
        {"Physician", "intubation"},
        {"Physician", "Critical Care Consult"},
        {"Physician", "Code Discussion"},
        {"Case Management", "DC Plan"},
        {"Case Management", "Discharge Plan Note"},
        {"Case Management", "Hospice Referral"},
        {"Case Management", "Dischaarge Planning Update"},
        {"Consult", "Cardiology Consult"},
        {"Consult", "ID Recs"},
        {"Case Management", "Insurance Review"},
        {"General", "GI Consult"},
        {"General", "Family Meeting"},
        {"General", "Death  Note"},
        {"General", "--error--"},
        {"General", "Generic Note"},
        {"General", "Phone call to wife"},
        {"Nursing", "Nursing Progress Note 0700-1900"},
        {"Nursing/other", "Report 1900-0700"},
        {"Nursing", "7a-7p shift"},
        {"Nursing/other", "7a-7p"},
        {"Nursing", "Nursong Progress Note"},
        {"Nursing", "Flumazenil Challenge"},
        {"Nursing/other", ""},
        {"Discharge summary", "Report"},
        {"Radiology", "Abdomen supine and erect film"},
        {"ECG", "Tracing review"},
        {"Echo", "TTE study"},
        {"Physician", "Attending daily coverage"},
        {"Nutrition", ""},
        {"Nutrition", "Nutrition Assessment"},
        {"Pharmacy", "Pharmacy Note"},
        {"Pharmacy", "Sedation protocol"},
        {"Social Work", "Social Work Note"},
        {"Rehab Services", "PT Evaluation"},
        {"Respiratory", "Respiratory Care Shift Note"},
        {"Physician", "Dishcarge summary dictation"},
    };
    return fixtures;
}

RuleValidationReport validate_rules(const RuleSet& set,
                                    const std::vector<std::pair<std::string, std::string>>& fixtures) {
    RuleValidationReport report;
    const auto& rules = set.rules();

    std::map<int, std::vector<std::size_t>> by_priority;
    for (std::size_t i = 0; i < rules.size(); ++i) by_priority[rules[i].priority].push_back(i);
    for (const auto& [prio, idxs] : by_priority) {
        if (idxs.size() > 1) {
            report.warnings.push_back("duplicate priority " + std::to_string(prio) + " (" +
                                      std::to_string(idxs.size()) + " rules)");
        }
    }

    std::vector<bool> fired(rules.size(), false);
    for (const auto& [category, description] : fixtures) {
        const std::string nc = normalize_label(category);
        const std::string nd = normalize_label(description);
        int first = set.first_match(nc, nd);
        if (first >= 0) fired[static_cast<std::size_t>(first)] = true;
        // Equal-priority rules that both match the same fixture make the
        // outcome order-dependent; reject.
        for (const auto& [prio, idxs] : by_priority) {
            if (idxs.size() < 2) continue;
            std::vector<std::size_t> matching;
            for (std::size_t i : idxs) {
                if (set.rule_matches(i, nc, nd)) matching.push_back(i);
            }
            if (matching.size() > 1) {
                report.errors.push_back("priority " + std::to_string(prio) + ": " +
                                        std::to_string(matching.size()) +
                                        " rules match fixture '" + description + "'");
            }
        }
    }
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (!fired[i]) {
            report.warnings.push_back("rule priority " + std::to_string(rules[i].priority) +
                                      " pattern '" + rules[i].pattern +
                                      "' never fires on the fixture corpus");
        }
    }
    return report;
}

// ---------------------------------------------------------------------------
// Notes CSV
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kNotesHeader = {"ROW_ID",    "SUBJECT_ID", "HADM_ID",
                                               "CHARTDATE", "CHARTTIME",  "CATEGORY",
                                               "DESCRIPTION", "TEXT"};

void check_header(const std::vector<std::string>& row, std::size_t expected_cols) {
    if (row.size() < expected_cols) {
        throw CsvError("notes CSV header has " + std::to_string(row.size()) +
                       " columns, expected " + std::to_string(expected_cols));
    }
    for (std::size_t i = 0; i < kNotesHeader.size(); ++i) {
        if (row[i] != kNotesHeader[i]) {
            throw CsvError("notes CSV header column " + std::to_string(i) + " is '" + row[i] +
                           "', expected '" + kNotesHeader[i] + "'");
        }
    }
}

RawNoteRecord record_from_row(const std::vector<std::string>& row, std::size_t line_no) {
    if (row.size() < 8) {
        throw CsvError("notes CSV record " + std::to_string(line_no) + " has " +
                       std::to_string(row.size()) + " fields, expected 8");
    }
    RawNoteRecord r;
    try {
        r.row_id = std::stoll(row[0]);
    } catch (const std::exception&) {
        throw CsvError("notes CSV record " + std::to_string(line_no) + ": bad ROW_ID '" + row[0] + "'");
    }
    r.subject_id = row[1];
    r.hadm_id = row[2];
    r.chartdate = row[3];
    r.charttime = row[4];
    r.category = row[5];
    r.description = row[6];
    r.text = row[7];
    return r;
}

}  // namespace

std::vector<RawNoteRecord> read_notes_csv(std::istream& in) {
    CsvReader reader(in);
    auto header = reader.next_row();
    if (!header) throw CsvError("notes CSV is empty");
    check_header(*header, 8);
    std::vector<RawNoteRecord> records;
    std::size_t line_no = 1;
    while (auto row = reader.next_row()) {
        ++line_no;
        records.push_back(record_from_row(*row, line_no));
    }
    return records;
}

void write_notes_csv(std::ostream& out, const std::vector<RawNoteRecord>& records) {
    write_csv_row(out, kNotesHeader);
    for (const auto& r : records) {
        write_csv_row(out, {std::to_string(r.row_id), r.subject_id, r.hadm_id, r.chartdate,
                            r.charttime, r.category, r.description, r.text});
    }
}

void write_classified_csv(std::ostream& out, const std::vector<RawNoteRecord>& records,
                          const std::vector<NoteType>& types) {
    auto header = kNotesHeader;
    header.push_back("NOTE_TYPE");
    write_csv_row(out, header);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        write_csv_row(out, {std::to_string(r.row_id), r.subject_id, r.hadm_id, r.chartdate,
                            r.charttime, r.category, r.description, r.text,
                            std::string(note_type_name(types[i]))});
    }
}

std::vector<std::pair<RawNoteRecord, NoteType>> read_classified_csv(std::istream& in) {
    CsvReader reader(in);
    auto header = reader.next_row();
    if (!header) throw CsvError("classified CSV is empty");
    check_header(*header, 9);
    if ((*header)[8] != "NOTE_TYPE") throw CsvError("classified CSV missing NOTE_TYPE column");
    std::vector<std::pair<RawNoteRecord, NoteType>> out;
    std::size_t line_no = 1;
    while (auto row = reader.next_row()) {
        ++line_no;
        if (row->size() < 9) {
            throw CsvError("classified CSV record " + std::to_string(line_no) + " has " +
                           std::to_string(row->size()) + " fields, expected 9");
        }
        RawNoteRecord r = record_from_row(*row, line_no);
        auto type = note_type_from_name((*row)[8]);
        if (!type) {
            throw CsvError("classified CSV record " + std::to_string(line_no) +
                           ": unknown NOTE_TYPE '" + (*row)[8] + "'");
        }
        out.emplace_back(std::move(r), *type);
    }
    return out;
}

}  // namespace dense
