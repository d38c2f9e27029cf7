#include "dense/preprocess.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "dense/text_util.hpp"

namespace dense {

// ---------------------------------------------------------------------------
// HeaderCatalog
// ---------------------------------------------------------------------------

void HeaderCatalog::add(NoteType t, HeaderEntry entry) {
    auto& list = entries_[static_cast<std::size_t>(t)];
    for (const auto& existing : list) {
        if (existing.canonical == entry.canonical) {
            throw CatalogError("duplicate canonical header '" + entry.canonical + "' for " +
                               std::string(note_type_name(t)));
        }
    }
    list.push_back(std::move(entry));
}

void HeaderCatalog::finalize() {
    for (NoteType t : all_note_types()) {
        if (entries_[static_cast<std::size_t>(t)].empty()) {
            throw CatalogError("catalog has no entry for " + std::string(note_type_name(t)));
        }
    }
    protected_keys_.clear();
    for (const auto& list : entries_) {
        for (const auto& e : list) {
            protected_keys_.insert(to_lower(e.canonical));
            for (const auto& a : e.aliases) protected_keys_.insert(to_lower(a));
        }
    }
}

const HeaderCatalog& HeaderCatalog::defaults() {
    static const HeaderCatalog catalog = [] {
        HeaderCatalog c;
        using NT = NoteType;
        c.add(NT::admission_notes, {"Chief Complaint", {"cc"}});
        c.add(NT::admission_notes, {"History of Present Illness", {"hpi", "history of previous illness"}});
        c.add(NT::admission_notes, {"Physical Exam", {"pe", "physical examination"}});
        c.add(NT::consult_notes, {"Reason for Consultation", {"reason for consult"}});
        c.add(NT::consult_notes, {"Assessment", {}});
        c.add(NT::consult_notes, {"Plan", {}});
        c.add(NT::discharge_planning, {"Education", {}});
        c.add(NT::discharge_planning, {"Home Needs", {"home needs assessment"}});
        c.add(NT::discharge_planning, {"Follow-up", {"follow up", "f/u"}});
        c.add(NT::discharge_summary, {"Hospital Course", {"brief hospital course"}});
        c.add(NT::discharge_summary, {"Discharge Medications", {"discharge meds"}});
        c.add(NT::ecg_reports, {"Findings", {}});
        c.add(NT::ecg_reports, {"Rhythm Analysis", {"rhythm"}});
        c.add(NT::echo_reports, {"Ejection Fraction", {"ef"}});
        c.add(NT::echo_reports, {"Valve Assessment", {"valves"}});
        c.add(NT::event_notes, {"Event Description", {"event"}});
        c.add(NT::event_notes, {"Clinical Response", {"response"}});
        c.add(NT::misc_notes, {"Free-text", {}});
        c.add(NT::nursing_other_notes, {"Fluid Balance", {"i/o", "intake and output"}});
        c.add(NT::nursing_other_notes, {"Pain Assessment", {"pain"}});
        c.add(NT::nursing_shift_notes, {"Physical Assessment", {}});
        c.add(NT::nursing_shift_notes, {"Interventions", {}});
        c.add(NT::nutrition_notes, {"Diet", {}});
        c.add(NT::nutrition_notes, {"Weight", {"wt"}});
        c.add(NT::nutrition_notes, {"Recommendations", {"recs"}});
        c.add(NT::pharmacy_notes, {"Medication List", {"medications", "meds"}});
        c.add(NT::pharmacy_notes, {"Dose", {}});
        c.add(NT::pharmacy_notes, {"Route", {}});
        c.add(NT::procedure_notes, {"Technique", {}});
        c.add(NT::procedure_notes, {"Complications", {}});
        c.add(NT::progress_notes, {"Subjective", {"s", "subj"}});
        c.add(NT::progress_notes, {"Objective", {"o", "obj"}});
        c.add(NT::progress_notes, {"Assessment", {"a"}});
        c.add(NT::progress_notes, {"Plan", {"p"}});
        c.add(NT::radiology_reports, {"Impression", {}});
        c.add(NT::radiology_reports, {"Findings", {"finding"}});
        c.add(NT::transfer_notes, {"Status", {}});
        c.add(NT::transfer_notes, {"Destination Unit", {"destination"}});
        c.finalize();
        return c;
    }();
    return catalog;
}

HeaderCatalog HeaderCatalog::parse(std::istream& in) {
    HeaderCatalog c;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string trimmed = trim(line);
        if (trimmed.empty() || trimmed[0] == '#') continue;
        std::size_t t1 = line.find('\t');
        if (t1 == std::string::npos) {
            throw CatalogError("catalog line " + std::to_string(line_no) + ": expected tabs");
        }
        std::size_t t2 = line.find('\t', t1 + 1);
        std::string type_name = line.substr(0, t1);
        std::string canonical = t2 == std::string::npos ? line.substr(t1 + 1)
                                                        : line.substr(t1 + 1, t2 - t1 - 1);
        std::string alias_field = t2 == std::string::npos ? "" : line.substr(t2 + 1);
        auto type = note_type_from_name(trim(type_name));
        if (!type) {
            throw CatalogError("catalog line " + std::to_string(line_no) + ": unknown note type '" +
                               type_name + "'");
        }
        HeaderEntry entry;
        entry.canonical = trim(canonical);
        if (entry.canonical.empty()) {
            throw CatalogError("catalog line " + std::to_string(line_no) + ": empty canonical header");
        }
        std::stringstream aliases(alias_field);
        std::string alias;
        while (std::getline(aliases, alias, '|')) {
            alias = trim(alias);
            if (!alias.empty()) entry.aliases.push_back(alias);
        }
        c.add(*type, std::move(entry));
    }
    c.finalize();
    return c;
}

HeaderCatalog HeaderCatalog::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CatalogError("cannot open header catalog: " + path);
    return parse(in);
}

void HeaderCatalog::save(std::ostream& out) const {
    out << "# note_type <TAB> canonical_header <TAB> alias1|alias2|...\n";
    for (NoteType t : all_note_types()) {
        for (const auto& e : entries_for(t)) {
            out << note_type_name(t) << '\t' << e.canonical << '\t';
            for (std::size_t i = 0; i < e.aliases.size(); ++i) {
                if (i) out << '|';
                out << e.aliases[i];
            }
            out << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// clean_generic
// ---------------------------------------------------------------------------

namespace {

bool deid_looks_like_date(const std::string& content) {
    bool has_digit = false;
    for (unsigned char c : content) {
        if (std::isdigit(c)) has_digit = true;
        else if (c != '-' && c != '/' && c != ':' && c != ' ' && c != '.') return false;
    }
    return has_digit;
}

bool deid_looks_like_name(const std::string& content) {
    for (const auto& tok : word_tokens(content)) {
        for (const char* cue : {"dr", "mr", "mrs", "ms", "md", "name", "doctor", "attending"}) {
            if (tok == cue) return true;
        }
    }
    return false;
}

bool deid_looks_like_location(const std::string& content) {
    for (const auto& tok : word_tokens(content)) {
        for (const char* cue : {"hospital", "location", "address", "city", "state", "country",
                                "clinic", "university", "ward", "unit"}) {
            if (tok == cue) return true;
        }
    }
    return false;
}

std::string deid_token(const std::string& content) {
    std::string inner = trim(content);
    if (deid_looks_like_date(inner) && !inner.empty()) return "<DATE>";
    if (deid_looks_like_name(inner)) return "<NAME>";
    if (deid_looks_like_location(inner)) return "<LOC>";
    return "<PHI>";
}

std::string replace_deid_spans(const std::string& text, CleanStats* stats) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text.compare(i, 3, "[**") == 0) {
            std::size_t end = text.find("**]", i + 3);
            if (end == std::string::npos) {
                if (stats) ++stats->unterminated_deid;
                out += deid_token(text.substr(i + 3));
                break;
            }
            out += deid_token(text.substr(i + 3, end - (i + 3)));
            i = end + 3;
        } else {
            out.push_back(text[i]);
            ++i;
        }
    }
    return out;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            lines.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (i) out.push_back('\n');
        out += lines[i];
    }
    return out;
}

// bullet marker: -, *, UTF-8 bullet, or 1-2 digits followed by '.' or ')'
bool bullet_content(const std::string& line, std::string& content) {
    std::size_t i = 0;
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t mark_end = 0;
    if (i < line.size() && (line[i] == '-' || line[i] == '*')) {
        mark_end = i + 1;
    } else if (line.compare(i, 3, "\xe2\x80\xa2") == 0) {
        mark_end = i + 3;
    } else if (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i]))) {
        std::size_t j = i + 1;
        if (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
        if (j < line.size() && (line[j] == '.' || line[j] == ')')) mark_end = j + 1;
    }
    if (mark_end == 0) return false;
    if (mark_end >= line.size() || (line[mark_end] != ' ' && line[mark_end] != '\t')) return false;
    content = trim(line.substr(mark_end));
    return !content.empty();
}

std::string ensure_sentence(std::string s) {
    if (s.empty()) return s;
    char last = s.back();
    if (last != '.' && last != '!' && last != '?' && last != ':' && last != ';') s.push_back('.');
    return s;
}

std::vector<std::string> bullet_pass(const std::vector<std::string>& lines) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < lines.size()) {
        std::string content;
        if (!bullet_content(lines[i], content)) {
            out.push_back(lines[i]);
            ++i;
            continue;
        }
        std::string para = ensure_sentence(content);
        ++i;
        while (i < lines.size() && bullet_content(lines[i], content)) {
            para += " " + ensure_sentence(content);
            ++i;
        }
        out.push_back(std::move(para));
    }
    return out;
}

// key: short word run, value non-empty, line not ending in ':'
bool kv_parts(const std::string& line, const std::set<std::string>& protected_keys,
              std::string& key, std::string& value) {
    std::size_t colon = line.find(':');
    if (colon == std::string::npos || colon == 0) return false;
    key = trim(line.substr(0, colon));
    value = trim(line.substr(colon + 1));
    if (key.empty() || value.empty()) return false;
    if (key.size() > 32) return false;
    int words = 1;
    for (unsigned char c : key) {
        if (c == ' ') ++words;
        else if (!(std::isalnum(c) || c == '_' || c == '/' || c == '%' || c == '(' || c == ')' ||
                   c == '.' || c == '-')) {
            return false;
        }
    }
    if (words > 4) return false;
    if (protected_keys.count(to_lower(key))) return false;
    return true;
}

std::vector<std::string> kv_pass(const std::vector<std::string>& lines,
                                 const std::set<std::string>& protected_keys) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < lines.size()) {
        std::string key, value;
        if (!kv_parts(lines[i], protected_keys, key, value)) {
            out.push_back(lines[i]);
            ++i;
            continue;
        }
        // only runs of two or more consolidate
        std::size_t j = i + 1;
        std::string k2, v2;
        while (j < lines.size() && kv_parts(lines[j], protected_keys, k2, v2)) ++j;
        if (j - i < 2) {
            out.push_back(lines[i]);
            ++i;
            continue;
        }
        std::string para;
        for (std::size_t k = i; k < j; ++k) {
            kv_parts(lines[k], protected_keys, key, value);
            if (!para.empty()) para += " ";
            para += ensure_sentence(key + ": " + value);
        }
        out.push_back(std::move(para));
        i = j;
    }
    return out;
}

std::string normalize_whitespace_lines(const std::string& text) {
    std::vector<std::string> lines = split_lines(text);
    for (auto& line : lines) {
        // collapse internal space runs, strip ends
        std::string collapsed;
        bool in_ws = false;
        for (unsigned char c : line) {
            if (c == ' ' || c == '\t') {
                in_ws = true;
                continue;
            }
            if (in_ws && !collapsed.empty()) collapsed.push_back(' ');
            in_ws = false;
            collapsed.push_back(static_cast<char>(c));
        }
        line = std::move(collapsed);
    }
    // drop leading/trailing blank lines, collapse runs of blanks to one
    std::vector<std::string> cleaned;
    for (const auto& line : lines) {
        if (line.empty() && (cleaned.empty() || cleaned.back().empty())) continue;
        cleaned.push_back(line);
    }
    while (!cleaned.empty() && cleaned.back().empty()) cleaned.pop_back();
    return join_lines(cleaned);
}

}  // namespace

std::string clean_generic(std::string_view text, CleanStats* stats) {
    std::string x = normalize_unicode(text);
    x = replace_deid_spans(x, stats);
    const auto& protected_keys = HeaderCatalog::defaults().protected_keys();
    for (int iter = 0; iter < 8; ++iter) {
        std::string prev = x;
        x = normalize_whitespace_lines(x);
        std::vector<std::string> lines = split_lines(x);
        lines = bullet_pass(lines);
        lines = kv_pass(lines, protected_keys);
        x = join_lines(lines);
        if (x == prev) break;
    }
    return x;
}

// ---------------------------------------------------------------------------
// standardize_headers
// ---------------------------------------------------------------------------

namespace {

// Matches `alias`, `alias:` or `alias: remainder` at line start,
// case-insensitive. Returns true and the remainder on a match.
bool match_alias(const std::string& line, const std::string& alias, std::string& remainder) {
    if (line.size() < alias.size()) return false;
    for (std::size_t i = 0; i < alias.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(line[i])) !=
            std::tolower(static_cast<unsigned char>(alias[i]))) {
            return false;
        }
    }
    std::size_t i = alias.size();
    while (i < line.size() && line[i] == ' ') ++i;
    if (i == line.size()) {
        remainder.clear();
        return true;  // full-line match
    }
    if (line[i] != ':') return false;
    remainder = trim(line.substr(i + 1));
    return true;
}

struct AliasRef {
    const std::string* canonical;
    const std::string* surface;
};

}  // namespace

CleanNote standardize_headers(std::string_view cleaned_text, NoteType type,
                              const HeaderCatalog& catalog, std::string subject_id,
                              std::string hadm_id) {
    CleanNote note;
    note.note_type = type;
    note.subject_id = std::move(subject_id);
    note.hadm_id = std::move(hadm_id);

    // longest surface form first so e.g. "physical examination" beats "pe"
    std::vector<AliasRef> aliases;
    for (const auto& entry : catalog.entries_for(type)) {
        aliases.push_back({&entry.canonical, &entry.canonical});
        for (const auto& a : entry.aliases) aliases.push_back({&entry.canonical, &a});
    }
    std::sort(aliases.begin(), aliases.end(), [](const AliasRef& a, const AliasRef& b) {
        return a.surface->size() > b.surface->size();
    });

    std::vector<std::string> lines = split_lines(std::string(cleaned_text));
    CleanSection current{"Preamble", "", ""};
    std::vector<std::string> body_lines;

    auto flush = [&](bool force) {
        std::string body = join_lines(body_lines);
        // trim blank edges of the body, keep interior blank lines
        std::size_t b = 0, e = body.size();
        while (b < e && (body[b] == '\n' || body[b] == ' ')) ++b;
        while (e > b && (body[e - 1] == '\n' || body[e - 1] == ' ')) --e;
        current.body = body.substr(b, e - b);
        if (force || current.header != "Preamble" || !current.body.empty()) {
            note.sections.push_back(current);
        }
        body_lines.clear();
    };

    for (const auto& line : lines) {
        std::string trimmed = trim(line);
        bool matched = false;
        for (const auto& ref : aliases) {
            std::string remainder;
            if (match_alias(trimmed, *ref.surface, remainder)) {
                flush(false);
                current = CleanSection{*ref.canonical, "", trimmed};
                if (!remainder.empty()) body_lines.push_back(remainder);
                matched = true;
                break;
            }
        }
        if (!matched) body_lines.push_back(line);
    }
    flush(note.sections.empty());
    return note;
}

std::string render_clean_note(const CleanNote& note) {
    std::string out;
    for (std::size_t i = 0; i < note.sections.size(); ++i) {
        if (i) out += "\n\n";
        const auto& s = note.sections[i];
        if (s.header != "Preamble") {
            out += s.header + ":";
            if (!s.body.empty()) out += "\n";
        }
        out += s.body;
    }
    return out;
}

}  // namespace dense
