#include "dense/corpus.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include <json.hpp>

#include "dense/csv.hpp"

namespace dense {

using nlohmann::json;

PivotResult pivot_notes(const std::vector<std::pair<RawNoteRecord, NoteType>>& records) {
    PivotResult result;

    struct Member {
        std::string sort_key;  // charttime when present, else chartdate
        long long row_id;
        NoteType type;
        const RawNoteRecord* record;
    };
    std::map<std::pair<std::string, std::string>, std::vector<Member>> groups;

    for (const auto& [record, type] : records) {
        if (record.subject_id.empty()) {
            result.rejects.push_back({record.row_id, "missing SUBJECT_ID"});
            continue;
        }
        if (record.hadm_id.empty()) {
            result.rejects.push_back({record.row_id, "missing HADM_ID"});
            continue;
        }
        Member m;
        m.sort_key = record.charttime.empty() ? record.chartdate : record.charttime;
        m.row_id = record.row_id;
        m.type = type;
        m.record = &record;
        groups[{record.subject_id, record.hadm_id}].push_back(std::move(m));
    }

    for (auto& [key, members] : groups) {
        std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) {
            if (a.sort_key != b.sort_key) return a.sort_key < b.sort_key;
            return a.row_id < b.row_id;
        });
        VisitRecord visit;
        visit.subject_id = key.first;
        visit.hadm_id = key.second;
        for (const Member& m : members) {
            visit.source_row_ids.push_back(m.row_id);
            const std::string& date = m.record->chartdate;
            if (!date.empty() && (visit.chartdate.empty() || date < visit.chartdate)) {
                visit.chartdate = date;
            }
            if (m.record->text.empty()) continue;  // classified, nothing to pivot
            std::string& column = visit.text_for(m.type);
            if (!column.empty()) column += kColumnSeparator;
            column += m.record->text;
        }
        result.visits.push_back(std::move(visit));
    }
    return result;
}

std::vector<PatientTimeline> build_timelines(std::vector<VisitRecord> visits) {
    std::map<std::string, std::vector<VisitRecord>> by_subject;
    for (auto& v : visits) by_subject[v.subject_id].push_back(std::move(v));

    std::vector<PatientTimeline> timelines;
    timelines.reserve(by_subject.size());
    for (auto& [subject, vs] : by_subject) {
        std::sort(vs.begin(), vs.end(), [](const VisitRecord& a, const VisitRecord& b) {
            if (a.chartdate != b.chartdate) return a.chartdate < b.chartdate;
            return a.hadm_id < b.hadm_id;
        });
        timelines.push_back({subject, std::move(vs)});
    }
    return timelines;
}

std::vector<PatientTimeline> filter_cohort(const std::vector<PatientTimeline>& timelines,
                                           int min_visits, std::optional<NoteType> require_type) {
    std::vector<PatientTimeline> kept;
    for (const auto& tl : timelines) {
        if (static_cast<int>(tl.visits.size()) < min_visits) continue;
        if (require_type) {
            bool all_have = true;
            for (const auto& v : tl.visits) {
                if (v.text_for(*require_type).empty()) {
                    all_have = false;
                    break;
                }
            }
            if (!all_have) continue;
        }
        kept.push_back(tl);
    }
    return kept;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

json visit_to_json(const VisitRecord& v) {
    json notes = json::object();
    for (NoteType t : all_note_types()) {
        notes[std::string(note_type_name(t))] = v.text_for(t);
    }
    return json{{"subject_id", v.subject_id},
                {"hadm_id", v.hadm_id},
                {"chartdate", v.chartdate},
                {"notes", std::move(notes)},
                {"source_row_ids", v.source_row_ids}};
}

VisitRecord visit_from_json(const json& j) {
    VisitRecord v;
    v.subject_id = j.at("subject_id").get<std::string>();
    v.hadm_id = j.at("hadm_id").get<std::string>();
    v.chartdate = j.at("chartdate").get<std::string>();
    const json& notes = j.at("notes");
    for (NoteType t : all_note_types()) {
        v.text_for(t) = notes.at(std::string(note_type_name(t))).get<std::string>();
    }
    v.source_row_ids = j.at("source_row_ids").get<std::vector<long long>>();
    return v;
}

}  // namespace

void write_visits_jsonl(std::ostream& out, const std::vector<VisitRecord>& visits) {
    for (const auto& v : visits) out << visit_to_json(v).dump() << '\n';
}

std::vector<VisitRecord> read_visits_jsonl(std::istream& in) {
    std::vector<VisitRecord> visits;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        visits.push_back(visit_from_json(json::parse(line)));
    }
    return visits;
}

void write_timelines_jsonl(std::ostream& out, const std::vector<PatientTimeline>& timelines) {
    for (const auto& tl : timelines) {
        json visits = json::array();
        for (const auto& v : tl.visits) visits.push_back(visit_to_json(v));
        out << json{{"subject_id", tl.subject_id}, {"visits", std::move(visits)}}.dump() << '\n';
    }
}

std::vector<PatientTimeline> read_timelines_jsonl(std::istream& in) {
    std::vector<PatientTimeline> timelines;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        PatientTimeline tl;
        tl.subject_id = j.at("subject_id").get<std::string>();
        for (const auto& vj : j.at("visits")) tl.visits.push_back(visit_from_json(vj));
        timelines.push_back(std::move(tl));
    }
    return timelines;
}

void write_rejects_csv(std::ostream& out, const std::vector<RejectedRecord>& rejects) {
    write_csv_row(out, {"ROW_ID", "REASON"});
    for (const auto& r : rejects) write_csv_row(out, {std::to_string(r.row_id), r.reason});
}

}  // namespace dense
