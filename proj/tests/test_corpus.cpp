#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dense/corpus.hpp"
#include "dense/synthetic.hpp"
#include "dense/taxonomy.hpp"

#include <map>
#include <set>
#include <sstream>

using namespace dense;

namespace {

RawNoteRecord rec(long long row, std::string subj, std::string hadm, std::string date,
                  std::string time, std::string text) {
    RawNoteRecord r;
    r.row_id = row;
    r.subject_id = std::move(subj);
    r.hadm_id = std::move(hadm);
    r.chartdate = std::move(date);
    r.charttime = std::move(time);
    r.text = std::move(text);
    return r;
}

}  // namespace

TEST_CASE("pivot groups one admission into one visit with ordered columns") {
    std::vector<std::pair<RawNoteRecord, NoteType>> in = {
        {rec(2, "s1", "h1", "2131-04-02", "2131-04-02 10:00:00", "late rad"), NoteType::radiology_reports},
        {rec(1, "s1", "h1", "2131-04-02", "2131-04-02 08:00:00", "early rad"), NoteType::radiology_reports},
        {rec(3, "s1", "h1", "2131-04-02", "", "nursing text"), NoteType::nursing_other_notes},
    };
    auto result = pivot_notes(in);
    CHECK(result.rejects.empty());
    REQUIRE(result.visits.size() == 1);
    const auto& v = result.visits[0];
    int nonempty = 0;
    for (NoteType t : all_note_types()) nonempty += !v.text_for(t).empty();
    CHECK(nonempty == 2);
    CHECK(v.text_for(NoteType::radiology_reports) == "early rad\n\nlate rad");
    CHECK(v.chartdate == "2131-04-02");
    CHECK(v.source_row_ids == std::vector<long long>{3, 1, 2});  // dateless sorts first
}

TEST_CASE("pivot of an empty stream is empty") {
    CHECK(pivot_notes({}).visits.empty());
}

TEST_CASE("pivot partitions row ids across admissions") {
    // 5 notes across 2 admissions of one patient; partition oracle by key.
    std::vector<std::pair<RawNoteRecord, NoteType>> in;
    std::map<std::string, std::set<long long>> expected;
    for (long long i = 0; i < 5; ++i) {
        std::string hadm = i < 2 ? "h1" : "h2";
        in.push_back({rec(i, "s1", hadm, "2131-01-0" + std::to_string(i + 1), "", "t"), NoteType::misc_notes});
        expected[hadm].insert(i);
    }
    auto result = pivot_notes(in);
    REQUIRE(result.visits.size() == 2);
    std::set<long long> seen;
    for (const auto& v : result.visits) {
        std::set<long long> ids(v.source_row_ids.begin(), v.source_row_ids.end());
        CHECK(ids == expected[v.hadm_id]);
        seen.insert(ids.begin(), ids.end());
    }
    CHECK(seen.size() == 5);
}

TEST_CASE("records missing ids are diverted to rejects") {
    std::vector<std::pair<RawNoteRecord, NoteType>> in = {
        {rec(1, "", "h1", "2131-01-01", "", "x"), NoteType::misc_notes},
        {rec(2, "s1", "", "2131-01-01", "", "x"), NoteType::misc_notes},
        {rec(3, "s1", "h1", "2131-01-01", "", "x"), NoteType::misc_notes},
    };
    auto result = pivot_notes(in);
    REQUIRE(result.rejects.size() == 2);
    CHECK(result.rejects[0].reason == "missing SUBJECT_ID");
    CHECK(result.rejects[1].reason == "missing HADM_ID");
    REQUIRE(result.visits.size() == 1);
    CHECK(result.visits[0].source_row_ids == std::vector<long long>{3});

    std::ostringstream csv;
    write_rejects_csv(csv, result.rejects);
    CHECK(csv.str() == "ROW_ID,REASON\n1,missing SUBJECT_ID\n2,missing HADM_ID\n");
}

TEST_CASE("pivot conserves every character of accepted non-empty text") {
    auto corpus = generate_synthetic_corpus({6, 2, 8, default_coverage(), 11});
    const RuleSet rules = RuleSet::defaults();
    std::vector<std::pair<RawNoteRecord, NoteType>> classified;
    for (auto& r : corpus) classified.emplace_back(r, classify_note(r, rules));

    std::size_t input_chars = 0;
    std::size_t nonempty_notes = 0;
    for (const auto& [r, t] : classified) {
        input_chars += r.text.size();
        nonempty_notes += !r.text.empty();
    }
    auto result = pivot_notes(classified);
    REQUIRE(result.rejects.empty());
    std::size_t output_chars = 0;
    std::size_t separators = 0;
    std::size_t nonempty_columns = 0;
    for (const auto& v : result.visits) {
        for (NoteType t : all_note_types()) {
            const auto& col = v.text_for(t);
            if (col.empty()) continue;
            ++nonempty_columns;
            output_chars += col.size();
        }
    }
    // each non-empty note beyond the first in its column adds one separator
    separators = (nonempty_notes - nonempty_columns) * std::string(kColumnSeparator).size();
    CHECK(output_chars == input_chars + separators);

    // grouping correctness: every row id in exactly one visit
    std::set<long long> all_ids;
    std::size_t total_ids = 0;
    for (const auto& v : result.visits) {
        total_ids += v.source_row_ids.size();
        all_ids.insert(v.source_row_ids.begin(), v.source_row_ids.end());
    }
    CHECK(total_ids == corpus.size());
    CHECK(all_ids.size() == corpus.size());
}

TEST_CASE("timelines sort visits and assign positional indexes") {
    std::vector<VisitRecord> visits(2);
    visits[0].subject_id = "s1"; visits[0].hadm_id = "h2"; visits[0].chartdate = "2132-05-01";
    visits[1].subject_id = "s1"; visits[1].hadm_id = "h1"; visits[1].chartdate = "2131-01-01";
    auto timelines = build_timelines(visits);
    REQUIRE(timelines.size() == 1);
    REQUIRE(timelines[0].visits.size() == 2);
    CHECK(timelines[0].visits[0].chartdate == "2131-01-01");
    CHECK(timelines[0].visits[1].chartdate == "2132-05-01");
}

TEST_CASE("single-visit patient yields a length-1 timeline") {
    std::vector<VisitRecord> visits(1);
    visits[0].subject_id = "s9"; visits[0].hadm_id = "h9"; visits[0].chartdate = "2131-01-01";
    auto timelines = build_timelines(visits);
    REQUIRE(timelines.size() == 1);
    CHECK(timelines[0].visits.size() == 1);
}

TEST_CASE("timeline dates are monotone for a generated cohort") {
    auto corpus = generate_synthetic_corpus({8, 3, 12, default_coverage(), 3});
    const RuleSet rules = RuleSet::defaults();
    std::vector<std::pair<RawNoteRecord, NoteType>> classified;
    for (auto& r : corpus) classified.emplace_back(r, classify_note(r, rules));
    auto timelines = build_timelines(pivot_notes(classified).visits);
    CHECK(timelines.size() == 8);
    for (const auto& tl : timelines) {
        for (std::size_t i = 0; i + 1 < tl.visits.size(); ++i) {
            CHECK(tl.visits[i].chartdate <= tl.visits[i + 1].chartdate);
        }
    }
}

TEST_CASE("cohort filter thresholds and type requirement") {
    auto make_tl = [](std::string subj, int n, bool with_progress) {
        PatientTimeline tl;
        tl.subject_id = subj;
        for (int i = 0; i < n; ++i) {
            VisitRecord v;
            v.subject_id = subj;
            v.hadm_id = "h" + std::to_string(i);
            v.chartdate = "2131-01-0" + std::to_string(i % 9 + 1);
            if (with_progress) v.text_for(NoteType::progress_notes) = "gold";
            tl.visits.push_back(std::move(v));
        }
        return tl;
    };
    std::vector<PatientTimeline> tls = {make_tl("a", 3, true), make_tl("b", 10, true),
                                        make_tl("c", 57, true)};
    auto kept = filter_cohort(tls, 10);
    REQUIRE(kept.size() == 2);
    CHECK(kept[0].visits.size() == 10);
    CHECK(kept[1].visits.size() == 57);

    // one visit lacking the required type excludes the timeline
    auto tl = make_tl("d", 4, true);
    tl.visits[2].text_for(NoteType::progress_notes).clear();
    auto kept2 = filter_cohort({tl}, 1, NoteType::progress_notes);
    CHECK(kept2.empty());

    // identity case
    auto kept3 = filter_cohort(tls, 1);
    CHECK(kept3.size() == tls.size());
}

TEST_CASE("56-patient cohort in the published shape") {
    auto corpus = generate_synthetic_corpus({56, 10, 57, default_coverage(), 1});
    const RuleSet rules = RuleSet::defaults();
    std::vector<std::pair<RawNoteRecord, NoteType>> classified;
    for (auto& r : corpus) classified.emplace_back(r, classify_note(r, rules));
    auto timelines = build_timelines(pivot_notes(classified).visits);
    REQUIRE(timelines.size() == 56);
    std::size_t total = 0;
    for (const auto& tl : timelines) {
        CHECK(tl.visits.size() >= 10);
        CHECK(tl.visits.size() <= 57);
        total += tl.visits.size();
    }
    CHECK(total > 1100);
}

TEST_CASE("synthetic generation is deterministic and validates its spec") {
    SyntheticCorpusSpec spec{4, 2, 6, default_coverage(), 7};
    auto a = generate_synthetic_corpus(spec);
    auto b = generate_synthetic_corpus(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].row_id == b[i].row_id);
        CHECK(a[i].text == b[i].text);
        CHECK(a[i].charttime == b[i].charttime);
    }
    CHECK_THROWS_AS(generate_synthetic_corpus({0, 1, 1, {}, 1}), SynthesisError);
    CHECK_THROWS_AS(generate_synthetic_corpus({1, 0, 1, {}, 1}), SynthesisError);
    CHECK_THROWS_AS(generate_synthetic_corpus({1, 1, 101, {}, 1}), SynthesisError);
    CHECK_THROWS_AS(generate_synthetic_corpus({1, 1, 1, {{NoteType::misc_notes, 1.5}}, 1}), SynthesisError);
}

TEST_CASE("synthetic coverage tracks configured probabilities") {
    // ~2000 visits
    SyntheticCorpusSpec spec{100, 20, 20, default_coverage(), 5};
    auto corpus = generate_synthetic_corpus(spec);
    const RuleSet rules = RuleSet::defaults();

    std::map<std::pair<std::string, std::string>, std::set<NoteType>> per_visit;
    std::set<std::pair<std::string, std::string>> visits;
    for (const auto& r : corpus) {
        visits.insert({r.subject_id, r.hadm_id});
        per_visit[{r.subject_id, r.hadm_id}].insert(classify_note(r, rules));
    }
    double n = 100.0 * 20.0;
    CHECK(visits.size() == 2000);

    auto observed = [&](NoteType t) {
        int c = 0;
        for (const auto& [k, types] : per_visit) c += types.count(t) > 0;
        return c / n;
    };
    CHECK(observed(NoteType::progress_notes) == doctest::Approx(0.0856).epsilon(0.6));
    CHECK(observed(NoteType::progress_notes) >= 0.035);
    CHECK(observed(NoteType::progress_notes) <= 0.135);
    CHECK(observed(NoteType::radiology_reports) >= 0.87);
    CHECK(observed(NoteType::radiology_reports) <= 0.97);
    CHECK(observed(NoteType::nursing_other_notes) >= 0.93);
}

TEST_CASE("synthetic records classify back to their intended coverage types") {
    // every record produced under a single-type coverage map classifies to it
    for (NoteType t : all_note_types()) {
        SyntheticCorpusSpec spec{2, 3, 3, {{t, 1.0}}, 9};
        auto corpus = generate_synthetic_corpus(spec);
        REQUIRE(!corpus.empty());
        const RuleSet rules = RuleSet::defaults();
        for (const auto& r : corpus) {
            CHECK(classify_note(r, rules) == t);
        }
    }
}

TEST_CASE("visits and timelines round-trip through JSONL") {
    auto corpus = generate_synthetic_corpus({3, 2, 4, default_coverage(), 2});
    const RuleSet rules = RuleSet::defaults();
    std::vector<std::pair<RawNoteRecord, NoteType>> classified;
    for (auto& r : corpus) classified.emplace_back(r, classify_note(r, rules));
    auto visits = pivot_notes(classified).visits;

    std::ostringstream out;
    write_visits_jsonl(out, visits);
    std::istringstream in(out.str());
    auto back = read_visits_jsonl(in);
    REQUIRE(back.size() == visits.size());
    for (std::size_t i = 0; i < visits.size(); ++i) {
        CHECK(back[i].subject_id == visits[i].subject_id);
        CHECK(back[i].notes == visits[i].notes);
        CHECK(back[i].source_row_ids == visits[i].source_row_ids);
    }

    auto timelines = build_timelines(visits);
    std::ostringstream out2;
    write_timelines_jsonl(out2, timelines);
    std::istringstream in2(out2.str());
    auto back2 = read_timelines_jsonl(in2);
    REQUIRE(back2.size() == timelines.size());
    for (std::size_t i = 0; i < timelines.size(); ++i) {
        CHECK(back2[i].subject_id == timelines[i].subject_id);
        CHECK(back2[i].visits.size() == timelines[i].visits.size());
    }
}
