#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dense/corpus.hpp"
#include "dense/embedding.hpp"
#include "dense/vector_index.hpp"

namespace dense {

enum class SoapFacet { Subjective, Objective, Assessment, Plan };
inline constexpr std::size_t kFacetCount = 4;

std::string_view facet_name(SoapFacet f);
std::optional<SoapFacet> facet_from_name(std::string_view name);

struct RetrievalQuery {
    enum class Mode { Global, Local };

    SoapFacet facet = SoapFacet::Subjective;
    std::string query_text;
    Mode mode = Mode::Global;
    std::optional<NoteType> target_note_type;  // required when mode == Local
    std::size_t k = 4;
};

/// The four global facet queries. The Plan query is fixed wording; the other
/// three are shipped defaults. A query file (facet <TAB> text) overrides
/// individual facets.
std::vector<RetrievalQuery> default_queries();
std::vector<RetrievalQuery> load_queries_file(const std::string& path);
std::vector<RetrievalQuery> parse_queries(std::istream& in);

struct RetrievalParams {
    std::size_t k_global = 4;          // per facet
    std::size_t k_local = 2;           // per note type present in the visit
    int recency_horizon_visits = 3;    // prior visits eligible as evidence
};

struct EvidenceItem {
    Chunk chunk;
    SoapFacet facet = SoapFacet::Subjective;
    double score = 0.0;
};

struct EvidenceBundle {
    std::string subject_id;
    std::string hadm_id;  // target visit
    std::vector<EvidenceItem> items;  // deduplicated, chronological
};

/// Removes items whose normalized text (lowercased, whitespace-collapsed)
/// duplicates an earlier-kept item, keeping the highest-scored occurrence,
/// then sorts chronologically by (chartdate, seq_index, hadm_id, chunk_id).
/// Idempotent.
std::vector<EvidenceItem> dedup_and_order(std::vector<EvidenceItem> items);

/// Runs the global facet queries over the patient's chunks within the
/// recency window, plus one local query per note type present in the target
/// visit (restricted to that visit and type). Progress-note chunks of the
/// target visit never appear: that is the note being generated. An index
/// holding nothing for the patient yields an empty bundle.
EvidenceBundle retrieve_for_visit(const VectorIndex& index, EmbeddingProvider& provider,
                                  const PatientTimeline& timeline, std::size_t visit_index,
                                  const std::vector<RetrievalQuery>& queries,
                                  const RetrievalParams& params);

}  // namespace dense
