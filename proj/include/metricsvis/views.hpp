#pragma once

#include <optional>
#include <vector>

#include "json.hpp"
#include "metricsvis/analysis.hpp"
#include "metricsvis/groups.hpp"
#include "metricsvis/ingest.hpp"
#include "metricsvis/matrix.hpp"
#include "metricsvis/metrics.hpp"

// JSON view models served by the HTTP API. Every number a client displays
// comes from one of these payloads.
namespace metricsvis::views {

using nlohmann::json;

json context_view(const EvaluationContext& ctx);

/// Reads `{time_range: {start, end}, behaviors: [...], record_types: [...]}`.
/// Missing members keep the value from `current`. Throws InvalidParams.
EvaluationContext parse_context(const json& body, const EvaluationContext& current);

/// Orderings as id arrays and non-empty cells as sparse objects. `scale` is
/// absent when the matrix has no positive score, in which case every bin is
/// blank.
json matrix_view(const ScoreMatrix& matrix, const MatrixOrdering& ordering, const std::optional<ColorScale>& scale);

json cell_view(const CellDetail& cell, std::string_view category_id, std::string_view employee_id);

json profile_view(const WeightProfile& profile);
json histogram_view(const RatingHistogram& histogram);

/// Group summaries with `top_categories` truncated to `k_top` and the
/// weighted total of each group under the matrix's weights.
json groups_view(const std::vector<GroupSummary>& groups, const ScoreMatrix& matrix, std::size_t k_top);

json dandelion_view(const DandelionSpec& spec);
json radar_view(const StackedRadarSpec& spec);
json clusters_view(const ClusterResult& clusters);
json projection_view(const ProjectionResult& projection);

}  // namespace metricsvis::views
