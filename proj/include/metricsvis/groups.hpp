#pragma once

#include <map>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "metricsvis/ingest.hpp"

namespace metricsvis {

struct ClusterResult;
struct ScoreMatrix;

inline constexpr std::string_view kUnassignedGroup = "unassigned";
inline constexpr std::size_t kDefaultTopK = 5;
/// Radial glyphs stay legible up to roughly a dozen axes. Larger axis sets
/// are still produced but flagged.
inline constexpr std::size_t kGlyphAxisSoftCap = 12;
inline constexpr double kGlyphRotation = std::numbers::pi / 8.0;
inline constexpr double kDefaultInnerRadiusFraction = 0.15;

/// employee_id -> category_id -> count
using MemberCounts = std::map<std::string, std::map<std::string, long>>;

MemberCounts count_by_member(const std::vector<ActivityRecord>& records);

struct GroupSummary {
    std::string group_id;
    std::vector<std::string> member_ids;          ///< roster order
    std::map<std::string, long> category_counts;  ///< nonzero counts only
    std::vector<std::string> top_categories;      ///< every nonzero category, descending count, ties by id

    long total_count() const;
};

enum class GroupKey { shift, district };

std::string_view to_string(GroupKey key);

/// One group per distinct shift (or district) value; employees without one
/// go to "unassigned", which sorts last. Records must already be filtered to
/// the evaluation context. Throws UnknownEmployee for records off the roster.
std::vector<GroupSummary> group_by_assignment(const std::vector<ActivityRecord>& records,
                                              const std::vector<Employee>& employees, GroupKey key);

/// One group per cluster label, named "cluster_<label>", in label order.
/// Throws CoverageError when a roster employee has no label.
std::vector<GroupSummary> group_by_clusters(const ClusterResult& clusters, const std::vector<ActivityRecord>& records,
                                            const std::vector<Employee>& employees);

/// First min(k, nonzero categories) of the group's ranking.
std::vector<std::string> top_categories(const GroupSummary& group, std::size_t k);

/// Sum of count x effective weight over the group's categories, using the
/// weights the matrix was built with.
double weighted_total(const GroupSummary& group, const ScoreMatrix& matrix);

enum class AxisTransform { log, linear };

std::string_view to_string(AxisTransform t);

struct DandelionGlyph {
    std::string group_id;
    std::vector<long> axis_counts;     ///< aligned with DandelionSpec::axes
    std::vector<double> axis_lengths;  ///< transformed counts, aligned with axes
};

struct DandelionSpec {
    std::vector<std::string> axes;  ///< shared by every glyph
    std::vector<double> axis_angles;  ///< radians, rotation_offset + 2*pi*i/n
    std::vector<DandelionGlyph> glyphs;
    double rotation_offset = kGlyphRotation;
    AxisTransform transform = AxisTransform::log;
    std::size_t k = kDefaultTopK;
    bool over_soft_cap = false;
};

/// Axis length for a count: ln(1 + count) or the count itself.
double axis_length(long count, AxisTransform transform);

/// Axes are the union of every group's top-k categories ordered by the
/// combined count across groups (descending, ties by id). Throws
/// InvalidParams for k == 0 or an empty group list.
DandelionSpec build_dandelion(const std::vector<GroupSummary>& groups, std::size_t k,
                              AxisTransform transform = AxisTransform::log);

struct Ribbon {
    std::string employee_id;
    std::vector<long> counts;        ///< aligned with axes
    std::vector<double> fractions;   ///< member count / group total per axis; 0 where the total is 0
};

struct StackedRadarSpec {
    std::string group_id;
    std::vector<std::string> axes;
    std::vector<long> axis_totals;
    std::vector<double> axis_lengths;
    std::vector<std::string> member_order;  ///< descending member total, ties by id
    std::vector<Ribbon> ribbons;            ///< in member_order
    double inner_radius_fraction = kDefaultInnerRadiusFraction;
    double rotation_offset = kGlyphRotation;
    AxisTransform transform = AxisTransform::log;
};

/// Member contributions along the shared dandelion axes. Only the group's
/// members are read from `per_member_counts`; absent members count as zero.
StackedRadarSpec build_stacked_radar(const GroupSummary& group, const MemberCounts& per_member_counts,
                                     const std::vector<std::string>& axes,
                                     AxisTransform transform = AxisTransform::log,
                                     double inner_radius_fraction = kDefaultInnerRadiusFraction);

}  // namespace metricsvis
