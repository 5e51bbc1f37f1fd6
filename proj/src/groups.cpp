#include "metricsvis/groups.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "metricsvis/analysis.hpp"
#include "metricsvis/errors.hpp"
#include "metricsvis/matrix.hpp"

namespace metricsvis {

MemberCounts count_by_member(const std::vector<ActivityRecord>& records) {
    MemberCounts out;
    for (const auto& r : records) ++out[r.employee_id][r.category_id];
    return out;
}

long GroupSummary::total_count() const {
    long n = 0;
    for (const auto& [_, c] : category_counts) n += c;
    return n;
}

std::string_view to_string(GroupKey key) {
    return key == GroupKey::shift ? "shift" : "district";
}

std::string_view to_string(AxisTransform t) {
    return t == AxisTransform::log ? "log" : "linear";
}

namespace {

std::vector<std::string> rank_categories(const std::map<std::string, long>& counts) {
    std::vector<std::pair<std::string, long>> items;
    for (const auto& [id, n] : counts) {
        if (n > 0) items.emplace_back(id, n);
    }
    // std::map iteration is already id-ascending, so a stable sort on count
    // leaves ties in id order.
    std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    std::vector<std::string> out;
    out.reserve(items.size());
    for (auto& [id, _] : items) out.push_back(std::move(id));
    return out;
}

/// Builds summaries for the given membership; `group_of` holds one group
/// index per roster position.
std::vector<GroupSummary> summarize(const std::vector<std::string>& group_ids, const std::vector<std::size_t>& group_of,
                                    const std::vector<ActivityRecord>& records,
                                    const std::vector<Employee>& employees) {
    std::vector<GroupSummary> groups(group_ids.size());
    for (std::size_t g = 0; g < group_ids.size(); ++g) groups[g].group_id = group_ids[g];

    std::unordered_map<std::string_view, std::size_t> employee_group;
    for (std::size_t i = 0; i < employees.size(); ++i) {
        groups[group_of[i]].member_ids.push_back(employees[i].employee_id);
        employee_group.emplace(employees[i].employee_id, group_of[i]);
    }
    for (const auto& r : records) {
        auto it = employee_group.find(r.employee_id);
        if (it == employee_group.end()) throw UnknownEmployee(r.employee_id);
        ++groups[it->second].category_counts[r.category_id];
    }
    for (auto& g : groups) g.top_categories = rank_categories(g.category_counts);
    return groups;
}

}  // namespace

std::vector<GroupSummary> group_by_assignment(const std::vector<ActivityRecord>& records,
                                              const std::vector<Employee>& employees, GroupKey key) {
    std::vector<std::string> values;
    values.reserve(employees.size());
    bool any_unassigned = false;
    for (const auto& e : employees) {
        const std::string& v = key == GroupKey::shift ? e.shift : e.district;
        const bool unassigned = v.empty() || v == kUnassignedGroup;
        values.push_back(unassigned ? std::string(kUnassignedGroup) : v);
        any_unassigned |= unassigned;
    }

    std::vector<std::string> group_ids;
    for (const auto& v : values) {
        if (v != kUnassignedGroup) group_ids.push_back(v);
    }
    std::sort(group_ids.begin(), group_ids.end());
    group_ids.erase(std::unique(group_ids.begin(), group_ids.end()), group_ids.end());
    if (any_unassigned) group_ids.emplace_back(kUnassignedGroup);

    std::vector<std::size_t> group_of;
    group_of.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == kUnassignedGroup) {
            group_of.push_back(group_ids.size() - 1);
            continue;
        }
        auto it = std::lower_bound(group_ids.begin(), group_ids.end() - (any_unassigned ? 1 : 0), values[i]);
        group_of.push_back(static_cast<std::size_t>(it - group_ids.begin()));
    }
    return summarize(group_ids, group_of, records, employees);
}

std::vector<GroupSummary> group_by_clusters(const ClusterResult& clusters, const std::vector<ActivityRecord>& records,
                                            const std::vector<Employee>& employees) {
    std::vector<std::size_t> group_of;
    group_of.reserve(employees.size());
    for (const auto& e : employees) {
        auto it = std::lower_bound(clusters.employee_ids.begin(), clusters.employee_ids.end(), e.employee_id);
        if (it == clusters.employee_ids.end() || *it != e.employee_id) throw CoverageError(e.employee_id);
        group_of.push_back(static_cast<std::size_t>(clusters.labels[static_cast<std::size_t>(
            it - clusters.employee_ids.begin())]));
    }
    std::vector<std::string> group_ids;
    for (std::size_t c = 0; c < clusters.k; ++c) group_ids.push_back("cluster_" + std::to_string(c));
    return summarize(group_ids, group_of, records, employees);
}

std::vector<std::string> top_categories(const GroupSummary& group, std::size_t k) {
    const auto n = std::min(k, group.top_categories.size());
    return {group.top_categories.begin(), group.top_categories.begin() + static_cast<std::ptrdiff_t>(n)};
}

double weighted_total(const GroupSummary& group, const ScoreMatrix& matrix) {
    double total = 0.0;
    for (const auto& [category, count] : group.category_counts) {
        total += score(count, matrix.weights[matrix.category_index(category)]);
    }
    return total;
}

double axis_length(long count, AxisTransform transform) {
    return transform == AxisTransform::log ? std::log1p(static_cast<double>(count)) : static_cast<double>(count);
}

namespace {

long count_of(const std::map<std::string, long>& counts, const std::string& id) {
    auto it = counts.find(id);
    return it == counts.end() ? 0 : it->second;
}

std::vector<double> angles_for(std::size_t n) {
    std::vector<double> angles(n);
    for (std::size_t i = 0; i < n; ++i) {
        angles[i] = kGlyphRotation + 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n);
    }
    return angles;
}

}  // namespace

DandelionSpec build_dandelion(const std::vector<GroupSummary>& groups, std::size_t k, AxisTransform transform) {
    if (k == 0) throw InvalidParams("k must be at least 1");
    if (groups.empty()) throw InvalidParams("dandelion needs at least one group");

    std::map<std::string, long> combined;
    for (const auto& g : groups) {
        for (const auto& c : top_categories(g, k)) combined[c] = 0;
    }
    for (const auto& g : groups) {
        for (auto& [c, total] : combined) total += count_of(g.category_counts, c);
    }

    DandelionSpec spec;
    spec.k = k;
    spec.transform = transform;
    spec.axes = rank_categories(combined);
    spec.axis_angles = angles_for(spec.axes.size());
    spec.over_soft_cap = spec.axes.size() > kGlyphAxisSoftCap;
    for (const auto& g : groups) {
        DandelionGlyph glyph{g.group_id, {}, {}};
        for (const auto& axis : spec.axes) {
            const long n = count_of(g.category_counts, axis);
            glyph.axis_counts.push_back(n);
            glyph.axis_lengths.push_back(axis_length(n, transform));
        }
        spec.glyphs.push_back(std::move(glyph));
    }
    return spec;
}

StackedRadarSpec build_stacked_radar(const GroupSummary& group, const MemberCounts& per_member_counts,
                                     const std::vector<std::string>& axes, AxisTransform transform,
                                     double inner_radius_fraction) {
    if (!(inner_radius_fraction > 0.0 && inner_radius_fraction < 1.0)) {
        throw InvalidParams("inner radius fraction must lie in (0, 1)");
    }
    static const std::map<std::string, long> kNone;

    StackedRadarSpec spec;
    spec.group_id = group.group_id;
    spec.axes = axes;
    spec.inner_radius_fraction = inner_radius_fraction;
    spec.transform = transform;
    spec.axis_totals.assign(axes.size(), 0);

    struct Member {
        const std::string* id;
        const std::map<std::string, long>* counts;
        long total;
    };
    std::vector<Member> members;
    for (const auto& id : group.member_ids) {
        auto it = per_member_counts.find(id);
        const auto* counts = it == per_member_counts.end() ? &kNone : &it->second;
        long total = 0;
        for (const auto& [_, n] : *counts) total += n;
        members.push_back({&id, counts, total});
        for (std::size_t a = 0; a < axes.size(); ++a) spec.axis_totals[a] += count_of(*counts, axes[a]);
    }
    std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) {
        if (a.total != b.total) return a.total > b.total;
        return *a.id < *b.id;
    });

    for (long t : spec.axis_totals) spec.axis_lengths.push_back(axis_length(t, transform));
    for (const auto& m : members) {
        Ribbon ribbon{*m.id, {}, {}};
        for (std::size_t a = 0; a < axes.size(); ++a) {
            const long n = count_of(*m.counts, axes[a]);
            ribbon.counts.push_back(n);
            ribbon.fractions.push_back(spec.axis_totals[a] > 0 ? static_cast<double>(n) /
                                                                     static_cast<double>(spec.axis_totals[a])
                                                               : 0.0);
        }
        spec.member_order.push_back(*m.id);
        spec.ribbons.push_back(std::move(ribbon));
    }
    return spec;
}

}  // namespace metricsvis
