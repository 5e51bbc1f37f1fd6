#include "metricsvis/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "metricsvis/errors.hpp"

namespace metricsvis {

std::size_t ScoreMatrix::employee_index(std::string_view employee_id) const {
    auto it = std::find(employees.begin(), employees.end(), employee_id);
    if (it == employees.end()) throw UnknownKey(std::string(employee_id));
    return static_cast<std::size_t>(it - employees.begin());
}

std::size_t ScoreMatrix::category_index(std::string_view category_id) const {
    auto it = std::lower_bound(categories.begin(), categories.end(), category_id);
    if (it == categories.end() || *it != category_id) throw UnknownKey(std::string(category_id));
    return static_cast<std::size_t>(it - categories.begin());
}

double ScoreMatrix::grand_total() const {
    return std::accumulate(category_totals.begin(), category_totals.end(), 0.0);
}

long ScoreMatrix::total_count() const {
    long n = 0;
    for (const auto& row : counts) n = std::accumulate(row.begin(), row.end(), n);
    return n;
}

ScoreMatrix build_matrix(const std::vector<ActivityRecord>& records, const std::vector<Employee>& employees,
                         const WeightProfile& profile, const EvaluationContext& ctx) {
    if (ctx.weight_profile_version() != profile.version()) {
        throw InvalidParams("context expects profile version " + std::to_string(ctx.weight_profile_version()) +
                            ", got " + std::to_string(profile.version()));
    }

    std::unordered_map<std::string, std::size_t> employee_pos;
    for (const auto& e : employees) employee_pos.emplace(e.employee_id, employee_pos.size());

    std::set<std::string> category_set;
    for (const auto& id : profile.category_ids()) category_set.insert(id);
    for (const auto& r : records) {
        if (ctx.admits(r)) category_set.insert(r.category_id);
    }

    ScoreMatrix m{{}, {category_set.begin(), category_set.end()}, {}, {}, {}, {}, {}, {}, ctx, profile.version()};
    for (const auto& e : employees) m.employees.push_back(e.employee_id);

    const std::size_t nc = m.categories.size();
    const std::size_t ne = m.employees.size();
    std::unordered_map<std::string_view, std::size_t> category_pos;
    for (std::size_t c = 0; c < nc; ++c) {
        category_pos.emplace(m.categories[c], c);
        m.weights.push_back(profile.effective_weight(m.categories[c]));
        m.included.push_back(profile.contains(m.categories[c]) && profile.entry(m.categories[c]).included);
    }

    m.counts.assign(nc, std::vector<long>(ne, 0));
    for (const auto& r : records) {
        if (!ctx.admits(r)) continue;
        auto e = employee_pos.find(r.employee_id);
        if (e == employee_pos.end()) throw UnknownEmployee(r.employee_id);
        ++m.counts[category_pos.at(r.category_id)][e->second];
    }

    m.scores.assign(nc, std::vector<double>(ne, 0.0));
    m.employee_totals.assign(ne, 0.0);
    m.category_totals.assign(nc, 0.0);
    for (std::size_t c = 0; c < nc; ++c) {
        for (std::size_t e = 0; e < ne; ++e) {
            const double s = score(m.counts[c][e], m.weights[c]);
            m.scores[c][e] = s;
            m.category_totals[c] += s;
        }
    }
    for (std::size_t e = 0; e < ne; ++e) {
        for (std::size_t c = 0; c < nc; ++c) m.employee_totals[e] += m.scores[c][e];
    }
    return m;
}

MatrixOrdering natural_ordering(const ScoreMatrix& matrix) {
    return {matrix.employees, matrix.categories, {}};
}

namespace {

/// Sorts `ids` by value with ties resolved by ascending id.
std::vector<std::string> order_by(const std::vector<std::string>& ids, const std::vector<double>& values,
                                  Direction direction) {
    std::vector<std::size_t> idx(ids.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (values[a] != values[b]) {
            return direction == Direction::descending ? values[a] > values[b] : values[a] < values[b];
        }
        return ids[a] < ids[b];
    });
    std::vector<std::string> out;
    out.reserve(ids.size());
    for (auto i : idx) out.push_back(ids[i]);
    return out;
}

MatrixOrdering apply_axis(const MatrixOrdering& base, Axis axis, std::vector<std::string> order) {
    MatrixOrdering out = base;
    if (axis == Axis::employees) {
        out.employee_order = std::move(order);
        return pin_selection(out, base.pinned);
    }
    out.category_order = std::move(order);
    return out;
}

}  // namespace

MatrixOrdering sort_by_total(const ScoreMatrix& matrix, Axis axis, Direction direction) {
    return sort_by_total(matrix, axis, direction, natural_ordering(matrix));
}

MatrixOrdering sort_by_total(const ScoreMatrix& matrix, Axis axis, Direction direction, const MatrixOrdering& base) {
    if (axis == Axis::employees) {
        return apply_axis(base, axis, order_by(matrix.employees, matrix.employee_totals, direction));
    }
    return apply_axis(base, axis, order_by(matrix.categories, matrix.category_totals, direction));
}

MatrixOrdering sort_by_key(const ScoreMatrix& matrix, Axis axis, std::string_view key_id, Direction direction) {
    return sort_by_key(matrix, axis, key_id, direction, natural_ordering(matrix));
}

MatrixOrdering sort_by_key(const ScoreMatrix& matrix, Axis axis, std::string_view key_id, Direction direction,
                           const MatrixOrdering& base) {
    if (axis == Axis::employees) {
        const auto c = matrix.category_index(key_id);
        return apply_axis(base, axis, order_by(matrix.employees, matrix.scores[c], direction));
    }
    const auto e = matrix.employee_index(key_id);
    std::vector<double> column(matrix.categories.size());
    for (std::size_t c = 0; c < column.size(); ++c) column[c] = matrix.scores[c][e];
    return apply_axis(base, axis, order_by(matrix.categories, column, direction));
}

MatrixOrdering pin_selection(const MatrixOrdering& ordering, const std::vector<std::string>& selected) {
    std::unordered_set<std::string_view> present(ordering.employee_order.begin(), ordering.employee_order.end());
    MatrixOrdering out;
    out.category_order = ordering.category_order;
    std::unordered_set<std::string_view> chosen;
    for (const auto& id : selected) {
        if (!present.count(id)) throw UnknownEmployee(id);
        if (chosen.insert(id).second) out.pinned.push_back(id);
    }
    out.employee_order = out.pinned;
    for (const auto& id : ordering.employee_order) {
        if (!chosen.count(id)) out.employee_order.push_back(id);
    }
    return out;
}

std::string_view to_string(BinningMode mode) {
    return mode == BinningMode::equal_interval ? "equal_interval" : "quantile";
}

int ColorScale::bin(double score) const {
    if (!(score > 0.0)) return kBlankBin;
    const double t = std::log1p(score);
    return static_cast<int>(std::upper_bound(bin_boundaries.begin(), bin_boundaries.end(), t) -
                            bin_boundaries.begin());
}

ColorScale build_color_scale(const ScoreMatrix& matrix, BinningMode mode) {
    std::vector<double> ts;
    for (const auto& row : matrix.scores) {
        for (double s : row) {
            if (s > 0.0) ts.push_back(std::log1p(s));
        }
    }
    if (ts.empty()) throw DegenerateScale("matrix has no positive scores");
    std::sort(ts.begin(), ts.end());

    ColorScale scale;
    scale.mode = mode;
    scale.t_min = ts.front();
    scale.t_max = ts.back();
    auto& b = scale.bin_boundaries;

    if (scale.t_min == scale.t_max) {
        scale.degenerate = true;
        for (std::size_t i = 0; i < b.size(); ++i) {
            b[i] = scale.t_min + (static_cast<double>(i) - static_cast<double>(kDegenerateBin - 1));
        }
        return scale;
    }

    if (mode == BinningMode::equal_interval) {
        const double width = (scale.t_max - scale.t_min) / static_cast<double>(kColorClasses);
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = scale.t_min + static_cast<double>(i + 1) * width;
        return scale;
    }

    // Quantile boundaries by linear interpolation between order statistics,
    // nudged upward where ties would make them non-increasing.
    const double last = static_cast<double>(ts.size() - 1);
    for (std::size_t i = 0; i < b.size(); ++i) {
        const double pos = last * static_cast<double>(i + 1) / static_cast<double>(kColorClasses);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, ts.size() - 1);
        b[i] = ts[lo] + (pos - static_cast<double>(lo)) * (ts[hi] - ts[lo]);
        if (i > 0 && b[i] <= b[i - 1]) b[i] = std::nextafter(b[i - 1], std::numeric_limits<double>::infinity());
    }
    return scale;
}

CellDetail cell_detail(const ScoreMatrix& matrix, std::string_view category_id, std::string_view employee_id) {
    const auto c = matrix.category_index(category_id);
    const auto e = matrix.employee_index(employee_id);
    return {matrix.scores[c][e], matrix.counts[c][e], matrix.weights[c]};
}

}  // namespace metricsvis
