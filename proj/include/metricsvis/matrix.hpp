#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "metricsvis/ingest.hpp"
#include "metricsvis/metrics.hpp"

namespace metricsvis {

/// Employees x categories performance matrix. Cells are indexed
/// `[category][employee]`.
struct ScoreMatrix {
    std::vector<std::string> employees;   ///< roster order
    std::vector<std::string> categories;  ///< ascending id
    std::vector<double> weights;          ///< effective weight: 0 when excluded or absent from the profile
    std::vector<bool> included;
    std::vector<std::vector<long>> counts;
    std::vector<std::vector<double>> scores;
    std::vector<double> employee_totals;
    std::vector<double> category_totals;
    EvaluationContext context;
    long profile_version = 0;

    std::size_t employee_index(std::string_view employee_id) const;  ///< throws UnknownKey
    std::size_t category_index(std::string_view category_id) const;  ///< throws UnknownKey
    double grand_total() const;
    long total_count() const;
};

/// Counts the records admitted by `ctx` and weights them with `profile`.
/// Categories are the union of the profile's and those seen in the records.
/// Throws UnknownEmployee for records outside the roster and InvalidParams
/// when `ctx` names a different profile version.
ScoreMatrix build_matrix(const std::vector<ActivityRecord>& records, const std::vector<Employee>& employees,
                         const WeightProfile& profile, const EvaluationContext& ctx);

enum class Axis { employees, categories };
enum class Direction { descending, ascending };

struct MatrixOrdering {
    std::vector<std::string> employee_order;
    std::vector<std::string> category_order;
    std::vector<std::string> pinned;

    bool operator==(const MatrixOrdering&) const = default;
};

MatrixOrdering natural_ordering(const ScoreMatrix& matrix);

/// Orders one axis by its totals; ties go to the smaller id. The other axis
/// keeps the order it has in `base`, and `base.pinned` stays leftmost.
MatrixOrdering sort_by_total(const ScoreMatrix& matrix, Axis axis, Direction direction);
MatrixOrdering sort_by_total(const ScoreMatrix& matrix, Axis axis, Direction direction, const MatrixOrdering& base);

/// Orders `axis` by the scores of one row (a category, when sorting
/// employees) or one column (an employee, when sorting categories).
/// Throws UnknownKey when `key_id` is not on the opposite axis.
MatrixOrdering sort_by_key(const ScoreMatrix& matrix, Axis axis, std::string_view key_id, Direction direction);
MatrixOrdering sort_by_key(const ScoreMatrix& matrix, Axis axis, std::string_view key_id, Direction direction,
                           const MatrixOrdering& base);

/// Moves `selected` to the front of the employee order in selection order.
/// Repeated ids are ignored. Throws UnknownEmployee.
MatrixOrdering pin_selection(const MatrixOrdering& ordering, const std::vector<std::string>& selected);

inline constexpr std::size_t kColorClasses = 9;
inline constexpr int kBlankBin = -1;

/// ColorBrewer sequential Greens, light to dark.
inline constexpr std::array<std::string_view, kColorClasses> kGreens9 = {
    "#f7fcf5", "#e5f5e0", "#c7e9c0", "#a1d99b", "#74c476", "#41ab5d", "#238b45", "#006d2c", "#00441b"};

enum class BinningMode { equal_interval, quantile };

std::string_view to_string(BinningMode mode);

/// Nine-class scale over t = ln(1 + score). Zero scores map to kBlankBin.
struct ColorScale {
    std::array<double, kColorClasses - 1> bin_boundaries{};
    std::array<std::string_view, kColorClasses> palette = kGreens9;
    BinningMode mode = BinningMode::equal_interval;
    bool degenerate = false;  ///< every positive score was equal
    double t_min = 0.0;
    double t_max = 0.0;

    /// Bin in [0, 8], or kBlankBin for non-positive scores.
    int bin(double score) const;
};

/// Bin index used for every positive cell when all positive scores are equal.
inline constexpr int kDegenerateBin = static_cast<int>(kColorClasses) - 2;

/// Splits [min t, max t] over the positive cells into nine classes. When all
/// positive scores are equal the scale is flagged `degenerate` and every
/// positive cell lands in kDegenerateBin. Throws DegenerateScale when no
/// cell is positive.
ColorScale build_color_scale(const ScoreMatrix& matrix, BinningMode mode = BinningMode::equal_interval);

struct CellDetail {
    double score = 0.0;
    long count = 0;
    double weight = 0.0;

    bool operator==(const CellDetail&) const = default;
};

/// Throws UnknownKey.
CellDetail cell_detail(const ScoreMatrix& matrix, std::string_view category_id, std::string_view employee_id);

}  // namespace metricsvis
