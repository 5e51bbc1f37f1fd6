#include "metricsvis/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

#include "metricsvis/errors.hpp"
#include "metricsvis/matrix.hpp"
#include "metricsvis/random.hpp"

namespace metricsvis {

namespace {

using rnd::standard_normal;
using rnd::uniform01;

double squared_distance(const Point& a, const Point& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

}  // namespace

std::vector<double> min_max_normalize(const std::vector<double>& values) {
    std::vector<double> out(values.size(), 0.0);
    if (values.empty()) return out;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double range = *hi - *lo;
    if (!(range > 0.0)) return out;
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - *lo) / range;
    return out;
}

std::vector<Point> FeatureTable::points() const {
    std::vector<Point> out(employee_ids.size(), Point(categories.size(), 0.0));
    for (std::size_t c = 0; c < categories.size(); ++c) {
        for (std::size_t e = 0; e < employee_ids.size(); ++e) out[e][c] = normalized[c][e];
    }
    return out;
}

FeatureTable build_features(const ScoreMatrix& matrix) {
    FeatureTable table;
    table.employee_ids = matrix.employees;
    for (std::size_t c = 0; c < matrix.categories.size(); ++c) {
        if (!matrix.included[c]) continue;
        table.categories.push_back(matrix.categories[c]);
        table.raw.push_back(matrix.counts[c]);
        std::vector<double> column(matrix.counts[c].begin(), matrix.counts[c].end());
        table.normalized.push_back(min_max_normalize(column));
    }
    return table;
}

double clustering_inertia(const std::vector<Point>& points, const std::vector<int>& labels,
                          const std::vector<Point>& centroids) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        total += squared_distance(points[i], centroids[static_cast<std::size_t>(labels[i])]);
    }
    return total;
}

namespace {

std::vector<Point> kmeanspp_init(const std::vector<Point>& points, std::size_t k, std::mt19937_64& rng) {
    const std::size_t n = points.size();
    std::vector<Point> centers;
    std::vector<bool> chosen(n, false);
    const auto first = rnd::index(rng, n);
    centers.push_back(points[first]);
    chosen[first] = true;

    std::vector<double> d2(n);
    for (std::size_t i = 0; i < n; ++i) d2[i] = squared_distance(points[i], centers[0]);

    while (centers.size() < k) {
        const double sum = std::accumulate(d2.begin(), d2.end(), 0.0);
        std::size_t pick = n;
        if (sum > 0.0) {
            const double target = uniform01(rng) * sum;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += d2[i];
                if (d2[i] > 0.0 && acc > target) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) {
                // Rounding left the target past the last positive weight.
                for (std::size_t i = n; i-- > 0;) {
                    if (d2[i] > 0.0) {
                        pick = i;
                        break;
                    }
                }
            }
        } else {
            // Every remaining point coincides with a center; take an unused index.
            std::vector<std::size_t> unused;
            for (std::size_t i = 0; i < n; ++i) {
                if (!chosen[i]) unused.push_back(i);
            }
            pick = unused[rnd::index(rng, unused.size())];
        }
        chosen[pick] = true;
        centers.push_back(points[pick]);
        for (std::size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], squared_distance(points[i], centers.back()));
    }
    return centers;
}

/// Nearest centroid, lowest index on ties.
int nearest(const Point& p, const std::vector<Point>& centroids) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centroids.size(); ++c) {
        const double d = squared_distance(p, centroids[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

/// Gives each empty cluster the point farthest from its centroid among
/// clusters that can spare one.
void fill_empty_clusters(const std::vector<Point>& points, std::vector<int>& labels,
                         const std::vector<Point>& centroids) {
    const std::size_t k = centroids.size();
    std::vector<std::size_t> sizes(k, 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    for (std::size_t c = 0; c < k; ++c) {
        if (sizes[c] > 0) continue;
        std::size_t far = points.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto owner = static_cast<std::size_t>(labels[i]);
            if (sizes[owner] < 2) continue;
            const double d = squared_distance(points[i], centroids[owner]);
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        --sizes[static_cast<std::size_t>(labels[far])];
        labels[far] = static_cast<int>(c);
        ++sizes[c];
    }
}

std::vector<Point> means(const std::vector<Point>& points, const std::vector<int>& labels, std::size_t k) {
    const std::size_t dim = points.front().size();
    std::vector<Point> out(k, Point(dim, 0.0));
    std::vector<std::size_t> sizes(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(labels[i]);
        ++sizes[c];
        for (std::size_t d = 0; d < dim; ++d) out[c][d] += points[i][d];
    }
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t d = 0; d < dim; ++d) out[c][d] /= static_cast<double>(sizes[c]);
    }
    return out;
}

PointClustering lloyd(const std::vector<Point>& points, std::vector<Point> centroids, const KMeansOptions& options) {
    const std::size_t n = points.size();
    const std::size_t k = centroids.size();
    PointClustering run;
    run.labels.assign(n, 0);

    for (std::size_t iter = 1; iter <= options.max_iterations; ++iter) {
        for (std::size_t i = 0; i < n; ++i) run.labels[i] = nearest(points[i], centroids);
        fill_empty_clusters(points, run.labels, centroids);
        auto updated = means(points, run.labels, k);

        double movement = 0.0;
        for (std::size_t c = 0; c < k; ++c) movement = std::max(movement, std::sqrt(squared_distance(centroids[c], updated[c])));
        centroids = std::move(updated);
        run.iterations = iter;

        const double inertia = clustering_inertia(points, run.labels, centroids);
        if (!run.inertia_history.empty()) {
            const double prev = run.inertia_history.back();
            if (inertia > prev + 1e-9 * (1.0 + prev)) {
                throw std::logic_error("k-means inertia increased between iterations");
            }
        }
        run.inertia_history.push_back(inertia);
        if (movement < options.tolerance) break;
    }
    run.centroids = std::move(centroids);
    run.inertia = clustering_inertia(points, run.labels, run.centroids);
    return run;
}

/// Relabels so cluster 0 is the largest, ties going to the cluster holding
/// the smallest point index.
void canonicalize(PointClustering& run) {
    const std::size_t k = run.centroids.size();
    std::vector<std::size_t> sizes(k, 0), first(k, run.labels.size());
    for (std::size_t i = 0; i < run.labels.size(); ++i) {
        const auto c = static_cast<std::size_t>(run.labels[i]);
        ++sizes[c];
        first[c] = std::min(first[c], i);
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sizes[a] != sizes[b]) return sizes[a] > sizes[b];
        return first[a] < first[b];
    });
    std::vector<int> relabel(k);
    std::vector<Point> centroids(k);
    for (std::size_t rank = 0; rank < k; ++rank) {
        relabel[order[rank]] = static_cast<int>(rank);
        centroids[rank] = std::move(run.centroids[order[rank]]);
    }
    for (auto& l : run.labels) l = relabel[static_cast<std::size_t>(l)];
    run.centroids = std::move(centroids);
}

}  // namespace

PointClustering kmeans_points(const std::vector<Point>& points, std::size_t k, std::uint64_t seed,
                              const KMeansOptions& options) {
    if (k < 1 || k > points.size()) {
        throw InvalidK("k = " + std::to_string(k) + " outside [1, " + std::to_string(points.size()) + "]");
    }
    if (options.restarts == 0 || options.max_iterations == 0) throw InvalidParams("restarts and iterations must be positive");

    std::mt19937_64 rng(seed);
    PointClustering best;
    bool have_best = false;
    for (std::size_t r = 0; r < options.restarts; ++r) {
        auto run = lloyd(points, kmeanspp_init(points, k, rng), options);
        if (!have_best || run.inertia < best.inertia) {
            best = std::move(run);
            have_best = true;
        }
    }
    canonicalize(best);
    return best;
}

int ClusterResult::label_of(std::string_view employee_id) const {
    auto it = std::lower_bound(employee_ids.begin(), employee_ids.end(), employee_id);
    if (it == employee_ids.end() || *it != employee_id) throw UnknownEmployee(std::string(employee_id));
    return labels[static_cast<std::size_t>(it - employee_ids.begin())];
}

std::vector<std::size_t> ClusterResult::cluster_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    return sizes;
}

ClusterResult kmeans(const FeatureTable& features, std::size_t k, std::uint64_t seed, const KMeansOptions& options) {
    const auto points = features.points();
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return features.employee_ids[a] < features.employee_ids[b]; });

    std::vector<Point> sorted;
    ClusterResult result;
    for (auto i : order) {
        sorted.push_back(points[i]);
        result.employee_ids.push_back(features.employee_ids[i]);
    }
    auto run = kmeans_points(sorted, k, seed, options);
    result.k = k;
    result.seed = seed;
    result.options = options;
    result.labels = std::move(run.labels);
    result.centroids = std::move(run.centroids);
    result.categories = features.categories;
    result.inertia = run.inertia;
    result.iterations = run.iterations;
    result.inertia_history = std::move(run.inertia_history);
    return result;
}

namespace {

/// Row-wise conditional probabilities whose entropy matches log(perplexity),
/// found by bisection on the Gaussian precision.
std::vector<double> conditional_affinities(const std::vector<double>& d2, std::size_t n, double perplexity) {
    constexpr int kMaxSteps = 200;
    constexpr double kTolerance = 1e-5;
    const double target = std::log(perplexity);
    std::vector<double> p(n * n, 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        double beta = 1.0;
        double lo = -std::numeric_limits<double>::infinity();
        double hi = std::numeric_limits<double>::infinity();
        const double* row = &d2[i * n];
        double* out = &p[i * n];

        for (int step = 0; step < kMaxSteps; ++step) {
            // Shift by the smallest off-diagonal distance so exp() cannot
            // underflow the whole row.
            double min_d = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j) {
                if (j != i) min_d = std::min(min_d, row[j]);
            }
            double sum = 0.0;
            double weighted = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) {
                    out[j] = 0.0;
                    continue;
                }
                out[j] = std::exp(-(row[j] - min_d) * beta);
                sum += out[j];
                weighted += (row[j] - min_d) * out[j];
            }
            const double entropy = std::log(sum) + beta * weighted / sum;
            for (std::size_t j = 0; j < n; ++j) out[j] /= sum;

            const double diff = entropy - target;
            if (std::abs(diff) < kTolerance) break;
            if (diff > 0) {
                lo = beta;
                beta = std::isinf(hi) ? beta * 2.0 : (beta + hi) / 2.0;
            } else {
                hi = beta;
                beta = std::isinf(lo) ? beta / 2.0 : (beta + lo) / 2.0;
            }
        }
    }
    return p;
}

}  // namespace

std::vector<std::array<double, 2>> tsne(const std::vector<Point>& points, const ProjectionParams& params,
                                        std::uint64_t seed) {
    const std::size_t n = points.size();
    if (n < 2) throw InvalidParams("projection needs at least 2 points");
    if (!(params.perplexity > 0.0) || !(params.perplexity < static_cast<double>(n))) {
        throw InvalidParams("perplexity must lie in (0, " + std::to_string(n) + ")");
    }
    if (params.iterations == 0) throw InvalidParams("iterations must be positive");
    if (!(params.learning_rate > 0.0) || !std::isfinite(params.learning_rate)) {
        throw InvalidParams("learning rate must be positive");
    }

    constexpr double kExaggeration = 12.0;
    constexpr double kMinGain = 0.01;
    constexpr double kMinProbability = 1e-12;
    const std::size_t exaggeration_steps = std::min<std::size_t>(250, params.iterations / 4);

    std::vector<double> d2(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) d2[i * n + j] = d2[j * n + i] = squared_distance(points[i], points[j]);
    }

    auto cond = conditional_affinities(d2, n, params.perplexity);
    std::vector<double> p(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j) p[i * n + j] = std::max((cond[i * n + j] + cond[j * n + i]) / (2.0 * static_cast<double>(n)), kMinProbability);
        }
    }

    std::mt19937_64 rng(seed);
    std::vector<std::array<double, 2>> y(n);
    for (auto& yi : y) {
        yi[0] = 1e-4 * standard_normal(rng);
        yi[1] = 1e-4 * standard_normal(rng);
    }
    std::vector<std::array<double, 2>> velocity(n, {0.0, 0.0});
    std::vector<std::array<double, 2>> gains(n, {1.0, 1.0});
    std::vector<double> num(n * n, 0.0);
    std::vector<std::array<double, 2>> grad(n);

    for (std::size_t iter = 0; iter < params.iterations; ++iter) {
        const double exaggeration = iter < exaggeration_steps ? kExaggeration : 1.0;
        const double momentum = iter < 250 ? 0.5 : 0.8;

        double sum_num = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dx = y[i][0] - y[j][0];
                const double dy = y[i][1] - y[j][1];
                const double q = 1.0 / (1.0 + dx * dx + dy * dy);
                num[i * n + j] = num[j * n + i] = q;
                sum_num += 2.0 * q;
            }
        }

        for (std::size_t i = 0; i < n; ++i) {
            double gx = 0.0, gy = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                const double q = std::max(num[i * n + j] / sum_num, kMinProbability);
                const double mult = (exaggeration * p[i * n + j] - q) * num[i * n + j];
                gx += mult * (y[i][0] - y[j][0]);
                gy += mult * (y[i][1] - y[j][1]);
            }
            grad[i] = {4.0 * gx, 4.0 * gy};
        }

        std::array<double, 2> mean{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) {
            for (int d = 0; d < 2; ++d) {
                const bool same_sign = (grad[i][d] > 0.0) == (velocity[i][d] > 0.0);
                gains[i][d] = same_sign ? std::max(gains[i][d] * 0.8, kMinGain) : gains[i][d] + 0.2;
                velocity[i][d] = momentum * velocity[i][d] - params.learning_rate * gains[i][d] * grad[i][d];
                y[i][d] += velocity[i][d];
                mean[d] += y[i][d];
            }
        }
        for (auto& yi : y) {
            yi[0] -= mean[0] / static_cast<double>(n);
            yi[1] -= mean[1] / static_cast<double>(n);
        }
    }

    for (const auto& yi : y) {
        if (!std::isfinite(yi[0]) || !std::isfinite(yi[1])) throw std::runtime_error("projection diverged");
    }
    return y;
}

ProjectionResult project(const FeatureTable& features, const ProjectionParams& params, std::uint64_t seed) {
    ProjectionResult result;
    result.employee_ids = features.employee_ids;
    result.coordinates = tsne(features.points(), params, seed);
    result.seed = seed;
    result.params = params;
    return result;
}

}  // namespace metricsvis
