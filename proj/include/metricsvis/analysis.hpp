#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace metricsvis {

struct ScoreMatrix;

using Point = std::vector<double>;

/// Per-employee category counts and their per-category min-max normalization.
/// Both matrices are indexed `[category][employee]`.
struct FeatureTable {
    std::vector<std::string> employee_ids;
    std::vector<std::string> categories;
    std::vector<std::vector<long>> raw;
    std::vector<std::vector<double>> normalized;

    /// Normalized rows transposed to one point per employee.
    std::vector<Point> points() const;
};

/// Maps values onto [0, 1] by (v - min) / (max - min); a constant column
/// becomes all zeros.
std::vector<double> min_max_normalize(const std::vector<double>& values);

/// Features are raw counts (not weighted scores) of the matrix's included
/// categories.
FeatureTable build_features(const ScoreMatrix& matrix);

inline constexpr std::size_t kDefaultClusters = 6;

struct KMeansOptions {
    std::size_t restarts = 10;
    std::size_t max_iterations = 300;
    double tolerance = 1e-6;  ///< stop once no centroid moves farther than this
};

/// Clustering of an anonymous point set. Labels are canonical: label 0 is
/// the largest cluster, ties broken by the smallest member index.
struct PointClustering {
    std::vector<int> labels;
    std::vector<Point> centroids;
    double inertia = 0.0;
    std::size_t iterations = 0;
    std::vector<double> inertia_history;  ///< per Lloyd iteration of the winning restart
};

/// Seeded k-means++ initialization followed by Lloyd iterations; keeps the
/// restart with the lowest inertia. Throws InvalidK unless 1 <= k <= n.
PointClustering kmeans_points(const std::vector<Point>& points, std::size_t k, std::uint64_t seed,
                              const KMeansOptions& options = {});

/// Sum of squared distances from each point to its labelled centroid.
double clustering_inertia(const std::vector<Point>& points, const std::vector<int>& labels,
                          const std::vector<Point>& centroids);

struct ClusterResult {
    std::size_t k = 0;
    std::uint64_t seed = 0;
    KMeansOptions options;
    std::vector<std::string> employee_ids;  ///< ascending id
    std::vector<int> labels;                ///< aligned with employee_ids
    std::vector<Point> centroids;
    std::vector<std::string> categories;    ///< centroid coordinate order
    double inertia = 0.0;
    std::size_t iterations = 0;
    std::vector<double> inertia_history;

    /// Throws UnknownEmployee.
    int label_of(std::string_view employee_id) const;
    std::vector<std::size_t> cluster_sizes() const;
};

/// Clusters employees on their normalized features. Points are ordered by
/// employee id before seeding, so the result does not depend on roster order.
ClusterResult kmeans(const FeatureTable& features, std::size_t k, std::uint64_t seed,
                     const KMeansOptions& options = {});

struct ProjectionParams {
    double perplexity = 10.0;
    std::size_t iterations = 1000;
    double learning_rate = 100.0;
};

struct ProjectionResult {
    std::vector<std::string> employee_ids;
    std::vector<std::array<double, 2>> coordinates;  ///< aligned with employee_ids
    std::uint64_t seed = 0;
    ProjectionParams params;
};

/// Exact t-SNE to two dimensions. Throws InvalidParams when n < 2,
/// perplexity is not in (0, n), or iterations / learning rate are not positive.
std::vector<std::array<double, 2>> tsne(const std::vector<Point>& points, const ProjectionParams& params,
                                        std::uint64_t seed);

ProjectionResult project(const FeatureTable& features, const ProjectionParams& params, std::uint64_t seed);

}  // namespace metricsvis
