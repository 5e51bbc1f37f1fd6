#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "metricsvis/analysis.hpp"
#include "metricsvis/errors.hpp"
#include "metricsvis/matrix.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace metricsvis;

namespace {

std::vector<Point> blobs(std::mt19937_64& rng, std::size_t per_blob, const std::vector<Point>& centers, double spread,
                         std::vector<int>* truth = nullptr) {
    std::normal_distribution<double> noise(0.0, spread);
    std::vector<Point> out;
    for (std::size_t c = 0; c < centers.size(); ++c) {
        for (std::size_t i = 0; i < per_blob; ++i) {
            Point p = centers[c];
            for (auto& v : p) v += noise(rng);
            out.push_back(p);
            if (truth) truth->push_back(static_cast<int>(c));
        }
    }
    return out;
}

FeatureTable table(const std::vector<std::string>& ids, const std::vector<Point>& points) {
    FeatureTable t;
    t.employee_ids = ids;
    for (std::size_t d = 0; d < points.front().size(); ++d) {
        t.categories.push_back("c" + std::to_string(d));
        std::vector<double> row;
        for (const auto& p : points) row.push_back(p[d]);
        t.normalized.push_back(row);
        t.raw.emplace_back(points.size(), 0);
    }
    return t;
}

}  // namespace

TEST_CASE("min_max_normalize") {
    CHECK(min_max_normalize({0, 5, 10}) == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(min_max_normalize({7}) == std::vector<double>{0.0});
    CHECK(min_max_normalize({3, 3, 3}) == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(min_max_normalize({}).empty());

    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(1 + rng() % 30);
        for (auto& x : v) x = static_cast<double>(rng() % 1000);
        const auto n = min_max_normalize(v);
        for (double x : n) CHECK((x >= 0.0 && x <= 1.0));
        CHECK(min_max_normalize(n) == n);
    }
}

TEST_CASE("build_features") {
    std::vector<ActivityRecord> records;
    for (int i = 0; i < 10; ++i) records.push_back(support::record("a" + std::to_string(i), "e2", "x"));
    for (int i = 0; i < 5; ++i) records.push_back(support::record("b" + std::to_string(i), "e1", "x"));
    records.push_back(support::record("c", "e1", "y"));
    const auto profile = set_included(support::profile({{"x", 10}, {"y", 20}, {"z", 30}}), "y", false);
    const auto m = build_matrix(records, support::roster({"e3", "e2", "e1"}), profile,
                                EvaluationContext::covering(records, profile.version()));
    const auto f = build_features(m);
    CHECK(f.categories == std::vector<std::string>{"x", "z"});
    CHECK(f.raw[0] == std::vector<long>{0, 10, 5});
    CHECK(f.normalized[0] == std::vector<double>{0.0, 1.0, 0.5});
    CHECK(f.normalized[1] == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(f.points().size() == 3);
}

TEST_CASE("kmeans_points") {
    SUBCASE("k = n gives zero inertia") {
        const std::vector<Point> pts = {{0, 0}, {1, 0}, {0, 3}, {5, 5}};
        const auto c = kmeans_points(pts, 4, 1);
        CHECK(c.inertia == doctest::Approx(0.0));
        std::vector<int> sorted = c.labels;
        std::sort(sorted.begin(), sorted.end());
        CHECK(sorted == std::vector<int>{0, 1, 2, 3});
    }

    SUBCASE("k = 1 centroid is the mean") {
        const std::vector<Point> pts = {{0, 0}, {2, 0}, {4, 6}};
        const auto c = kmeans_points(pts, 1, 1);
        CHECK(c.centroids[0][0] == doctest::Approx(2.0));
        CHECK(c.centroids[0][1] == doctest::Approx(2.0));
        CHECK(c.inertia == doctest::Approx(oracle::best_partition_inertia(pts, 1)));
    }

    SUBCASE("two well-separated blobs match the brute-force optimum") {
        std::mt19937_64 rng(4);
        std::vector<int> truth;
        const auto pts = blobs(rng, 4, {{0, 0}, {10, 10}}, 0.5, &truth);
        const auto c = kmeans_points(pts, 2, 7);
        CHECK(c.inertia == doctest::Approx(oracle::best_partition_inertia(pts, 2)).epsilon(1e-9));
        for (std::size_t i = 0; i < pts.size(); ++i) {
            for (std::size_t j = 0; j < pts.size(); ++j) CHECK((c.labels[i] == c.labels[j]) == (truth[i] == truth[j]));
        }
    }

    SUBCASE("invalid k") {
        const std::vector<Point> pts = {{0}, {1}};
        CHECK_THROWS_AS(kmeans_points(pts, 0, 1), InvalidK);
        CHECK_THROWS_AS(kmeans_points(pts, 3, 1), InvalidK);
    }

    SUBCASE("inertia history never increases; inertia agrees with the labels") {
        std::mt19937_64 rng(5);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Point> pts(10 + rng() % 40, Point(3));
            for (auto& p : pts) {
                for (auto& v : p) v = static_cast<double>(rng() % 1000) / 1000.0;
            }
            const auto c = kmeans_points(pts, 1 + rng() % 6, rng());
            for (std::size_t i = 1; i < c.inertia_history.size(); ++i) {
                CHECK(c.inertia_history[i] <= c.inertia_history[i - 1] + 1e-12);
            }
            CHECK(clustering_inertia(pts, c.labels, c.centroids) == doctest::Approx(c.inertia));
            // canonical labels: sizes non-increasing
            std::vector<std::size_t> sizes(c.centroids.size(), 0);
            for (int l : c.labels) ++sizes[static_cast<std::size_t>(l)];
            CHECK(std::is_sorted(sizes.rbegin(), sizes.rend()));
        }
    }

    SUBCASE("never beats the exhaustive optimum on small instances") {
        std::mt19937_64 rng(55);
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<Point> pts(4 + rng() % 4, Point(2));
            for (auto& p : pts) {
                for (auto& v : p) v = static_cast<double>(rng() % 100);
            }
            const std::size_t k = 1 + rng() % 3;
            const double best = oracle::best_partition_inertia(pts, static_cast<int>(k));
            CHECK(kmeans_points(pts, k, rng()).inertia >= best - 1e-9 * std::max(1.0, best));
        }
    }
}

TEST_CASE("kmeans over a feature table") {
    std::mt19937_64 rng(8);
    const auto pts = blobs(rng, 6, {{0, 0, 0}, {1, 1, 0}, {0, 1, 1}}, 0.05);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < pts.size(); ++i) ids.push_back("e" + std::to_string(100 + i));

    const auto a = kmeans(table(ids, pts), 3, 42);

    SUBCASE("roster order does not matter") {
        std::vector<std::size_t> perm(ids.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::string> ids2;
        std::vector<Point> pts2;
        for (auto i : perm) {
            ids2.push_back(ids[i]);
            pts2.push_back(pts[i]);
        }
        const auto b = kmeans(table(ids2, pts2), 3, 42);
        CHECK(b.employee_ids == a.employee_ids);
        CHECK(b.labels == a.labels);
        CHECK(b.inertia == a.inertia);
    }

    SUBCASE("cluster sizes and lookups") {
        CHECK(a.cluster_sizes() == std::vector<std::size_t>{6, 6, 6});
        CHECK(a.label_of("e100") == a.label_of("e101"));
        CHECK_THROWS_AS(a.label_of("nobody"), UnknownEmployee);
        CHECK(a.categories.size() == 3);
    }

    SUBCASE("same seed, same result") {
        const auto again = kmeans(table(ids, pts), 3, 42);
        CHECK(again.labels == a.labels);
        CHECK(again.centroids == a.centroids);
    }
}

TEST_CASE("tsne") {
    SUBCASE("two points stay apart") {
        const auto y = tsne({{0, 0}, {1, 1}}, {0.5, 200, 100}, 1);
        REQUIRE(y.size() == 2);
        CHECK(std::hypot(y[0][0] - y[1][0], y[0][1] - y[1][1]) > 0.0);
        for (const auto& p : y) CHECK((std::isfinite(p[0]) && std::isfinite(p[1])));
    }

    SUBCASE("three blobs of five stay neighbours") {
        std::mt19937_64 rng(3);
        std::vector<int> truth;
        const auto pts = blobs(rng, 5, {{0, 0, 0, 0}, {5, 5, 0, 0}, {0, 5, 5, 5}}, 0.2, &truth);
        const auto y = tsne(pts, {4, 1000, 100}, 2017);
        CHECK(oracle::knn_comembership(y, truth, 3) >= 0.8);
        double cx = 0, cy = 0;
        for (const auto& p : y) {
            cx += p[0];
            cy += p[1];
        }
        CHECK(std::abs(cx) < 1e-6);
        CHECK(std::abs(cy) < 1e-6);
    }

    SUBCASE("bitwise determinism for a fixed seed") {
        std::mt19937_64 rng(9);
        const auto pts = blobs(rng, 6, {{0, 0}, {3, 3}}, 0.5);
        const auto a = tsne(pts, {3, 300, 100}, 99);
        const auto b = tsne(pts, {3, 300, 100}, 99);
        REQUIRE(a.size() == b.size());
        CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(a[0])) == 0);
    }

    SUBCASE("duplicate rows land next to each other") {
        std::mt19937_64 rng(10);
        auto pts = blobs(rng, 5, {{0, 0, 0}, {4, 0, 4}}, 1.0);
        pts.push_back(pts[2]);
        const auto y = tsne(pts, {3, 500, 100}, 5);
        const auto nn = oracle::nearest_neighbours(y, pts.size() - 1, 1);
        CHECK(nn[0] == 2);
    }

    SUBCASE("invalid parameters") {
        const std::vector<Point> pts = {{0}, {1}, {2}};
        CHECK_THROWS_AS(tsne({{0}}, {0.5, 10, 100}, 1), InvalidParams);
        CHECK_THROWS_AS(tsne(pts, {3, 10, 100}, 1), InvalidParams);
        CHECK_THROWS_AS(tsne(pts, {0, 10, 100}, 1), InvalidParams);
        CHECK_THROWS_AS(tsne(pts, {1, 0, 100}, 1), InvalidParams);
        CHECK_THROWS_AS(tsne(pts, {1, 10, 0}, 1), InvalidParams);
    }
}
