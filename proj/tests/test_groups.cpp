#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>

#include "metricsvis/analysis.hpp"
#include "metricsvis/errors.hpp"
#include "metricsvis/groups.hpp"
#include "metricsvis/matrix.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace metricsvis;
using support::record;

namespace {

void add(std::vector<ActivityRecord>& records, const std::string& employee, const std::string& category, long n) {
    for (long i = 0; i < n; ++i) {
        records.push_back(record("r" + std::to_string(records.size()), employee, category));
    }
}

std::vector<Employee> shifted(const std::vector<std::pair<std::string, std::string>>& pairs) {
    std::vector<Employee> out;
    for (const auto& [id, shift] : pairs) out.push_back({id, id, shift, ""});
    return out;
}

GroupSummary group_of(std::string id, const std::map<std::string, long>& counts) {
    std::vector<ActivityRecord> records;
    for (const auto& [c, n] : counts) add(records, "m", c, n);
    auto g = group_by_assignment(records, shifted({{"m", id}}), GroupKey::shift).front();
    return g;
}

ClusterResult labelled(const std::vector<std::string>& ids, const std::vector<int>& labels, std::size_t k) {
    ClusterResult c;
    c.k = k;
    c.employee_ids = ids;
    c.labels = labels;
    return c;
}

}  // namespace

TEST_CASE("group_by_assignment") {
    SUBCASE("one shift gives one group holding everyone") {
        const auto employees = shifted({{"e1", "AD"}, {"e2", "AD"}, {"e3", "AD"}});
        std::vector<ActivityRecord> records;
        add(records, "e1", "a", 2);
        add(records, "e3", "b", 1);
        const auto groups = group_by_assignment(records, employees, GroupKey::shift);
        REQUIRE(groups.size() == 1);
        CHECK(groups[0].group_id == "AD");
        CHECK(groups[0].member_ids == std::vector<std::string>{"e1", "e2", "e3"});
        CHECK(groups[0].total_count() == 3);
    }

    SUBCASE("four shifts plus unassigned give five groups, unassigned last") {
        const auto employees = shifted({{"e1", "BN"}, {"e2", ""}, {"e3", "AD"}, {"e4", "BD"}, {"e5", "AN"},
                                        {"e6", "unassigned"}});
        const auto groups = group_by_assignment({}, employees, GroupKey::shift);
        std::vector<std::string> ids;
        for (const auto& g : groups) ids.push_back(g.group_id);
        CHECK(ids == std::vector<std::string>{"AD", "AN", "BD", "BN", "unassigned"});
        CHECK(groups.back().member_ids == std::vector<std::string>{"e2", "e6"});
    }

    SUBCASE("district key") {
        std::vector<Employee> employees = {{"e1", "", "AD", "D2"}, {"e2", "", "AD", "D1"}};
        const auto groups = group_by_assignment({}, employees, GroupKey::district);
        REQUIRE(groups.size() == 2);
        CHECK(groups[0].group_id == "D1");
    }

    SUBCASE("record off the roster") {
        CHECK_THROWS_AS(group_by_assignment({record("r", "ghost", "a")}, shifted({{"e1", "AD"}}), GroupKey::shift),
                        UnknownEmployee);
    }

    SUBCASE("group totals conserve the matrix totals") {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 20; ++trial) {
            const auto data = support::random_data(rng, rng() % 300, 1 + rng() % 12, 1 + rng() % 6);
            std::vector<std::pair<std::string, double>> weights;
            for (const auto& c : data.categories) weights.emplace_back(c, static_cast<double>(rng() % 101));
            const auto profile = support::profile(weights);
            const auto m = build_matrix(data.records, data.employees, profile,
                                        EvaluationContext::covering(data.records, profile.version()));
            for (auto key : {GroupKey::shift, GroupKey::district}) {
                const auto groups = group_by_assignment(data.records, data.employees, key);
                double weighted = 0.0;
                long counted = 0;
                std::size_t members = 0;
                for (const auto& g : groups) {
                    weighted += weighted_total(g, m);
                    counted += g.total_count();
                    members += g.member_ids.size();
                }
                CHECK(members == data.employees.size());
                CHECK(counted == static_cast<long>(data.records.size()));
                CHECK(std::abs(weighted - m.grand_total()) <= 1e-9 * std::max(1.0, m.grand_total()));
            }
        }
    }
}

TEST_CASE("group_by_clusters") {
    std::vector<ActivityRecord> records;
    add(records, "e1", "a", 3);
    add(records, "e2", "b", 4);
    const auto employees = support::roster({"e2", "e1"});

    SUBCASE("k = 1 gives one group with everyone") {
        const auto groups = group_by_clusters(labelled({"e1", "e2"}, {0, 0}, 1), records, employees);
        REQUIRE(groups.size() == 1);
        CHECK(groups[0].group_id == "cluster_0");
        CHECK(groups[0].member_ids.size() == 2);
        CHECK(groups[0].total_count() == 7);
    }

    SUBCASE("roster employee without a label") {
        CHECK_THROWS_AS(group_by_clusters(labelled({"e1"}, {0}, 1), records, employees), CoverageError);
    }

    SUBCASE("member counts follow the labels") {
        const auto groups = group_by_clusters(labelled({"e1", "e2"}, {1, 0}, 2), records, employees);
        REQUIRE(groups.size() == 2);
        CHECK(groups[0].member_ids == std::vector<std::string>{"e2"});
        CHECK(groups[1].category_counts.at("a") == 3);
    }

    SUBCASE("three largest clusters of 383 cover 81.98 percent") {
        std::vector<std::string> ids;
        std::vector<int> labels;
        const std::vector<int> sizes = {133, 97, 84, 30, 25, 14};
        for (std::size_t c = 0; c < sizes.size(); ++c) {
            for (int i = 0; i < sizes[c]; ++i) {
                ids.push_back("x" + std::to_string(10000 + ids.size()));
                labels.push_back(static_cast<int>(c));
            }
        }
        const auto clusters = labelled(ids, labels, sizes.size());
        const auto got = clusters.cluster_sizes();
        REQUIRE(got.size() == 6);
        const auto top3 = got[0] + got[1] + got[2];
        const auto all = std::accumulate(got.begin(), got.end(), std::size_t{0});
        CHECK(all == 383);
        CHECK(100.0 * static_cast<double>(top3) / static_cast<double>(all) == doctest::Approx(81.98).epsilon(1e-4));
    }
}

TEST_CASE("top_categories") {
    SUBCASE("ties by id") {
        const auto g = group_of("AD", {{"b", 4}, {"a", 4}, {"c", 9}});
        CHECK(top_categories(g, 2) == std::vector<std::string>{"c", "a"});
        CHECK(top_categories(g, 10).size() == 3);
    }

    SUBCASE("matches a selection-sort oracle") {
        std::mt19937_64 rng(6);
        for (int trial = 0; trial < 40; ++trial) {
            std::map<std::string, long> counts;
            for (int c = 0, n = 1 + static_cast<int>(rng() % 12); c < n; ++c) {
                counts["k" + std::to_string(rng() % 30)] = 1 + static_cast<long>(rng() % 5);
            }
            const auto g = group_of("AD", counts);
            std::vector<std::string> ids;
            std::vector<double> values;
            for (const auto& [id, n] : counts) {
                ids.push_back(id);
                values.push_back(static_cast<double>(n));
            }
            const auto expected = oracle::selection_order(ids, values);
            const std::size_t k = 1 + rng() % 8;
            CHECK(top_categories(g, k) ==
                  std::vector<std::string>(expected.begin(), expected.begin() + std::min(k, expected.size())));
        }
    }
}

TEST_CASE("build_dandelion") {
    SUBCASE("log axis lengths") {
        const auto spec = build_dandelion({group_of("AD", {{"a", 100}, {"b", 10}, {"c", 1}})}, 5);
        CHECK(spec.axes == std::vector<std::string>{"a", "b", "c"});
        REQUIRE(spec.glyphs.size() == 1);
        CHECK(spec.glyphs[0].axis_lengths[0] == doctest::Approx(std::log(101.0)));
        CHECK(spec.glyphs[0].axis_lengths[1] == doctest::Approx(std::log(11.0)));
        CHECK(spec.glyphs[0].axis_lengths[2] == doctest::Approx(std::log(2.0)));
    }

    SUBCASE("disjoint top-5 sets give ten axes and zero lengths off each group's set") {
        std::map<std::string, long> first, second;
        for (int i = 0; i < 5; ++i) {
            first["p" + std::to_string(i)] = 10 + i;
            second["q" + std::to_string(i)] = 20 + i;
        }
        const auto spec = build_dandelion({group_of("AD", first), group_of("BN", second)}, 5);
        CHECK(spec.axes.size() == 10);
        CHECK_FALSE(spec.over_soft_cap);
        for (std::size_t a = 0; a < spec.axes.size(); ++a) {
            const bool from_first = spec.axes[a][0] == 'p';
            CHECK((spec.glyphs[0].axis_lengths[a] == 0.0) != from_first);
            CHECK((spec.glyphs[1].axis_lengths[a] == 0.0) == from_first);
        }
    }

    SUBCASE("linear transform on a zero count") {
        std::vector<ActivityRecord> records;
        add(records, "e2", "y", 5);
        const auto groups = group_by_assignment(records, shifted({{"e1", "AD"}, {"e2", "BN"}}), GroupKey::shift);
        const auto spec = build_dandelion(groups, 5, AxisTransform::linear);
        REQUIRE(spec.axes == std::vector<std::string>{"y"});
        CHECK(spec.glyphs[0].axis_lengths[0] == 0.0);
        CHECK(spec.glyphs[1].axis_lengths[0] == 5.0);
    }

    SUBCASE("rotation offset and angles") {
        const auto spec = build_dandelion({group_of("AD", {{"a", 3}, {"b", 2}, {"c", 1}, {"d", 1}})}, 5);
        CHECK(spec.rotation_offset == doctest::Approx(std::numbers::pi / 8));
        REQUIRE(spec.axis_angles.size() == 4);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(spec.axis_angles[i] == doctest::Approx(std::numbers::pi / 8 + 2 * std::numbers::pi * i / 4.0));
        }
    }

    SUBCASE("axes stay ordered by combined count when k changes") {
        std::mt19937_64 rng(12);
        std::vector<GroupSummary> groups;
        for (int g = 0; g < 3; ++g) {
            std::map<std::string, long> counts;
            for (int c = 0; c < 10; ++c) counts["k" + std::to_string(c)] = static_cast<long>(rng() % 40);
            groups.push_back(group_of("G" + std::to_string(g), counts));
        }
        std::map<std::string, long> combined;
        for (const auto& g : groups) {
            for (const auto& [c, n] : g.category_counts) combined[c] += n;
        }
        for (std::size_t k = 1; k <= 6; ++k) {
            const auto spec = build_dandelion(groups, k);
            for (std::size_t a = 1; a < spec.axes.size(); ++a) {
                const auto prev = combined[spec.axes[a - 1]];
                const auto cur = combined[spec.axes[a]];
                CHECK((prev > cur || (prev == cur && spec.axes[a - 1] < spec.axes[a])));
            }
            CHECK(spec.over_soft_cap == (spec.axes.size() > kGlyphAxisSoftCap));
        }
    }

    SUBCASE("errors") {
        CHECK_THROWS_AS(build_dandelion({}, 5), InvalidParams);
        CHECK_THROWS_AS(build_dandelion({group_of("AD", {{"a", 1}})}, 0), InvalidParams);
    }
}

TEST_CASE("build_stacked_radar") {
    SUBCASE("22 of 70 is 31.43 percent") {
        std::vector<ActivityRecord> records;
        add(records, "e1", "drug_abuse", 22);
        add(records, "e2", "drug_abuse", 48);
        const auto group =
            group_by_assignment(records, shifted({{"e1", "AD"}, {"e2", "AD"}}), GroupKey::shift).front();
        const auto spec = build_stacked_radar(group, count_by_member(records), {"drug_abuse"});
        CHECK(spec.axis_totals == std::vector<long>{70});
        CHECK(spec.member_order == std::vector<std::string>{"e2", "e1"});
        CHECK(spec.ribbons[1].fractions[0] == doctest::Approx(22.0 / 70.0));
        CHECK(100.0 * spec.ribbons[1].fractions[0] == doctest::Approx(31.42857).epsilon(1e-6));
        CHECK(spec.inner_radius_fraction == kDefaultInnerRadiusFraction);
    }

    SUBCASE("single member owns every nonzero axis") {
        std::vector<ActivityRecord> records;
        add(records, "e1", "a", 3);
        add(records, "e1", "b", 1);
        const auto group = group_by_assignment(records, shifted({{"e1", "AD"}}), GroupKey::shift).front();
        const auto spec = build_stacked_radar(group, count_by_member(records), {"a", "b", "zero"});
        CHECK(spec.ribbons[0].fractions == std::vector<double>{1.0, 1.0, 0.0});
    }

    SUBCASE("fractions re-sum to one on random groups") {
        std::mt19937_64 rng(31);
        for (int trial = 0; trial < 30; ++trial) {
            const auto data = support::random_data(rng, 1 + rng() % 200, 1 + rng() % 10, 1 + rng() % 6);
            const auto members = count_by_member(data.records);
            for (const auto& g : group_by_assignment(data.records, data.employees, GroupKey::shift)) {
                const auto spec = build_stacked_radar(g, members, data.categories);
                for (std::size_t a = 0; a < spec.axes.size(); ++a) {
                    double sum = 0.0;
                    long count = 0;
                    for (const auto& r : spec.ribbons) {
                        sum += r.fractions[a];
                        count += r.counts[a];
                    }
                    CHECK(count == spec.axis_totals[a]);
                    if (spec.axis_totals[a] > 0) CHECK(std::abs(sum - 1.0) <= 1e-9);
                    else CHECK(sum == 0.0);
                }
            }
        }
    }

    SUBCASE("inner radius must be a proper fraction") {
        const auto g = group_of("AD", {{"a", 1}});
        CHECK_THROWS_AS(build_stacked_radar(g, {}, {"a"}, AxisTransform::log, 0.0), InvalidParams);
        CHECK_THROWS_AS(build_stacked_radar(g, {}, {"a"}, AxisTransform::log, 1.0), InvalidParams);
    }
}
