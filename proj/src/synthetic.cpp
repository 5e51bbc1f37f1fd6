#include "metricsvis/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "metricsvis/random.hpp"

namespace metricsvis {

namespace {

struct CategorySeed {
    std::string_view id;
    int severity;  ///< centre of the synthetic rating distribution
};

constexpr std::array<CategorySeed, 30> kCategories = {{
    {"calls_for_service", 30},    {"theft", 48},           {"drug_abuse", 64},         {"traffic_accident", 40},
    {"disorderly_conduct", 35},   {"vandalism", 38},       {"assault", 78},            {"owi", 70},
    {"burglary", 66},             {"shoplifting", 32},     {"domestic_dispute", 72},   {"fraud", 52},
    {"trespass", 28},             {"harassment", 50},      {"noise_complaint", 15},    {"public_intoxication", 30},
    {"stolen_vehicle", 58},       {"weapons_violation", 80}, {"liquor_law_violation", 25}, {"identity_theft", 55},
    {"missing_person", 62},       {"robbery", 82},         {"forgery", 45},            {"animal_complaint", 12},
    {"runaway_juvenile", 40},     {"curfew_violation", 18}, {"sex_offense", 90},       {"arson", 85},
    {"kidnapping", 92},           {"homicide", 98},
}};

constexpr std::array<std::string_view, 4> kShifts = {"AD", "AN", "BD", "BN"};

std::size_t draw(std::mt19937_64& rng, const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    const double target = rnd::uniform01(rng) * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        acc += weights[i];
        if (acc > target) return i;
    }
    return weights.size() - 1;
}

}  // namespace

Dataset generate_synthetic(const SyntheticOptions& options) {
    std::mt19937_64 rng(options.seed);
    const std::size_t nc = kCategories.size();

    // Zipf-like base frequencies in table order; calls for service dominate.
    std::vector<double> base(nc);
    for (std::size_t c = 0; c < nc; ++c) base[c] = 1.0 / std::pow(static_cast<double>(c + 1), 1.1);

    std::vector<Employee> employees;
    std::vector<double> workload;
    std::vector<std::vector<double>> preference;
    for (std::size_t i = 0; i < options.employees; ++i) {
        char id[16], label[24];
        std::snprintf(id, sizeof(id), "e%03zu", i + 1);
        std::snprintf(label, sizeof(label), "Officer %zu", 1400 + i + 1);
        Employee e{id, label, "", "D" + std::to_string(1 + i % 5)};
        // Every fifteenth officer floats between shifts.
        if (i % 15 != 14) e.shift = std::string(kShifts[rnd::index(rng, kShifts.size())]);
        employees.push_back(std::move(e));

        workload.push_back(std::exp(0.6 * rnd::standard_normal(rng)));

        // A handful of specialties per officer; a few shared profiles give
        // the feature space cluster structure.
        auto pref = base;
        const std::size_t profile = i % 6;
        for (std::size_t s = 0; s < 3; ++s) pref[1 + (profile * 4 + s * 2) % (nc - 1)] *= 6.0;
        pref[1 + rnd::index(rng, nc - 1)] *= 3.0;
        preference.push_back(std::move(pref));
    }

    const auto start = std::chrono::sys_days{std::chrono::year{2017} / 1 / 1};
    const auto span = std::chrono::duration_cast<std::chrono::seconds>(std::chrono::days{365}).count();

    std::vector<ActivityRecord> records;
    records.reserve(options.records);
    for (std::size_t r = 0; r < options.records; ++r) {
        const auto e = draw(rng, workload);
        const auto c = draw(rng, preference[e]);
        ActivityRecord rec;
        char id[16];
        std::snprintf(id, sizeof(id), "r%05zu", r + 1);
        rec.record_id = id;
        rec.employee_id = employees[e].employee_id;
        rec.timestamp = Timestamp{start} + std::chrono::seconds{static_cast<long>(rnd::uniform01(rng) * static_cast<double>(span))};
        rec.category_id = std::string(kCategories[c].id);
        if (c == 0) {
            rec.record_type = RecordType::call_for_service;
            rec.behavior = rnd::uniform01(rng) < 0.9 ? Behavior::dispatched : Behavior::self_initiated;
        } else {
            rec.record_type = RecordType::incident;
            rec.behavior = rnd::uniform01(rng) < 0.45 ? Behavior::self_initiated : Behavior::dispatched;
        }
        rec.shift = employees[e].shift;
        rec.district = employees[e].district;
        records.push_back(std::move(rec));
    }
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) {
        if (a.timestamp != b.timestamp) return a.timestamp < b.timestamp;
        return a.record_id < b.record_id;
    });

    WeightEntries entries;
    for (const auto& cat : kCategories) {
        WeightEntry entry;
        for (std::size_t k = 0; k < options.ratings_per_category; ++k) {
            const double v = cat.severity + 12.0 * rnd::standard_normal(rng);
            entry.ratings.push_back(static_cast<int>(std::clamp(std::lround(v), 0L, 100L)));
        }
        entries.emplace(std::string(cat.id), std::move(entry));
    }

    return {std::move(records), std::move(employees), WeightProfile(ProfileSource::officers, std::move(entries))};
}

}  // namespace metricsvis
