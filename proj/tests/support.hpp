#pragma once

#include <random>
#include <string>
#include <vector>

#include "metricsvis/ingest.hpp"
#include "metricsvis/metrics.hpp"

namespace support {

using namespace metricsvis;

inline Timestamp ts(const std::string& text) {
    return *parse_timestamp(text);
}

inline ActivityRecord record(std::string id, std::string employee, std::string category,
                             Behavior behavior = Behavior::self_initiated, RecordType type = RecordType::incident,
                             const std::string& when = "2017-07-02T10:00:00Z") {
    return {std::move(id), std::move(employee), ts(when), std::move(category), behavior, type, "", ""};
}

inline std::vector<Employee> roster(const std::vector<std::string>& ids) {
    std::vector<Employee> out;
    for (const auto& id : ids) out.push_back({id, "Officer " + id, "", ""});
    return out;
}

inline WeightProfile profile(const std::vector<std::pair<std::string, double>>& weights) {
    WeightEntries entries;
    for (const auto& [id, w] : weights) entries.emplace(id, WeightEntry{{}, w, true, true});
    return WeightProfile(ProfileSource::custom, std::move(entries));
}

/// Random dataset over `ne` employees and `nc` categories with mixed
/// behaviors, record types, and timestamps across 2017.
struct RandomData {
    std::vector<ActivityRecord> records;
    std::vector<Employee> employees;
    std::vector<std::string> categories;
};

inline RandomData random_data(std::mt19937_64& rng, std::size_t n_records, std::size_t ne, std::size_t nc) {
    RandomData d;
    for (std::size_t e = 0; e < ne; ++e) {
        d.employees.push_back({"e" + std::to_string(100 + e), "", e % 3 == 0 ? "AD" : (e % 3 == 1 ? "BN" : ""),
                               "D" + std::to_string(e % 2)});
    }
    d.categories.emplace_back(kCallsForService);
    for (std::size_t c = 1; c < nc; ++c) d.categories.push_back("cat" + std::to_string(10 + c));
    const auto start = ts("2017-01-01T00:00:00Z");
    for (std::size_t i = 0; i < n_records; ++i) {
        ActivityRecord r;
        r.record_id = "r" + std::to_string(i);
        r.employee_id = d.employees[rng() % ne].employee_id;
        const auto c = rng() % nc;
        r.category_id = d.categories[c];
        r.record_type = c == 0 ? RecordType::call_for_service : RecordType::incident;
        r.behavior = rng() % 2 ? Behavior::self_initiated : Behavior::dispatched;
        r.timestamp = start + std::chrono::seconds{static_cast<long>(rng() % (365L * 86400L))};
        d.records.push_back(std::move(r));
    }
    return d;
}

}  // namespace support
