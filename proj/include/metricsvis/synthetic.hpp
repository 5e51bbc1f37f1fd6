#pragma once

#include <cstdint>
#include <vector>

#include "metricsvis/ingest.hpp"
#include "metricsvis/metrics.hpp"

namespace metricsvis {

struct Dataset {
    std::vector<ActivityRecord> records;
    std::vector<Employee> employees;
    WeightProfile profile;
};

struct SyntheticOptions {
    std::uint64_t seed = 2017;
    std::size_t employees = 60;
    std::size_t records = 5000;
    std::size_t ratings_per_category = 25;
};

/// Reproducible stand-in for a year of patrol activity: 29 offense
/// categories plus calls for service, four shifts (AD/AN/BD/BN) with a few
/// unassigned officers, skewed workloads, and per-officer specialties so the
/// data has cluster structure. The profile carries officer-style ratings.
Dataset generate_synthetic(const SyntheticOptions& options = {});

}  // namespace metricsvis
