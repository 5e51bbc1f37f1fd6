#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace metricsvis {

using Timestamp = std::chrono::sys_seconds;

/// Parses `YYYY-MM-DDTHH:MM:SSZ` (a `+00:00` suffix is also accepted).
/// Returns nullopt on any malformed or out-of-range field.
std::optional<Timestamp> parse_timestamp(std::string_view text);

/// Formats as `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_timestamp(Timestamp ts);

}  // namespace metricsvis
