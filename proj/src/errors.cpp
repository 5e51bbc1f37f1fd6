#include "metricsvis/errors.hpp"

namespace metricsvis {

Error::Error(std::string kind, const std::string& message)
    : std::runtime_error(message), kind_(std::move(kind)) {}

SchemaError::SchemaError(const std::string& message) : Error("schema_error", message) {}

RowError::RowError(std::size_t row, const std::string& message)
    : Error("row_error", "row " + std::to_string(row) + ": " + message), row_(row) {}

DuplicateIdError::DuplicateIdError(const std::string& id)
    : Error("duplicate_id", "duplicate id '" + id + "'") {}

RangeError::RangeError(const std::string& message) : Error("range_error", message) {}

UnknownCategory::UnknownCategory(const std::string& category_id)
    : Error("unknown_category", "unknown category '" + category_id + "'") {}

UnknownEmployee::UnknownEmployee(const std::string& employee_id)
    : Error("unknown_employee", "unknown employee '" + employee_id + "'") {}

UnknownKey::UnknownKey(const std::string& key) : Error("unknown_key", "unknown key '" + key + "'") {}

DegenerateScale::DegenerateScale(const std::string& message) : Error("degenerate_scale", message) {}

CoverageError::CoverageError(const std::string& employee_id)
    : Error("coverage_error", "employee '" + employee_id + "' has no cluster label") {}

InvalidK::InvalidK(const std::string& message) : Error("invalid_k", message) {}

InvalidParams::InvalidParams(const std::string& message) : Error("invalid_params", message) {}

}  // namespace metricsvis
