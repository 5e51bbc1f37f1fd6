#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace metricsvis {

/// Base of every error raised by the engine. `kind()` is a stable
/// machine-readable tag used by the HTTP layer.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& message);
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& message);
};

/// A data row could not be decoded. `row()` is 1-based and counts data rows
/// only (the header is row 0).
class RowError : public Error {
public:
    RowError(std::size_t row, const std::string& message);
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

class DuplicateIdError : public Error {
public:
    explicit DuplicateIdError(const std::string& id);
};

class RangeError : public Error {
public:
    explicit RangeError(const std::string& message);
};

class UnknownCategory : public Error {
public:
    explicit UnknownCategory(const std::string& category_id);
};

class UnknownEmployee : public Error {
public:
    explicit UnknownEmployee(const std::string& employee_id);
};

class UnknownKey : public Error {
public:
    explicit UnknownKey(const std::string& key);
};

class DegenerateScale : public Error {
public:
    explicit DegenerateScale(const std::string& message);
};

class CoverageError : public Error {
public:
    explicit CoverageError(const std::string& employee_id);
};

class InvalidK : public Error {
public:
    explicit InvalidK(const std::string& message);
};

class InvalidParams : public Error {
public:
    explicit InvalidParams(const std::string& message);
};

}  // namespace metricsvis
