#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace metricsvis::csv {

/// RFC 4180 style reader: comma separated, double-quote quoting with `""`
/// escapes, CRLF or LF line endings. A leading UTF-8 BOM is skipped.
class Reader {
public:
    explicit Reader(std::istream& in);

    /// Next record, or nullopt at end of input. Blank lines are skipped.
    std::optional<std::vector<std::string>> next();

private:
    std::istream& in_;
    bool first_ = true;
};

/// Quotes a field when it contains a delimiter, quote, or line break.
std::string escape(const std::string& field);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace metricsvis::csv
