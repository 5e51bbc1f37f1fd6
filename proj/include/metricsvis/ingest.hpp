#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "metricsvis/timeutil.hpp"

namespace metricsvis {

class WeightProfile;

/// Reserved category carried by every call-for-service event.
inline constexpr std::string_view kCallsForService = "calls_for_service";

enum class Behavior { self_initiated, dispatched };
enum class RecordType { incident, call_for_service };

std::string_view to_string(Behavior b);
std::string_view to_string(RecordType t);
std::optional<Behavior> parse_behavior(std::string_view text);
std::optional<RecordType> parse_record_type(std::string_view text);

/// One event or incident credited to one employee. Events handled by several
/// officers appear once per responding officer.
struct ActivityRecord {
    std::string record_id;
    std::string employee_id;
    Timestamp timestamp;
    std::string category_id;
    Behavior behavior = Behavior::self_initiated;
    RecordType record_type = RecordType::incident;
    std::string shift;
    std::string district;

    bool operator==(const ActivityRecord&) const = default;
};

struct Employee {
    std::string employee_id;
    std::string label;
    std::string shift;
    std::string district;

    bool operator==(const Employee&) const = default;
};

/// Half-open interval [start, end).
struct TimeRange {
    Timestamp start;
    Timestamp end;

    bool contains(Timestamp t) const { return start <= t && t < end; }
    bool operator==(const TimeRange&) const = default;
};

/// Which records take part in an evaluation.
class EvaluationContext {
public:
    /// Throws InvalidParams when start >= end or either set is empty.
    EvaluationContext(TimeRange range, std::set<Behavior> behaviors, std::set<RecordType> record_types,
                      long weight_profile_version = 1);

    /// All behaviors and record types, spanning every record in `records`.
    /// An empty record list yields the range [epoch, epoch + 1s).
    static EvaluationContext covering(const std::vector<ActivityRecord>& records, long weight_profile_version = 1);

    const TimeRange& time_range() const { return range_; }
    const std::set<Behavior>& behaviors() const { return behaviors_; }
    const std::set<RecordType>& record_types() const { return record_types_; }
    long weight_profile_version() const { return profile_version_; }

    EvaluationContext with_behaviors(std::set<Behavior> behaviors) const;
    EvaluationContext with_profile_version(long version) const;

    bool admits(const ActivityRecord& r) const;

    bool operator==(const EvaluationContext&) const = default;

private:
    TimeRange range_;
    std::set<Behavior> behaviors_;
    std::set<RecordType> record_types_;
    long profile_version_;
};

inline constexpr std::string_view kActivityHeader =
    "record_id,employee_id,timestamp,category_id,behavior,record_type,shift,district";
inline constexpr std::string_view kEmployeeHeader = "employee_id,label,shift,district";

/// Columns may appear in any order but the set must match the activity
/// header exactly. Throws SchemaError, RowError, DuplicateIdError.
std::vector<ActivityRecord> parse_activity_csv(std::istream& in);
std::vector<Employee> parse_employee_csv(std::istream& in);

void write_activity_csv(std::ostream& out, const std::vector<ActivityRecord>& records);
void write_employee_csv(std::ostream& out, const std::vector<Employee>& employees);

std::vector<ActivityRecord> filter_records(const std::vector<ActivityRecord>& records, const EvaluationContext& ctx);

struct Finding {
    enum class Kind {
        dangling_employee,
        duplicate_record,
        duplicate_employee,
        category_mismatch,
        unknown_category,
    };
    Kind kind;
    std::string id;  ///< record_id, or employee/category id for roster and profile findings
    std::string detail;

    bool operator==(const Finding&) const = default;
};

std::string_view to_string(Finding::Kind kind);

struct ValidationReport {
    std::vector<Finding> findings;

    bool ok() const { return findings.empty(); }
    std::size_t count(Finding::Kind kind) const;
};

/// Checks referential integrity. With a profile, categories the profile does
/// not define are reported as `unknown_category` (once per category).
ValidationReport validate_dataset(const std::vector<ActivityRecord>& records, const std::vector<Employee>& employees,
                                  const WeightProfile* profile = nullptr);

}  // namespace metricsvis
