#include "metricsvis/ingest.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <unordered_set>

#include "metricsvis/csv.hpp"
#include "metricsvis/errors.hpp"
#include "metricsvis/metrics.hpp"

namespace metricsvis {

std::string_view to_string(Behavior b) {
    return b == Behavior::self_initiated ? "self_initiated" : "dispatched";
}

std::string_view to_string(RecordType t) {
    return t == RecordType::incident ? "incident" : "call_for_service";
}

std::optional<Behavior> parse_behavior(std::string_view text) {
    if (text == "self_initiated") return Behavior::self_initiated;
    if (text == "dispatched") return Behavior::dispatched;
    return std::nullopt;
}

std::optional<RecordType> parse_record_type(std::string_view text) {
    if (text == "incident") return RecordType::incident;
    if (text == "call_for_service") return RecordType::call_for_service;
    return std::nullopt;
}

EvaluationContext::EvaluationContext(TimeRange range, std::set<Behavior> behaviors,
                                     std::set<RecordType> record_types, long weight_profile_version)
    : range_(range),
      behaviors_(std::move(behaviors)),
      record_types_(std::move(record_types)),
      profile_version_(weight_profile_version) {
    if (!(range_.start < range_.end)) throw InvalidParams("time range start must precede end");
    if (behaviors_.empty()) throw InvalidParams("context needs at least one behavior");
    if (record_types_.empty()) throw InvalidParams("context needs at least one record type");
}

EvaluationContext EvaluationContext::covering(const std::vector<ActivityRecord>& records,
                                              long weight_profile_version) {
    TimeRange range{Timestamp{}, Timestamp{} + std::chrono::seconds{1}};
    if (!records.empty()) {
        auto [lo, hi] = std::minmax_element(records.begin(), records.end(),
                                            [](const auto& a, const auto& b) { return a.timestamp < b.timestamp; });
        range = {lo->timestamp, hi->timestamp + std::chrono::seconds{1}};
    }
    return EvaluationContext(range, {Behavior::self_initiated, Behavior::dispatched},
                             {RecordType::incident, RecordType::call_for_service}, weight_profile_version);
}

EvaluationContext EvaluationContext::with_behaviors(std::set<Behavior> behaviors) const {
    return EvaluationContext(range_, std::move(behaviors), record_types_, profile_version_);
}

EvaluationContext EvaluationContext::with_profile_version(long version) const {
    return EvaluationContext(range_, behaviors_, record_types_, version);
}

bool EvaluationContext::admits(const ActivityRecord& r) const {
    return range_.contains(r.timestamp) && behaviors_.count(r.behavior) && record_types_.count(r.record_type);
}

namespace {

std::vector<std::string> split_header(std::string_view header) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = header.find(',', pos);
        out.emplace_back(header.substr(pos, comma - pos));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

/// Maps the expected column names onto their position in the file header.
std::vector<std::size_t> bind_columns(const std::vector<std::string>& header, std::string_view expected) {
    const auto names = split_header(expected);
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (std::find(names.begin(), names.end(), header[i]) == names.end()) {
            throw SchemaError("unknown column '" + header[i] + "'");
        }
        if (!seen.emplace(header[i], i).second) throw SchemaError("column '" + header[i] + "' repeated");
    }
    std::vector<std::size_t> index;
    for (const auto& name : names) {
        auto it = seen.find(name);
        if (it == seen.end()) throw SchemaError("missing column '" + name + "'");
        index.push_back(it->second);
    }
    return index;
}

}  // namespace

std::vector<ActivityRecord> parse_activity_csv(std::istream& in) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw SchemaError("missing header row");
    const auto col = bind_columns(*header, kActivityHeader);

    std::vector<ActivityRecord> records;
    std::unordered_set<std::string> ids;
    std::size_t row = 0;
    while (auto fields = reader.next()) {
        ++row;
        if (fields->size() != header->size()) {
            throw RowError(row, "expected " + std::to_string(header->size()) + " fields, found " +
                                    std::to_string(fields->size()));
        }
        const auto& f = *fields;
        ActivityRecord r;
        r.record_id = f[col[0]];
        r.employee_id = f[col[1]];
        if (r.record_id.empty()) throw RowError(row, "empty record_id");
        if (r.employee_id.empty()) throw RowError(row, "empty employee_id");
        auto ts = parse_timestamp(f[col[2]]);
        if (!ts) throw RowError(row, "unparseable timestamp '" + f[col[2]] + "'");
        r.timestamp = *ts;
        r.category_id = f[col[3]];
        if (r.category_id.empty()) throw RowError(row, "empty category_id");
        auto behavior = parse_behavior(f[col[4]]);
        if (!behavior) throw RowError(row, "invalid behavior '" + f[col[4]] + "'");
        r.behavior = *behavior;
        auto type = parse_record_type(f[col[5]]);
        if (!type) throw RowError(row, "invalid record_type '" + f[col[5]] + "'");
        r.record_type = *type;
        r.shift = f[col[6]];
        r.district = f[col[7]];
        if (!ids.insert(r.record_id).second) throw DuplicateIdError(r.record_id);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<Employee> parse_employee_csv(std::istream& in) {
    csv::Reader reader(in);
    auto header = reader.next();
    if (!header) throw SchemaError("missing header row");
    const auto col = bind_columns(*header, kEmployeeHeader);

    std::vector<Employee> employees;
    std::unordered_set<std::string> ids;
    std::size_t row = 0;
    while (auto fields = reader.next()) {
        ++row;
        if (fields->size() != header->size()) {
            throw RowError(row, "expected " + std::to_string(header->size()) + " fields, found " +
                                    std::to_string(fields->size()));
        }
        const auto& f = *fields;
        Employee e{f[col[0]], f[col[1]], f[col[2]], f[col[3]]};
        if (e.employee_id.empty()) throw RowError(row, "empty employee_id");
        if (!ids.insert(e.employee_id).second) throw DuplicateIdError(e.employee_id);
        employees.push_back(std::move(e));
    }
    return employees;
}

void write_activity_csv(std::ostream& out, const std::vector<ActivityRecord>& records) {
    out << kActivityHeader << '\n';
    for (const auto& r : records) {
        out << csv::join_row({r.record_id, r.employee_id, format_timestamp(r.timestamp), r.category_id,
                              std::string(to_string(r.behavior)), std::string(to_string(r.record_type)), r.shift,
                              r.district})
            << '\n';
    }
}

void write_employee_csv(std::ostream& out, const std::vector<Employee>& employees) {
    out << kEmployeeHeader << '\n';
    for (const auto& e : employees) {
        out << csv::join_row({e.employee_id, e.label, e.shift, e.district}) << '\n';
    }
}

std::vector<ActivityRecord> filter_records(const std::vector<ActivityRecord>& records,
                                           const EvaluationContext& ctx) {
    std::vector<ActivityRecord> out;
    std::copy_if(records.begin(), records.end(), std::back_inserter(out),
                 [&](const ActivityRecord& r) { return ctx.admits(r); });
    return out;
}

std::string_view to_string(Finding::Kind kind) {
    switch (kind) {
        case Finding::Kind::dangling_employee: return "dangling_employee";
        case Finding::Kind::duplicate_record: return "duplicate_record";
        case Finding::Kind::duplicate_employee: return "duplicate_employee";
        case Finding::Kind::category_mismatch: return "category_mismatch";
        case Finding::Kind::unknown_category: return "unknown_category";
    }
    return "unknown";
}

std::size_t ValidationReport::count(Finding::Kind kind) const {
    return static_cast<std::size_t>(
        std::count_if(findings.begin(), findings.end(), [kind](const Finding& f) { return f.kind == kind; }));
}

ValidationReport validate_dataset(const std::vector<ActivityRecord>& records, const std::vector<Employee>& employees,
                                  const WeightProfile* profile) {
    ValidationReport report;
    std::unordered_set<std::string> roster;
    for (const auto& e : employees) {
        if (!roster.insert(e.employee_id).second) {
            report.findings.push_back({Finding::Kind::duplicate_employee, e.employee_id, "employee listed twice"});
        }
    }

    std::unordered_set<std::string> record_ids;
    std::set<std::string> unknown_categories;
    for (const auto& r : records) {
        if (!record_ids.insert(r.record_id).second) {
            report.findings.push_back({Finding::Kind::duplicate_record, r.record_id, "record id repeated"});
        }
        if (!roster.count(r.employee_id)) {
            report.findings.push_back(
                {Finding::Kind::dangling_employee, r.record_id, "employee '" + r.employee_id + "' not in roster"});
        }
        if (r.record_type == RecordType::call_for_service && r.category_id != kCallsForService) {
            report.findings.push_back({Finding::Kind::category_mismatch, r.record_id,
                                       "call_for_service record has category '" + r.category_id + "'"});
        }
        if (profile && !profile->contains(r.category_id)) unknown_categories.insert(r.category_id);
    }
    for (const auto& c : unknown_categories) {
        report.findings.push_back({Finding::Kind::unknown_category, c, "category absent from weight profile"});
    }
    return report;
}

}  // namespace metricsvis
