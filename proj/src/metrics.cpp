#include "metricsvis/metrics.hpp"

#include <cmath>
#include <numeric>

#include "json.hpp"
#include "metricsvis/errors.hpp"

namespace metricsvis {

using nlohmann::json;

std::string_view to_string(ProfileSource s) {
    switch (s) {
        case ProfileSource::officers: return "officers";
        case ProfileSource::citizens: return "citizens";
        case ProfileSource::custom: return "custom";
    }
    return "custom";
}

std::optional<ProfileSource> parse_profile_source(std::string_view text) {
    if (text == "officers") return ProfileSource::officers;
    if (text == "citizens") return ProfileSource::citizens;
    if (text == "custom") return ProfileSource::custom;
    return std::nullopt;
}

std::optional<double> mean_rating(const std::vector<int>& ratings) {
    if (ratings.empty()) return std::nullopt;
    const long sum = std::accumulate(ratings.begin(), ratings.end(), 0L);
    return static_cast<double>(sum) / static_cast<double>(ratings.size());
}

namespace {

void check_weight(const std::string& category_id, double weight) {
    if (!std::isfinite(weight) || weight < kMinWeight || weight > kMaxWeight) {
        throw RangeError("weight " + std::to_string(weight) + " for '" + category_id + "' outside [0,100]");
    }
}

}  // namespace

WeightProfile::WeightProfile(ProfileSource source, WeightEntries entries, long version)
    : source_(source), entries_(std::move(entries)), version_(version) {
    for (auto& [id, e] : entries_) {
        for (int r : e.ratings) {
            if (r < 0 || r > kMaxRating) {
                throw RangeError("rating " + std::to_string(r) + " for '" + id + "' outside [0,100]");
            }
        }
        if (!e.edited) {
            if (auto m = mean_rating(e.ratings)) e.weight = *m;
        }
        check_weight(id, e.weight);
    }
}

bool WeightProfile::contains(std::string_view category_id) const {
    return entries_.find(category_id) != entries_.end();
}

const WeightEntry& WeightProfile::entry(std::string_view category_id) const {
    auto it = entries_.find(category_id);
    if (it == entries_.end()) throw UnknownCategory(std::string(category_id));
    return it->second;
}

double WeightProfile::effective_weight(std::string_view category_id) const {
    auto it = entries_.find(category_id);
    if (it == entries_.end() || !it->second.included) return 0.0;
    return it->second.weight;
}

std::vector<std::string> WeightProfile::category_ids() const {
    std::vector<std::string> ids;
    ids.reserve(entries_.size());
    for (const auto& [id, _] : entries_) ids.push_back(id);
    return ids;
}

std::size_t WeightProfile::rating_count() const {
    std::size_t n = 0;
    for (const auto& [_, e] : entries_) n += e.ratings.size();
    return n;
}

WeightProfile load_weight_profile(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("profile is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw SchemaError("profile must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (key != "source" && key != "entries") throw SchemaError("unknown profile field '" + key + "'");
    }
    if (!doc.contains("source") || !doc["source"].is_string()) throw SchemaError("profile needs a string 'source'");
    auto source = parse_profile_source(doc["source"].get<std::string>());
    if (!source) throw SchemaError("unknown profile source '" + doc["source"].get<std::string>() + "'");
    if (!doc.contains("entries") || !doc["entries"].is_object()) throw SchemaError("profile needs an 'entries' object");

    WeightEntries entries;
    for (const auto& [id, node] : doc["entries"].items()) {
        if (!node.is_object()) throw SchemaError("entry '" + id + "' must be an object");
        WeightEntry e;
        for (const auto& [key, value] : node.items()) {
            if (key == "ratings") {
                if (!value.is_array()) throw SchemaError("entry '" + id + "': ratings must be an array");
                for (const auto& r : value) {
                    if (!r.is_number_integer()) throw SchemaError("entry '" + id + "': ratings must be integers");
                    const auto v = r.get<long long>();
                    if (v < 0 || v > kMaxRating) {
                        throw RangeError("rating " + std::to_string(v) + " for '" + id + "' outside [0,100]");
                    }
                    e.ratings.push_back(static_cast<int>(v));
                }
            } else if (key == "weight") {
                if (value.is_null()) continue;
                if (!value.is_number()) throw SchemaError("entry '" + id + "': weight must be a number or null");
                e.weight = value.get<double>();
                e.edited = true;
            } else if (key == "included") {
                if (!value.is_boolean()) throw SchemaError("entry '" + id + "': included must be a boolean");
                e.included = value.get<bool>();
            } else {
                throw SchemaError("entry '" + id + "': unknown field '" + key + "'");
            }
        }
        entries.emplace(id, std::move(e));
    }
    return WeightProfile(*source, std::move(entries), 1);
}

std::string export_weight_profile(const WeightProfile& profile) {
    json entries = json::object();
    for (const auto& [id, e] : profile.entries()) {
        entries[id] = {{"ratings", e.ratings},
                       {"weight", e.edited ? json(e.weight) : json(nullptr)},
                       {"included", e.included}};
    }
    return json{{"source", to_string(profile.source())}, {"entries", entries}}.dump(2);
}

WeightProfile set_weight(const WeightProfile& profile, const std::string& category_id, double weight) {
    profile.entry(category_id);
    check_weight(category_id, weight);
    WeightEntries entries = profile.entries();
    auto& e = entries.find(category_id)->second;
    e.weight = weight;
    e.edited = true;
    return WeightProfile(profile.source(), std::move(entries), profile.version() + 1);
}

WeightProfile set_included(const WeightProfile& profile, const std::string& category_id, bool included) {
    profile.entry(category_id);
    WeightEntries entries = profile.entries();
    entries.find(category_id)->second.included = included;
    return WeightProfile(profile.source(), std::move(entries), profile.version() + 1);
}

long RatingHistogram::total() const {
    return std::accumulate(counts.begin(), counts.end(), 0L);
}

RatingHistogram rating_histogram(const WeightProfile& profile, const std::string& category_id) {
    const auto& e = profile.entry(category_id);
    RatingHistogram h;
    h.category_id = category_id;
    for (int r : e.ratings) ++h.counts[static_cast<std::size_t>(r)];
    const long n = h.total();
    if (n > 0) {
        long weighted = 0;
        for (std::size_t i = 0; i < h.counts.size(); ++i) weighted += static_cast<long>(i) * h.counts[i];
        h.mean = static_cast<double>(weighted) / static_cast<double>(n);
    }
    return h;
}

}  // namespace metricsvis
