#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace metricsvis {

enum class ProfileSource { officers, citizens, custom };

std::string_view to_string(ProfileSource s);
std::optional<ProfileSource> parse_profile_source(std::string_view text);

inline constexpr double kMinWeight = 0.0;
inline constexpr double kMaxWeight = 100.0;
inline constexpr int kMaxRating = 100;

struct WeightEntry {
    std::vector<int> ratings;  ///< survey ratings on the 0..100 scale
    double weight = 0.0;
    bool included = true;
    bool edited = false;  ///< weight was set explicitly rather than taken from the rating mean

    bool operator==(const WeightEntry&) const = default;
};

using WeightEntries = std::map<std::string, WeightEntry, std::less<>>;

/// Per-category importance weights. Immutable: every edit returns a new
/// profile whose version is strictly greater than its parent's.
class WeightProfile {
public:
    /// Validates ratings and weights (RangeError). Entries with `edited == false`
    /// and at least one rating get their weight reset to the rating mean.
    WeightProfile(ProfileSource source, WeightEntries entries, long version = 1);

    long version() const { return version_; }
    ProfileSource source() const { return source_; }
    const WeightEntries& entries() const { return entries_; }

    bool contains(std::string_view category_id) const;
    /// Throws UnknownCategory.
    const WeightEntry& entry(std::string_view category_id) const;

    /// Weight used for scoring: the stored weight for included categories,
    /// zero for excluded or unknown ones.
    double effective_weight(std::string_view category_id) const;

    std::vector<std::string> category_ids() const;
    std::size_t rating_count() const;

private:
    ProfileSource source_;
    WeightEntries entries_;
    long version_;
};

/// Parses the JSON profile document:
/// `{"source": ..., "entries": {"<id>": {"ratings": [...], "weight": number|null, "included": bool}}}`.
/// A null or missing weight means "mean of ratings" (zero without ratings).
/// Throws SchemaError or RangeError. The result has version 1.
WeightProfile load_weight_profile(std::string_view document);

/// Inverse of load_weight_profile. Edited weights are written explicitly;
/// mean-derived ones are written as null.
std::string export_weight_profile(const WeightProfile& profile);

/// Throws UnknownCategory or RangeError.
WeightProfile set_weight(const WeightProfile& profile, const std::string& category_id, double weight);
WeightProfile set_included(const WeightProfile& profile, const std::string& category_id, bool included);

struct RatingHistogram {
    std::string category_id;
    std::array<long, kMaxRating + 1> counts{};
    std::optional<double> mean;  ///< absent when there are no ratings

    long total() const;
};

RatingHistogram rating_histogram(const WeightProfile& profile, const std::string& category_id);

/// Arithmetic mean, or nullopt for an empty list.
std::optional<double> mean_rating(const std::vector<int>& ratings);

inline double score(long count, double weight) { return static_cast<double>(count) * weight; }

}  // namespace metricsvis
