#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "classifly/types.hpp"

namespace classifly {

/// The twelve behavioural feature groups. The ordinal order fixes the
/// feature-vector layout.
enum class FeatureGroup : std::uint8_t {
    Duration,
    BoundingBox,
    Altitude,
    Heading,
    XVelocity,
    YVelocity,
    VerticalRate,
    HeadingSpeed,
    XAcceleration,
    YAcceleration,
    VerticalAcceleration,
    HeadingAcceleration,
};

inline constexpr std::size_t kFeatureGroupCount = 12;

inline constexpr std::array<FeatureGroup, kFeatureGroupCount> kAllFeatureGroups = {
    FeatureGroup::Duration,      FeatureGroup::BoundingBox,   FeatureGroup::Altitude,
    FeatureGroup::Heading,       FeatureGroup::XVelocity,     FeatureGroup::YVelocity,
    FeatureGroup::VerticalRate,  FeatureGroup::HeadingSpeed,  FeatureGroup::XAcceleration,
    FeatureGroup::YAcceleration, FeatureGroup::VerticalAcceleration,
    FeatureGroup::HeadingAcceleration,
};

std::string_view to_string(FeatureGroup group) noexcept;
std::optional<FeatureGroup> parse_feature_group(std::string_view name) noexcept;

/// One multiset of raw values per feature group, indexed by ordinal.
using GroupValues = std::array<std::vector<double>, kFeatureGroupCount>;

/// Learned bin boundaries: q-1 non-decreasing values per group.
class QuantileBounds {
public:
    /// Throws Error(InvalidQ) for q < 2 and Error(MalformedFile) when a group
    /// does not hold exactly q-1 non-decreasing finite values.
    QuantileBounds(int q, std::array<std::vector<double>, kFeatureGroupCount> boundaries);

    int q() const noexcept { return q_; }
    std::span<const double> boundaries(FeatureGroup group) const noexcept {
        return boundaries_[static_cast<std::size_t>(group)];
    }

    /// {"q": int, "groups": {group_name: [boundaries...]}}
    nlohmann::json to_json() const;
    static QuantileBounds from_json(const nlohmann::json& doc);

    bool operator==(const QuantileBounds&) const = default;

private:
    int q_;
    std::array<std::vector<double>, kFeatureGroupCount> boundaries_;
};

/// Nearest-rank quantile of a sorted sample at probability num/den: the
/// element of 1-based rank ceil(n * num / den), clamped to [1, n]. Integer
/// arithmetic keeps the rank exact.
double nearest_rank(std::span<const double> sorted, std::size_t num, std::size_t den);

/// Boundary j (1-based) is the nearest-rank quantile at j/q.
/// Errors: InvalidQ, EmptyGroup (names the group).
QuantileBounds learn_quantile_bounds(const GroupValues& reference, int q);

/// Share of `values` in each of boundaries.size()+1 bins. A value lands in the
/// lowest bin j with value <= boundary_j, or in the last bin.
/// Errors: EmptyValues.
std::vector<double> quantize_proportions(std::span<const double> values,
                                         std::span<const double> boundaries);

struct ReferenceSampleOptions {
    std::size_t max_aircraft = 0;  // 0 = every aircraft
    std::size_t flight_cap = 25;   // first N flights of each sampled aircraft
    std::uint64_t seed = 0;
};

/// Pools group values over a random subset of aircraft, each contributing at
/// most `flight_cap` flights. `fleet` must be grouped by aircraft.
GroupValues collect_reference_values(std::span<const Flight> fleet,
                                     const ReferenceSampleOptions& options = {});

}  // namespace classifly
