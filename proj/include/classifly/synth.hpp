#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "classifly/types.hpp"

namespace classifly {

enum class PathTemplate { Straight, Circling, Sortie, Shuttle };

std::string_view to_string(PathTemplate path) noexcept;
std::optional<PathTemplate> parse_path_template(std::string_view name) noexcept;

struct ValueRange {
    double lo = 0.0;
    double hi = 0.0;
};

/// Behavioural envelope of one category. turn_rate_dps reads per template:
/// heading wander sd (straight), orbit rate (circling), peak manoeuvre rate
/// (sortie), reversal rate (shuttle). leg_s is the manoeuvre or leg length.
struct CategoryArchetype {
    Category category = Category::Commercial;
    PathTemplate path = PathTemplate::Straight;
    ValueRange duration_s;
    ValueRange cruise_alt_m;
    ValueRange speed_mps;
    ValueRange climb_rate_mps;
    ValueRange turn_rate_dps;
    ValueRange leg_s;
    double accel_sd_mps2 = 0.2;
};

struct Jitter {
    double altitude_m = 4.0;
    double speed_mps = 0.4;
    double heading_deg = 0.1;
    double vert_rate_mps = 0.25;
    double position_deg = 1e-5;
};

struct FleetConfig {
    std::vector<CategoryArchetype> archetypes;
    /// Probability that a flight is flown with another archetype's profile.
    double atypical_flight_rate = 0.15;
    ValueRange gap_s{900.0, 6.0 * 3600.0};
    Jitter jitter;

    /// Throws Error(InvalidArchetype) naming the offending category/field.
    void validate() const;

    nlohmann::json to_json() const;
    static FleetConfig from_json(const nlohmann::json& doc);
};

FleetConfig default_fleet_config();

struct SyntheticFleet {
    std::vector<StateVector> states;  // ascending (icao24, time)
    std::vector<std::pair<Icao24, Category>> truth;
};

/// 1 Hz trajectories for aircraft_per_category aircraft of every archetype.
/// Every flight ends below 2500 m and the next starts more than 600 s later,
/// so default segmentation recovers flights_per_aircraft flights per aircraft.
/// `address_offset` shifts the synthetic addresses so that two fleets can
/// coexist. Fully determined by (config, counts, seed, offset).
SyntheticFleet generate_fleet(const FleetConfig& config, std::size_t aircraft_per_category,
                              std::size_t flights_per_aircraft, std::uint64_t seed,
                              std::uint32_t address_offset = 0);

/// `icao24,category`
void write_truth(std::ostream& out, std::span<const std::pair<Icao24, Category>> truth);

}  // namespace classifly
