#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "classifly/reference.hpp"
#include "classifly/types.hpp"

namespace classifly {

/// 12 groups x q proportions describing one aircraft, group-major.
struct FeatureVector {
    Icao24 icao24;
    int q = 0;
    std::vector<double> values;
    std::size_t n_flights = 0;
    std::size_t n_states = 0;

    std::span<const double> slice(FeatureGroup group) const {
        return std::span<const double>(values).subspan(static_cast<std::size_t>(group) * q, q);
    }

    bool operator==(const FeatureVector&) const = default;
};

/// Equirectangular area of the flight's lat/lon bounding box in km^2.
/// Throws Error(NoPosition) when no state carries a position.
double flight_bbox_area(const Flight& flight);

/// Raw per-group multisets for a set of flights: flight durations, bbox areas
/// (flights without positions are skipped) and the pooled kinematic series.
GroupValues pooled_group_values(std::span<const Flight> flights, double max_dt_s = 10.0);

/// Throws Error(EmptyInput) for no flights, Error(MixedAircraft) when
/// addresses differ and Error(EmptyGroup) when some group has no samples.
FeatureVector extract_features(std::span<const Flight> flights, const QuantileBounds& bounds);

struct IneligibleAircraft {
    Icao24 icao24;
    std::string reason;
};

struct FleetFeatures {
    std::vector<FeatureVector> vectors;      // ascending address
    std::vector<IneligibleAircraft> ineligible;
};

/// extract_features for every aircraft of a grouped fleet. Aircraft raising
/// EmptyGroup/NoPosition are reported, not fatal.
FleetFeatures extract_fleet(std::span<const Flight> fleet, const QuantileBounds& bounds,
                            unsigned jobs = 1);

/// Header `icao24,n_flights,n_states,f_1,...,f_{12q}`.
void write_feature_matrix(std::ostream& out, std::span<const FeatureVector> vectors);
std::vector<FeatureVector> read_feature_matrix(std::istream& in);

}  // namespace classifly
