#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "classifly/types.hpp"

namespace classifly {

/// Header of state-vector dumps, in the OpenSky column order.
inline constexpr std::string_view kStateVectorHeader =
    "icao24,time,lat,lon,baroaltitude,velocity,heading,vertrate";

/// Header of segmented-flight files: the state-vector columns with the
/// per-aircraft flight ordinal inserted after the address.
inline constexpr std::string_view kFlightHeader =
    "icao24,flight,time,lat,lon,baroaltitude,velocity,heading,vertrate";

struct ParseResult {
    std::vector<StateVector> states;
    std::size_t rejected = 0;
};

/// Parses a state-vector CSV. Rows failing validation are skipped and counted,
/// or raise Error(MalformedRow) carrying the 1-based line number when
/// `strict` is set. A wrong header raises Error(MalformedHeader).
///
/// Validation: six hex digit address (case-insensitive), integer time, lat and
/// lon both present or both empty and within range, non-negative finite speed,
/// finite values everywhere. Headings are normalized into [0, 360).
ParseResult parse_state_vectors(std::istream& in, bool strict = false);

void write_state_vectors(std::ostream& out, std::span<const StateVector> states);

struct SegmentOptions {
    std::int64_t gap_s = 600;
    double arrival_alt_m = 2500.0;
    /// Unconditional split on gaps longer than this, regardless of altitude.
    std::optional<std::int64_t> hard_gap_s;
};

/// Splits one aircraft's time-sorted states into flights. A boundary falls
/// after state i iff the gap to i+1 exceeds `gap_s` and state i reports a
/// barometric altitude below `arrival_alt_m`. A missing altitude never
/// counts as below the threshold.
///
/// Throws Error(MixedAircraft) when addresses differ and Error(UnsortedInput)
/// when times are not strictly increasing.
std::vector<Flight> segment_flights(std::span<const StateVector> states,
                                    const SegmentOptions& options = {});

struct FleetSegmentation {
    std::vector<Flight> flights;     // grouped by aircraft, ascending address
    std::size_t duplicates_dropped = 0;
};

/// Sorts a mixed dump by (address, time), keeps the first state of every
/// duplicated timestamp, and segments each aircraft.
FleetSegmentation segment_fleet(std::vector<StateVector> states, const SegmentOptions& options = {});

void write_flights(std::ostream& out, std::span<const Flight> flights);

/// Reads a file written by write_flights. Consecutive rows sharing
/// (icao24, flight) form one flight.
std::vector<Flight> read_flights(std::istream& in);

/// Views into consecutive runs of flights with the same address. The input
/// must already be grouped (segment_fleet and read_flights guarantee it).
std::vector<std::span<const Flight>> group_by_aircraft(std::span<const Flight> flights);

}  // namespace classifly
