#include "classifly/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>

#include "classifly/error.hpp"
#include "classifly/io.hpp"

namespace classifly {
namespace {

enum Column { kIcao, kTime, kLat, kLon, kAlt, kSpeed, kHeading, kVertRate, kColumnCount };

// Returns false when the cell is present but unusable.
bool optional_number(std::string_view cell, std::optional<double>& out) {
    cell = io::trim(cell);
    if (cell.empty()) {
        out.reset();
        return true;
    }
    const auto value = io::parse_double(cell);
    if (!value || !std::isfinite(*value)) return false;
    out = *value;
    return true;
}

double normalize_heading(double heading) {
    double h = std::fmod(heading, 360.0);
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h = 0.0;
    return h;
}

// Validates the eight state-vector cells.
// Returns an empty string on success, the reason otherwise.
std::string parse_state(std::span<const std::string_view> cells, StateVector& state) {
    const auto icao = Icao24::try_parse(io::trim(cells[kIcao]));
    if (!icao) return "bad icao24";
    state.icao24 = *icao;
    const auto time = io::parse_int(cells[kTime]);
    if (!time) return "bad time";
    state.time = *time;
    if (!optional_number(cells[kLat], state.lat)) return "bad lat";
    if (!optional_number(cells[kLon], state.lon)) return "bad lon";
    if (state.lat.has_value() != state.lon.has_value()) return "lat/lon must both be present";
    if (state.lat && (*state.lat < -90.0 || *state.lat > 90.0)) return "lat out of range";
    if (state.lon && (*state.lon < -180.0 || *state.lon > 180.0)) return "lon out of range";
    if (!optional_number(cells[kAlt], state.baro_alt)) return "bad baroaltitude";
    if (!optional_number(cells[kSpeed], state.ground_speed)) return "bad velocity";
    if (state.ground_speed && *state.ground_speed < 0.0) return "negative velocity";
    if (!optional_number(cells[kHeading], state.heading)) return "bad heading";
    if (state.heading) state.heading = normalize_heading(*state.heading);
    if (!optional_number(cells[kVertRate], state.vert_rate)) return "bad vertrate";
    return {};
}

void write_optional(std::ostream& out, const std::optional<double>& value) {
    out << ',';
    if (value) out << io::format_double(*value);
}

void write_state_tail(std::ostream& out, const StateVector& s) {
    out << ',' << s.time;
    write_optional(out, s.lat);
    write_optional(out, s.lon);
    write_optional(out, s.baro_alt);
    write_optional(out, s.ground_speed);
    write_optional(out, s.heading);
    write_optional(out, s.vert_rate);
    out << '\n';
}

bool splits_after(const StateVector& current, const StateVector& next, const SegmentOptions& options) {
    const std::int64_t gap = next.time - current.time;
    if (options.hard_gap_s && gap > *options.hard_gap_s) return true;
    return gap > options.gap_s && current.baro_alt && *current.baro_alt < options.arrival_alt_m;
}

}  // namespace

ParseResult parse_state_vectors(std::istream& in, bool strict) {
    ParseResult result;
    std::string line;
    if (!std::getline(in, line) || io::trim(line) != kStateVectorHeader) {
        throw Error(ErrorKind::MalformedHeader,
                    "expected header '" + std::string(kStateVectorHeader) + "'");
    }
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = io::trim(line);
        if (text.empty()) continue;
        const auto cells = io::split_csv(text);
        std::string reason;
        StateVector state;
        if (cells.size() != kColumnCount) {
            reason = "expected 8 fields, got " + std::to_string(cells.size());
        } else {
            reason = parse_state(cells, state);
        }
        if (reason.empty()) {
            result.states.push_back(state);
        } else if (strict) {
            throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line_no) + ": " + reason);
        } else {
            ++result.rejected;
        }
    }
    return result;
}

void write_state_vectors(std::ostream& out, std::span<const StateVector> states) {
    out << kStateVectorHeader << '\n';
    for (const auto& s : states) {
        out << s.icao24.str();
        write_state_tail(out, s);
    }
}

std::vector<Flight> segment_flights(std::span<const StateVector> states, const SegmentOptions& options) {
    std::vector<Flight> flights;
    if (states.empty()) return flights;
    for (std::size_t i = 1; i < states.size(); ++i) {
        if (states[i].icao24 != states[0].icao24) {
            throw Error(ErrorKind::MixedAircraft, "states of " + states[0].icao24.str() + " and " +
                                                      states[i].icao24.str() + " mixed");
        }
        if (states[i].time <= states[i - 1].time) {
            throw Error(ErrorKind::UnsortedInput, "times not strictly increasing at index " +
                                                      std::to_string(i) + " for " +
                                                      states[0].icao24.str());
        }
    }
    flights.push_back(Flight{states[0].icao24, {states[0]}});
    for (std::size_t i = 1; i < states.size(); ++i) {
        if (splits_after(states[i - 1], states[i], options)) {
            flights.push_back(Flight{states[0].icao24, {}});
        }
        flights.back().states.push_back(states[i]);
    }
    return flights;
}

FleetSegmentation segment_fleet(std::vector<StateVector> states, const SegmentOptions& options) {
    FleetSegmentation result;
    std::stable_sort(states.begin(), states.end(), [](const StateVector& a, const StateVector& b) {
        if (a.icao24 != b.icao24) return a.icao24 < b.icao24;
        return a.time < b.time;
    });
    const auto last = std::unique(states.begin(), states.end(),
                                  [](const StateVector& a, const StateVector& b) {
                                      return a.icao24 == b.icao24 && a.time == b.time;
                                  });
    result.duplicates_dropped = static_cast<std::size_t>(states.end() - last);
    states.erase(last, states.end());

    std::size_t begin = 0;
    while (begin < states.size()) {
        std::size_t end = begin + 1;
        while (end < states.size() && states[end].icao24 == states[begin].icao24) ++end;
        auto flights = segment_flights(std::span(states).subspan(begin, end - begin), options);
        for (auto& f : flights) result.flights.push_back(std::move(f));
        begin = end;
    }
    return result;
}

void write_flights(std::ostream& out, std::span<const Flight> flights) {
    out << kFlightHeader << '\n';
    std::size_t ordinal = 0;
    for (std::size_t i = 0; i < flights.size(); ++i) {
        if (i > 0 && flights[i].icao24 != flights[i - 1].icao24) ordinal = 0;
        const std::string icao = flights[i].icao24.str();
        for (const auto& s : flights[i].states) {
            out << icao << ',' << ordinal;
            write_state_tail(out, s);
        }
        ++ordinal;
    }
}

std::vector<Flight> read_flights(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || io::trim(line) != kFlightHeader) {
        throw Error(ErrorKind::MalformedHeader, "expected header '" + std::string(kFlightHeader) + "'");
    }
    std::vector<Flight> flights;
    long long current_ordinal = -1;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = io::trim(line);
        if (text.empty()) continue;
        auto cells = io::split_csv(text);
        if (cells.size() != kColumnCount + 1) {
            throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line_no) + ": expected 9 fields");
        }
        const auto ordinal = io::parse_int(cells[1]);
        if (!ordinal) throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line_no) + ": bad flight");
        cells.erase(cells.begin() + 1);
        StateVector state;
        if (auto reason = parse_state(cells, state); !reason.empty()) {
            throw Error(ErrorKind::MalformedRow, "line " + std::to_string(line_no) + ": " + reason);
        }
        if (flights.empty() || flights.back().icao24 != state.icao24 || current_ordinal != *ordinal) {
            flights.push_back(Flight{state.icao24, {}});
            current_ordinal = *ordinal;
        } else if (state.time <= flights.back().states.back().time) {
            throw Error(ErrorKind::UnsortedInput, "line " + std::to_string(line_no) + ": time not increasing");
        }
        flights.back().states.push_back(state);
    }
    return flights;
}

std::vector<std::span<const Flight>> group_by_aircraft(std::span<const Flight> flights) {
    std::vector<std::span<const Flight>> groups;
    std::size_t begin = 0;
    while (begin < flights.size()) {
        std::size_t end = begin + 1;
        while (end < flights.size() && flights[end].icao24 == flights[begin].icao24) ++end;
        groups.push_back(flights.subspan(begin, end - begin));
        begin = end;
    }
    return groups;
}

}  // namespace classifly
