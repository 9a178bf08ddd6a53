#include "classifly/features.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>

#include "classifly/error.hpp"
#include "classifly/ingest.hpp"
#include "classifly/io.hpp"
#include "classifly/kinematics.hpp"
#include "classifly/parallel.hpp"

namespace classifly {
namespace {

constexpr double kKmPerDegree = 111.32;

void append(std::vector<double>& dst, const std::vector<double>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

std::size_t group_index(FeatureGroup g) { return static_cast<std::size_t>(g); }

}  // namespace

double flight_bbox_area(const Flight& flight) {
    double min_lat = 0, max_lat = 0, min_lon = 0, max_lon = 0;
    bool any = false;
    for (const auto& s : flight.states) {
        if (!s.lat || !s.lon) continue;
        if (!any) {
            min_lat = max_lat = *s.lat;
            min_lon = max_lon = *s.lon;
            any = true;
        } else {
            min_lat = std::min(min_lat, *s.lat);
            max_lat = std::max(max_lat, *s.lat);
            min_lon = std::min(min_lon, *s.lon);
            max_lon = std::max(max_lon, *s.lon);
        }
    }
    if (!any) throw Error(ErrorKind::NoPosition, "flight of " + flight.icao24.str() + " has no position");
    const double mean_lat = 0.5 * (min_lat + max_lat) * std::numbers::pi / 180.0;
    const double height_km = (max_lat - min_lat) * kKmPerDegree;
    const double width_km = (max_lon - min_lon) * kKmPerDegree * std::cos(mean_lat);
    return height_km * width_km;
}

GroupValues pooled_group_values(std::span<const Flight> flights, double max_dt_s) {
    GroupValues values;
    for (const auto& flight : flights) {
        if (flight.states.empty()) continue;
        values[group_index(FeatureGroup::Duration)].push_back(static_cast<double>(flight.duration()));
        const bool has_position = std::any_of(flight.states.begin(), flight.states.end(),
                                              [](const StateVector& s) { return s.lat.has_value(); });
        if (has_position) values[group_index(FeatureGroup::BoundingBox)].push_back(flight_bbox_area(flight));

        const auto k = derive_kinematics(flight, max_dt_s);
        append(values[group_index(FeatureGroup::Altitude)], k.altitude);
        append(values[group_index(FeatureGroup::Heading)], k.heading);
        append(values[group_index(FeatureGroup::XVelocity)], k.x_vel);
        append(values[group_index(FeatureGroup::YVelocity)], k.y_vel);
        append(values[group_index(FeatureGroup::VerticalRate)], k.vert_rate);
        append(values[group_index(FeatureGroup::HeadingSpeed)], k.heading_rate);
        append(values[group_index(FeatureGroup::XAcceleration)], k.x_acc);
        append(values[group_index(FeatureGroup::YAcceleration)], k.y_acc);
        append(values[group_index(FeatureGroup::VerticalAcceleration)], k.vert_acc);
        append(values[group_index(FeatureGroup::HeadingAcceleration)], k.heading_acc);
    }
    return values;
}

FeatureVector extract_features(std::span<const Flight> flights, const QuantileBounds& bounds) {
    if (flights.empty()) throw Error(ErrorKind::EmptyInput, "no flights to extract features from");
    FeatureVector fv;
    fv.icao24 = flights.front().icao24;
    fv.q = bounds.q();
    fv.n_flights = flights.size();
    for (const auto& f : flights) {
        if (f.icao24 != fv.icao24) {
            throw Error(ErrorKind::MixedAircraft, "flights of " + fv.icao24.str() + " and " + f.icao24.str());
        }
        fv.n_states += f.states.size();
    }
    const auto values = pooled_group_values(flights);
    fv.values.reserve(kFeatureGroupCount * static_cast<std::size_t>(fv.q));
    for (FeatureGroup g : kAllFeatureGroups) {
        const auto& group_values = values[group_index(g)];
        if (group_values.empty()) {
            throw Error(ErrorKind::EmptyGroup, "aircraft " + fv.icao24.str() + " has no samples for group " +
                                                   std::string(to_string(g)));
        }
        const auto proportions = quantize_proportions(group_values, bounds.boundaries(g));
        fv.values.insert(fv.values.end(), proportions.begin(), proportions.end());
    }
    return fv;
}

FleetFeatures extract_fleet(std::span<const Flight> fleet, const QuantileBounds& bounds, unsigned jobs) {
    const auto aircraft = group_by_aircraft(fleet);
    std::vector<std::optional<FeatureVector>> slots(aircraft.size());
    std::vector<std::string> reasons(aircraft.size());
    parallel_for(aircraft.size(), jobs, [&](std::size_t i) {
        try {
            slots[i] = extract_features(aircraft[i], bounds);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::EmptyGroup && e.kind() != ErrorKind::NoPosition) throw;
            reasons[i] = e.what();
        }
    });
    FleetFeatures result;
    for (std::size_t i = 0; i < aircraft.size(); ++i) {
        if (slots[i]) result.vectors.push_back(std::move(*slots[i]));
        else result.ineligible.push_back({aircraft[i].front().icao24, reasons[i]});
    }
    std::stable_sort(result.vectors.begin(), result.vectors.end(),
                     [](const FeatureVector& a, const FeatureVector& b) { return a.icao24 < b.icao24; });
    return result;
}

void write_feature_matrix(std::ostream& out, std::span<const FeatureVector> vectors) {
    const std::size_t dim = vectors.empty() ? 0 : vectors.front().values.size();
    out << "icao24,n_flights,n_states";
    for (std::size_t i = 1; i <= dim; ++i) out << ",f_" << i;
    out << '\n';
    for (const auto& v : vectors) {
        if (v.values.size() != dim) throw Error(ErrorKind::ShapeMismatch, "feature vectors differ in length");
        out << v.icao24.str() << ',' << v.n_flights << ',' << v.n_states;
        for (double x : v.values) out << ',' << io::format_double(x);
        out << '\n';
    }
}

std::vector<FeatureVector> read_feature_matrix(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::MalformedHeader, "empty feature matrix");
    const auto header = io::split_csv(io::trim(line));
    if (header.size() < 3 || header[0] != "icao24" || header[1] != "n_flights" || header[2] != "n_states") {
        throw Error(ErrorKind::MalformedHeader, "feature matrix header must start with icao24,n_flights,n_states");
    }
    const std::size_t dim = header.size() - 3;
    for (std::size_t i = 0; i < dim; ++i) {
        if (header[3 + i] != "f_" + std::to_string(i + 1)) {
            throw Error(ErrorKind::MalformedHeader, "unexpected feature column '" + std::string(header[3 + i]) + "'");
        }
    }
    if (dim % kFeatureGroupCount != 0 || dim / kFeatureGroupCount < 2) {
        throw Error(ErrorKind::MalformedHeader, "feature count " + std::to_string(dim) + " is not 12q with q >= 2");
    }
    const int q = static_cast<int>(dim / kFeatureGroupCount);

    std::vector<FeatureVector> vectors;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = io::trim(line);
        if (text.empty()) continue;
        const auto cells = io::split_csv(text);
        const auto where = "line " + std::to_string(line_no) + ": ";
        if (cells.size() != header.size()) throw Error(ErrorKind::MalformedRow, where + "wrong field count");
        FeatureVector v;
        const auto icao = Icao24::try_parse(cells[0]);
        const auto flights = io::parse_int(cells[1]);
        const auto states = io::parse_int(cells[2]);
        if (!icao || !flights || !states || *flights < 0 || *states < 0) {
            throw Error(ErrorKind::MalformedRow, where + "bad identifier or counts");
        }
        v.icao24 = *icao;
        v.n_flights = static_cast<std::size_t>(*flights);
        v.n_states = static_cast<std::size_t>(*states);
        v.q = q;
        v.values.reserve(dim);
        for (std::size_t i = 3; i < cells.size(); ++i) {
            const auto x = io::parse_double(cells[i]);
            if (!x || !std::isfinite(*x)) throw Error(ErrorKind::MalformedRow, where + "bad feature value");
            v.values.push_back(*x);
        }
        vectors.push_back(std::move(v));
    }
    return vectors;
}

}  // namespace classifly
