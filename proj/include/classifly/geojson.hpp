#pragma once

#include <map>
#include <span>
#include <string>

#include <json.hpp>

#include "classifly/types.hpp"

namespace classifly {

/// FeatureCollection with one LineString per flight that has a position
/// ([lon, lat] order; a single fix is repeated so the line stays valid).
/// Properties: icao24, flight (per-aircraft ordinal), start_time, end_time,
/// color, and label when `labels` has an entry for the aircraft. Colors come
/// from the label when present, else cycle with the flight ordinal.
nlohmann::json flights_geojson(std::span<const Flight> flights,
                               const std::map<Icao24, std::string>* labels = nullptr);

}  // namespace classifly
