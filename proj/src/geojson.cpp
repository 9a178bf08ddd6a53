#include "classifly/geojson.hpp"

#include <array>
#include <functional>

namespace classifly {
namespace {

constexpr std::array<const char*, 10> kPalette = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

const char* label_color(const std::string& label) {
    if (const auto c = parse_category(label)) return kPalette[static_cast<std::size_t>(*c)];
    // FNV-1a keeps unknown labels stable across runs.
    std::uint32_t h = 2166136261u;
    for (unsigned char ch : label) h = (h ^ ch) * 16777619u;
    return kPalette[h % kPalette.size()];
}

}  // namespace

nlohmann::json flights_geojson(std::span<const Flight> flights, const std::map<Icao24, std::string>* labels) {
    nlohmann::json features = nlohmann::json::array();
    std::map<Icao24, std::size_t> ordinal;
    for (const auto& flight : flights) {
        const std::size_t n = ordinal[flight.icao24]++;
        nlohmann::json coords = nlohmann::json::array();
        for (const auto& s : flight.states) {
            if (s.lat && s.lon) coords.push_back({*s.lon, *s.lat});
        }
        if (coords.empty()) continue;
        if (coords.size() == 1) coords.push_back(coords.front());

        nlohmann::json props = {{"icao24", flight.icao24.str()},
                                {"flight", n},
                                {"start_time", flight.start_time()},
                                {"end_time", flight.end_time()}};
        const std::string* label = nullptr;
        if (labels) {
            if (auto it = labels->find(flight.icao24); it != labels->end()) label = &it->second;
        }
        if (label) {
            props["label"] = *label;
            props["color"] = label_color(*label);
        } else {
            props["color"] = kPalette[n % kPalette.size()];
        }
        features.push_back({{"type", "Feature"},
                            {"geometry", {{"type", "LineString"}, {"coordinates", std::move(coords)}}},
                            {"properties", std::move(props)}});
    }
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

}  // namespace classifly
