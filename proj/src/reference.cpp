#include "classifly/reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "classifly/error.hpp"
#include "classifly/features.hpp"
#include "classifly/ingest.hpp"

namespace classifly {

std::string_view to_string(FeatureGroup group) noexcept {
    switch (group) {
        case FeatureGroup::Duration: return "Duration";
        case FeatureGroup::BoundingBox: return "BoundingBox";
        case FeatureGroup::Altitude: return "Altitude";
        case FeatureGroup::Heading: return "Heading";
        case FeatureGroup::XVelocity: return "XVelocity";
        case FeatureGroup::YVelocity: return "YVelocity";
        case FeatureGroup::VerticalRate: return "VerticalRate";
        case FeatureGroup::HeadingSpeed: return "HeadingSpeed";
        case FeatureGroup::XAcceleration: return "XAcceleration";
        case FeatureGroup::YAcceleration: return "YAcceleration";
        case FeatureGroup::VerticalAcceleration: return "VerticalAcceleration";
        case FeatureGroup::HeadingAcceleration: return "HeadingAcceleration";
    }
    return "Unknown";
}

std::optional<FeatureGroup> parse_feature_group(std::string_view name) noexcept {
    for (FeatureGroup g : kAllFeatureGroups) {
        if (to_string(g) == name) return g;
    }
    return std::nullopt;
}

QuantileBounds::QuantileBounds(int q, std::array<std::vector<double>, kFeatureGroupCount> boundaries)
    : q_(q), boundaries_(std::move(boundaries)) {
    if (q < 2) throw Error(ErrorKind::InvalidQ, "q must be at least 2, got " + std::to_string(q));
    for (FeatureGroup g : kAllFeatureGroups) {
        const auto& b = boundaries_[static_cast<std::size_t>(g)];
        const std::string name(to_string(g));
        if (b.size() != static_cast<std::size_t>(q - 1)) {
            throw Error(ErrorKind::MalformedFile, "group " + name + " needs " + std::to_string(q - 1) +
                                                      " boundaries, has " + std::to_string(b.size()));
        }
        if (!std::all_of(b.begin(), b.end(), [](double v) { return std::isfinite(v); }) ||
            !std::is_sorted(b.begin(), b.end())) {
            throw Error(ErrorKind::MalformedFile, "group " + name + " boundaries must be finite and non-decreasing");
        }
    }
}

nlohmann::json QuantileBounds::to_json() const {
    nlohmann::json groups = nlohmann::json::object();
    for (FeatureGroup g : kAllFeatureGroups) {
        groups[std::string(to_string(g))] = boundaries_[static_cast<std::size_t>(g)];
    }
    return {{"q", q_}, {"groups", groups}};
}

QuantileBounds QuantileBounds::from_json(const nlohmann::json& doc) {
    try {
        const int q = doc.at("q").get<int>();
        std::array<std::vector<double>, kFeatureGroupCount> boundaries;
        const auto& groups = doc.at("groups");
        for (FeatureGroup g : kAllFeatureGroups) {
            const std::string name(to_string(g));
            if (!groups.contains(name)) throw Error(ErrorKind::MalformedFile, "bounds missing group " + name);
            boundaries[static_cast<std::size_t>(g)] = groups.at(name).get<std::vector<double>>();
        }
        return QuantileBounds(q, std::move(boundaries));
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::MalformedFile, std::string("bounds document: ") + e.what());
    }
}

double nearest_rank(std::span<const double> sorted, std::size_t num, std::size_t den) {
    if (sorted.empty()) throw Error(ErrorKind::EmptyValues, "quantile of an empty sample");
    const std::size_t n = sorted.size();
    std::size_t rank = (n * num + den - 1) / den;  // ceil(n * num / den)
    rank = std::clamp<std::size_t>(rank, 1, n);
    return sorted[rank - 1];
}

QuantileBounds learn_quantile_bounds(const GroupValues& reference, int q) {
    if (q < 2) throw Error(ErrorKind::InvalidQ, "q must be at least 2, got " + std::to_string(q));
    std::array<std::vector<double>, kFeatureGroupCount> boundaries;
    for (FeatureGroup g : kAllFeatureGroups) {
        const auto idx = static_cast<std::size_t>(g);
        if (reference[idx].empty()) {
            throw Error(ErrorKind::EmptyGroup, "no reference values for group " + std::string(to_string(g)));
        }
        std::vector<double> sorted = reference[idx];
        std::sort(sorted.begin(), sorted.end());
        for (int j = 1; j < q; ++j) {
            boundaries[idx].push_back(nearest_rank(sorted, static_cast<std::size_t>(j), static_cast<std::size_t>(q)));
        }
    }
    return QuantileBounds(q, std::move(boundaries));
}

std::vector<double> quantize_proportions(std::span<const double> values, std::span<const double> boundaries) {
    if (values.empty()) throw Error(ErrorKind::EmptyValues, "cannot quantize an empty multiset");
    std::vector<std::size_t> counts(boundaries.size() + 1, 0);
    for (double v : values) {
        const auto bin = std::lower_bound(boundaries.begin(), boundaries.end(), v) - boundaries.begin();
        ++counts[static_cast<std::size_t>(bin)];
    }
    std::vector<double> proportions(counts.size());
    const auto total = static_cast<double>(values.size());
    for (std::size_t i = 0; i < counts.size(); ++i) proportions[i] = static_cast<double>(counts[i]) / total;
    return proportions;
}

GroupValues collect_reference_values(std::span<const Flight> fleet, const ReferenceSampleOptions& options) {
    auto aircraft = group_by_aircraft(fleet);
    if (options.max_aircraft > 0 && options.max_aircraft < aircraft.size()) {
        std::mt19937_64 rng(options.seed);
        std::shuffle(aircraft.begin(), aircraft.end(), rng);
        aircraft.resize(options.max_aircraft);
    }
    GroupValues pooled;
    for (auto flights : aircraft) {
        if (options.flight_cap > 0 && flights.size() > options.flight_cap) {
            flights = flights.first(options.flight_cap);
        }
        auto values = pooled_group_values(flights);
        for (std::size_t g = 0; g < kFeatureGroupCount; ++g) {
            pooled[g].insert(pooled[g].end(), values[g].begin(), values[g].end());
        }
    }
    return pooled;
}

}  // namespace classifly
