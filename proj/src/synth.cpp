#include "classifly/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include "classifly/error.hpp"

namespace classifly {
namespace {

constexpr std::int64_t kEpoch = 1514764800;  // 2018-01-01T00:00:00Z
constexpr double kMetersPerDegree = 111'320.0;
constexpr double kDegToRad = std::numbers::pi / 180.0;

// Synthetic addresses are spread over a few national blocks so that country
// attribution has something to find.
constexpr std::uint32_t kAddressBases[] = {0xa00000, 0x3c0000, 0x400000, 0x380000, 0x840000, 0x7c0000};
constexpr std::uint32_t kAddressBaseCount = std::size(kAddressBases);

double wrap_heading(double h) {
    h = std::fmod(h, 360.0);
    if (h < 0.0) h += 360.0;
    if (h >= 360.0) h = 0.0;
    return h;
}

class Sampler {
public:
    explicit Sampler(std::mt19937_64& rng) : rng_(rng) {}
    double uniform(double lo, double hi) {
        if (!(lo < hi)) return lo;
        return std::uniform_real_distribution<double>(lo, hi)(rng_);
    }
    double uniform(ValueRange r) { return uniform(r.lo, r.hi); }
    double normal(double sd) { return sd > 0.0 ? std::normal_distribution<double>(0.0, sd)(rng_) : 0.0; }
    bool chance(double p) { return uniform(0.0, 1.0) < p; }
    std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

private:
    std::mt19937_64& rng_;
};

struct FlightPlan {
    PathTemplate path;
    std::size_t samples;
    double ground_alt;
    double cruise_alt;
    double final_alt;
    double speed;
    double climb;
    double turn;
    ValueRange leg;
    double accel_sd;
    double lat;
    double lon;
};

void fly(const FlightPlan& plan, const Jitter& jitter, Icao24 icao, std::int64_t t0, Sampler& s,
         std::vector<StateVector>& out) {
    double alt = plan.ground_alt;
    double speed = 0.55 * plan.speed;
    double heading = s.uniform(0.0, 360.0);
    double lat = plan.lat;
    double lon = plan.lon;
    double turn_rate = 0.0;

    double target_alt = plan.cruise_alt;
    double target_speed_scale = 1.0;
    double manoeuvre_rate = 0.0;
    double leg_left = s.uniform(plan.leg);
    double turned = 0.0;
    bool turning = false;
    const double orbit_sign = s.chance(0.5) ? 1.0 : -1.0;

    for (std::size_t step = 0; step < plan.samples; ++step) {
        const std::size_t remaining = plan.samples - 1 - step;

        // Vertical profile: climb towards the target, then a forced descent
        // that lands exactly on final_alt at the last sample.
        double vr = 0.0;
        bool descending = false;
        if (remaining > 0) {
            const double descent_needed = (alt - plan.final_alt) / static_cast<double>(remaining);
            if (descent_needed >= plan.climb) {
                vr = -descent_needed;
                descending = true;
            } else if (alt < target_alt - plan.climb) {
                vr = plan.climb;
            } else if (alt > target_alt + plan.climb) {
                vr = -plan.climb;
            } else {
                vr = 0.2 * (target_alt - alt);
            }
        }

        const double progress = std::clamp((alt - plan.ground_alt) / std::max(1.0, plan.cruise_alt - plan.ground_alt), 0.0, 1.0);
        const double target_speed = plan.speed * target_speed_scale * (0.6 + 0.4 * progress);

        StateVector sv;
        sv.icao24 = icao;
        sv.time = t0 + static_cast<std::int64_t>(step);
        sv.lat = std::clamp(lat + s.normal(jitter.position_deg), -90.0, 90.0);
        sv.lon = std::clamp(lon + s.normal(jitter.position_deg), -180.0, 180.0);
        sv.baro_alt = alt + s.normal(jitter.altitude_m);
        sv.ground_speed = std::max(0.0, speed + s.normal(jitter.speed_mps));
        sv.heading = wrap_heading(heading + s.normal(jitter.heading_deg));
        sv.vert_rate = vr + s.normal(jitter.vert_rate_mps);
        out.push_back(sv);

        switch (plan.path) {
            case PathTemplate::Straight:
                turn_rate = 0.95 * turn_rate + s.normal(plan.turn * 0.3122);
                break;
            case PathTemplate::Circling:
                if (!descending && alt >= 0.8 * plan.cruise_alt) {
                    turn_rate = orbit_sign * plan.turn + s.normal(0.05);
                } else {
                    turn_rate = 0.95 * turn_rate + s.normal(0.02);
                }
                break;
            case PathTemplate::Sortie:
                if ((leg_left -= 1.0) <= 0.0) {
                    leg_left = s.uniform(plan.leg);
                    manoeuvre_rate = s.uniform(-plan.turn, plan.turn);
                    target_speed_scale = s.uniform(0.7, 1.15);
                    target_alt = plan.cruise_alt * s.uniform(0.5, 1.0);
                }
                turn_rate += std::clamp(manoeuvre_rate - turn_rate, -1.0, 1.0);
                break;
            case PathTemplate::Shuttle:
                if (turning) {
                    turn_rate = orbit_sign * plan.turn;
                    turned += plan.turn;
                    if (turned >= 180.0) {
                        turning = false;
                        turned = 0.0;
                        leg_left = s.uniform(plan.leg);
                    }
                } else {
                    turn_rate = 0.9 * turn_rate + s.normal(0.02);
                    if ((leg_left -= 1.0) <= 0.0 && !descending) turning = true;
                }
                break;
        }

        speed += std::clamp(0.05 * (target_speed - speed), -3.0, 3.0) + s.normal(plan.accel_sd);
        speed = std::max(speed, 0.3 * plan.speed);
        heading = wrap_heading(heading + turn_rate);
        lat += speed * std::cos(heading * kDegToRad) / kMetersPerDegree;
        lon += speed * std::sin(heading * kDegToRad) / (kMetersPerDegree * std::cos(lat * kDegToRad));
        lat = std::clamp(lat, -89.0, 89.0);
        if (lon > 180.0) lon -= 360.0;
        if (lon < -180.0) lon += 360.0;
        alt += vr;
    }
}

nlohmann::json range_json(ValueRange r) { return nlohmann::json::array({r.lo, r.hi}); }

ValueRange range_from(const nlohmann::json& j) {
    const auto v = j.get<std::vector<double>>();
    if (v.size() != 2) throw Error(ErrorKind::InvalidArchetype, "ranges are [lo, hi] pairs");
    return {v[0], v[1]};
}

}  // namespace

std::string_view to_string(PathTemplate path) noexcept {
    switch (path) {
        case PathTemplate::Straight: return "straight";
        case PathTemplate::Circling: return "circling";
        case PathTemplate::Sortie: return "sortie";
        case PathTemplate::Shuttle: return "shuttle";
    }
    return "unknown";
}

std::optional<PathTemplate> parse_path_template(std::string_view name) noexcept {
    for (auto p : {PathTemplate::Straight, PathTemplate::Circling, PathTemplate::Sortie, PathTemplate::Shuttle}) {
        if (to_string(p) == name) return p;
    }
    return std::nullopt;
}

FleetConfig default_fleet_config() {
    using C = Category;
    using P = PathTemplate;
    FleetConfig config;
    // Durations are time-compressed relative to real flights to keep the
    // corpus small; climb rates are scaled to match.
    config.archetypes = {
        {C::Business, P::Straight, {300, 500}, {11500, 13500}, {200, 230}, {70, 90}, {0.08, 0.15}, {60, 120}, 0.15},
        {C::Commercial, P::Straight, {400, 600}, {9500, 11500}, {220, 250}, {60, 80}, {0.05, 0.1}, {60, 120}, 0.1},
        {C::Fighter, P::Sortie, {200, 400}, {4000, 9000}, {200, 300}, {60, 100}, {3, 6}, {15, 45}, 1.5},
        {C::SmallUtility, P::Straight, {150, 300}, {900, 1800}, {55, 75}, {8, 14}, {0.2, 0.4}, {60, 120}, 0.3},
        {C::Surveillance, P::Circling, {450, 650}, {2800, 5000}, {90, 120}, {20, 30}, {1.5, 3}, {60, 120}, 0.2},
        {C::Tanker, P::Shuttle, {400, 600}, {7000, 8500}, {180, 210}, {40, 55}, {1.2, 1.8}, {120, 200}, 0.15},
        {C::Trainer, P::Shuttle, {150, 300}, {500, 1200}, {45, 60}, {6, 10}, {2.5, 3.5}, {40, 80}, 0.3},
        {C::Transport, P::Straight, {350, 550}, {6000, 7500}, {150, 175}, {35, 50}, {0.08, 0.15}, {60, 120}, 0.15},
    };
    return config;
}

void FleetConfig::validate() const {
    const auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidArchetype, what); };
    if (archetypes.empty()) fail("fleet config has no archetypes");
    if (!(atypical_flight_rate >= 0.0 && atypical_flight_rate <= 1.0)) fail("atypical_flight_rate must lie in [0, 1]");
    if (!(gap_s.lo > 600.0) || gap_s.hi < gap_s.lo) fail("gap_s must exceed 600 s and be ordered");
    std::vector<Category> seen;
    for (const auto& a : archetypes) {
        const std::string name(to_string(a.category));
        if (std::find(seen.begin(), seen.end(), a.category) != seen.end()) fail("duplicate archetype " + name);
        seen.push_back(a.category);
        const auto check = [&](ValueRange r, const char* field, double min_lo) {
            if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.hi < r.lo || r.lo < min_lo) {
                fail(name + "." + field + " is not a valid range");
            }
        };
        check(a.duration_s, "duration_s", 1.0);
        check(a.cruise_alt_m, "cruise_alt_m", 1.0);
        check(a.speed_mps, "speed_mps", 1e-3);
        check(a.climb_rate_mps, "climb_rate_mps", 1e-3);
        check(a.turn_rate_dps, "turn_rate_dps", 0.0);
        check(a.leg_s, "leg_s", 1.0);
        if (!(a.accel_sd_mps2 >= 0.0)) fail(name + ".accel_sd_mps2 must be non-negative");
    }
}

nlohmann::json FleetConfig::to_json() const {
    nlohmann::json list = nlohmann::json::array();
    for (const auto& a : archetypes) {
        list.push_back({{"category", std::string(classifly::to_string(a.category))},
                        {"path", std::string(classifly::to_string(a.path))},
                        {"duration_s", range_json(a.duration_s)},
                        {"cruise_alt_m", range_json(a.cruise_alt_m)},
                        {"speed_mps", range_json(a.speed_mps)},
                        {"climb_rate_mps", range_json(a.climb_rate_mps)},
                        {"turn_rate_dps", range_json(a.turn_rate_dps)},
                        {"leg_s", range_json(a.leg_s)},
                        {"accel_sd_mps2", a.accel_sd_mps2}});
    }
    return {{"atypical_flight_rate", atypical_flight_rate},
            {"gap_s", range_json(gap_s)},
            {"jitter", {{"altitude_m", jitter.altitude_m},
                        {"speed_mps", jitter.speed_mps},
                        {"heading_deg", jitter.heading_deg},
                        {"vert_rate_mps", jitter.vert_rate_mps},
                        {"position_deg", jitter.position_deg}}},
            {"archetypes", list}};
}

FleetConfig FleetConfig::from_json(const nlohmann::json& doc) {
    try {
        FleetConfig config;
        const FleetConfig defaults;
        config.atypical_flight_rate = doc.value("atypical_flight_rate", defaults.atypical_flight_rate);
        if (doc.contains("gap_s")) config.gap_s = range_from(doc.at("gap_s"));
        if (doc.contains("jitter")) {
            const auto& j = doc.at("jitter");
            config.jitter.altitude_m = j.value("altitude_m", defaults.jitter.altitude_m);
            config.jitter.speed_mps = j.value("speed_mps", defaults.jitter.speed_mps);
            config.jitter.heading_deg = j.value("heading_deg", defaults.jitter.heading_deg);
            config.jitter.vert_rate_mps = j.value("vert_rate_mps", defaults.jitter.vert_rate_mps);
            config.jitter.position_deg = j.value("position_deg", defaults.jitter.position_deg);
        }
        for (const auto& a : doc.at("archetypes")) {
            CategoryArchetype arch;
            const auto category_name = a.at("category").get<std::string>();
            const auto category = parse_category(category_name);
            if (!category) throw Error(ErrorKind::InvalidArchetype, "unknown category '" + category_name + "'");
            const auto path_name = a.at("path").get<std::string>();
            const auto path = parse_path_template(path_name);
            if (!path) throw Error(ErrorKind::InvalidArchetype, "unknown path template '" + path_name + "'");
            arch.category = *category;
            arch.path = *path;
            arch.duration_s = range_from(a.at("duration_s"));
            arch.cruise_alt_m = range_from(a.at("cruise_alt_m"));
            arch.speed_mps = range_from(a.at("speed_mps"));
            arch.climb_rate_mps = range_from(a.at("climb_rate_mps"));
            arch.turn_rate_dps = range_from(a.at("turn_rate_dps"));
            arch.leg_s = range_from(a.at("leg_s"));
            arch.accel_sd_mps2 = a.at("accel_sd_mps2").get<double>();
            config.archetypes.push_back(arch);
        }
        config.validate();
        return config;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::InvalidArchetype, std::string("archetype config: ") + e.what());
    }
}

SyntheticFleet generate_fleet(const FleetConfig& config, std::size_t aircraft_per_category,
                              std::size_t flights_per_aircraft, std::uint64_t seed, std::uint32_t address_offset) {
    config.validate();
    if (aircraft_per_category < 1 || flights_per_aircraft < 1) {
        throw Error(ErrorKind::InvalidArgument, "aircraft and flight counts must be at least 1");
    }
    SyntheticFleet fleet;
    const std::size_t n_arch = config.archetypes.size();
    std::uint32_t index = 0;
    for (std::size_t a = 0; a < n_arch; ++a) {
        const auto& own = config.archetypes[a];
        for (std::size_t k = 0; k < aircraft_per_category; ++k, ++index) {
            const Icao24 icao{kAddressBases[index % kAddressBaseCount] + 0x1000 + address_offset +
                              index / kAddressBaseCount};
            fleet.truth.emplace_back(icao, own.category);

            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), index,
                              address_offset};
            std::mt19937_64 rng(seq);
            Sampler s(rng);
            const double home_lat = s.uniform(35.0, 55.0);
            const double home_lon = s.uniform(-5.0, 25.0);
            const double own_alt = s.uniform(own.cruise_alt_m);
            const double own_speed = s.uniform(own.speed_mps);

            std::int64_t t = kEpoch + static_cast<std::int64_t>(s.uniform(0.0, 86400.0));
            for (std::size_t f = 0; f < flights_per_aircraft; ++f) {
                const CategoryArchetype* arch = &own;
                if (n_arch > 1 && s.chance(config.atypical_flight_rate)) {
                    std::size_t other = s.index(n_arch - 1);
                    if (other >= a) ++other;
                    arch = &config.archetypes[other];
                }
                FlightPlan plan;
                plan.path = arch->path;
                plan.samples = static_cast<std::size_t>(std::llround(s.uniform(arch->duration_s))) + 1;
                plan.ground_alt = s.uniform(30.0, 300.0);
                plan.final_alt = s.uniform(200.0, 600.0);
                if (arch == &own) {
                    plan.cruise_alt = std::clamp(own_alt * (1.0 + s.normal(0.03)), own.cruise_alt_m.lo, own.cruise_alt_m.hi);
                    plan.speed = std::clamp(own_speed * (1.0 + s.normal(0.03)), own.speed_mps.lo, own.speed_mps.hi);
                } else {
                    plan.cruise_alt = s.uniform(arch->cruise_alt_m);
                    plan.speed = s.uniform(arch->speed_mps);
                }
                plan.climb = s.uniform(arch->climb_rate_mps);
                plan.turn = s.uniform(arch->turn_rate_dps);
                plan.leg = arch->leg_s;
                plan.accel_sd = arch->accel_sd_mps2;
                plan.lat = home_lat + s.uniform(-0.2, 0.2);
                plan.lon = home_lon + s.uniform(-0.2, 0.2);
                fly(plan, config.jitter, icao, t, s, fleet.states);
                t = fleet.states.back().time + static_cast<std::int64_t>(std::ceil(s.uniform(config.gap_s)));
            }
        }
    }
    std::stable_sort(fleet.states.begin(), fleet.states.end(), [](const StateVector& x, const StateVector& y) {
        if (x.icao24 != y.icao24) return x.icao24 < y.icao24;
        return x.time < y.time;
    });
    std::sort(fleet.truth.begin(), fleet.truth.end());
    return fleet;
}

void write_truth(std::ostream& out, std::span<const std::pair<Icao24, Category>> truth) {
    out << "icao24,category\n";
    for (const auto& [icao, category] : truth) out << icao.str() << ',' << to_string(category) << '\n';
}

}  // namespace classifly
