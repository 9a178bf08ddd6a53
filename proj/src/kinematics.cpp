#include "classifly/kinematics.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace classifly {
namespace {

// A sample anchored at a position in the flight. For per-state values `slot`
// is the state index; for pair differences it is the index of the pair's
// first state. Two samples are adjacent when their slots differ by one.
struct Sample {
    std::size_t slot;
    double time;
    double value;
};

// Differences adjacent samples, keeping pairs with 0 < dt <= max_dt.
template <typename Diff>
std::vector<Sample> difference(const std::vector<Sample>& series, double max_dt, Diff diff) {
    std::vector<Sample> out;
    for (std::size_t i = 1; i < series.size(); ++i) {
        const auto& a = series[i - 1];
        const auto& b = series[i];
        if (b.slot != a.slot + 1) continue;
        const double dt = b.time - a.time;
        if (!(dt > 0.0) || dt > max_dt) continue;
        out.push_back({a.slot, 0.5 * (a.time + b.time), diff(a.value, b.value) / dt});
    }
    return out;
}

std::vector<double> values_of(const std::vector<Sample>& series) {
    std::vector<double> out;
    out.reserve(series.size());
    for (const auto& s : series) out.push_back(s.value);
    return out;
}

}  // namespace

double shortest_angle_deg(double from_deg, double to_deg) noexcept {
    double d = std::fmod(to_deg - from_deg, 360.0);
    if (d > 180.0) d -= 360.0;
    if (d <= -180.0) d += 360.0;
    return d;
}

KinematicSeries derive_kinematics(const Flight& flight, double max_dt_s) {
    KinematicSeries k;
    std::vector<Sample> x_vel, y_vel, heading, vert_rate;
    constexpr double kDegToRad = std::numbers::pi / 180.0;

    for (std::size_t i = 0; i < flight.states.size(); ++i) {
        const auto& s = flight.states[i];
        const auto t = static_cast<double>(s.time);
        if (s.baro_alt) k.altitude.push_back(*s.baro_alt);
        if (s.heading) {
            k.heading.push_back(*s.heading);
            heading.push_back({i, t, *s.heading});
        }
        if (s.vert_rate) {
            k.vert_rate.push_back(*s.vert_rate);
            vert_rate.push_back({i, t, *s.vert_rate});
        }
        if (s.ground_speed && s.heading) {
            const double rad = *s.heading * kDegToRad;
            x_vel.push_back({i, t, *s.ground_speed * std::sin(rad)});
            y_vel.push_back({i, t, *s.ground_speed * std::cos(rad)});
        }
    }

    const auto linear = [](double a, double b) { return b - a; };
    const auto heading_rate = difference(heading, max_dt_s, shortest_angle_deg);

    k.x_vel = values_of(x_vel);
    k.y_vel = values_of(y_vel);
    k.heading_rate = values_of(heading_rate);
    k.x_acc = values_of(difference(x_vel, max_dt_s, linear));
    k.y_acc = values_of(difference(y_vel, max_dt_s, linear));
    k.vert_acc = values_of(difference(vert_rate, max_dt_s, linear));
    k.heading_acc = values_of(difference(heading_rate, max_dt_s, linear));
    return k;
}

}  // namespace classifly
