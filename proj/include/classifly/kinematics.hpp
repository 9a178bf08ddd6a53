#pragma once

#include <vector>

#include "classifly/types.hpp"

namespace classifly {

/// Per-flight value series feeding the state-vector feature groups.
/// Pass-through channels hold one entry per state carrying the field; derived
/// channels hold one entry per admissible consecutive pair.
struct KinematicSeries {
    std::vector<double> altitude;      // m
    std::vector<double> heading;       // deg
    std::vector<double> vert_rate;     // m/s
    std::vector<double> x_vel;         // m/s, east
    std::vector<double> y_vel;         // m/s, north
    std::vector<double> heading_rate;  // deg/s
    std::vector<double> x_acc;         // m/s^2
    std::vector<double> y_acc;         // m/s^2
    std::vector<double> vert_acc;      // m/s^2
    std::vector<double> heading_acc;   // deg/s^2
};

/// Signed shortest rotation from `from_deg` to `to_deg`, in (-180, 180].
double shortest_angle_deg(double from_deg, double to_deg) noexcept;

/// Velocity components come from the broadcast speed and heading (heading 0 is
/// north, clockwise positive, x east, y north). Rates and accelerations are
/// finite differences between adjacent states; a pair only contributes when
/// both ends carry the field and 0 < dt <= max_dt_s. Heading-rate samples sit
/// at pair midpoints, so heading acceleration differences them over the
/// midpoint spacing.
KinematicSeries derive_kinematics(const Flight& flight, double max_dt_s = 10.0);

}  // namespace classifly
