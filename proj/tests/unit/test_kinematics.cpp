#include <doctest.h>

#include <cmath>
#include <random>

#include "classifly/kinematics.hpp"
#include "helpers.hpp"

using namespace classifly;
using testutil::state;

namespace {

Flight flight_of(std::vector<StateVector> states) {
    Flight f;
    f.icao24 = states.front().icao24;
    f.states = std::move(states);
    return f;
}

}  // namespace

TEST_CASE("velocity decomposition along the axes") {
    const auto k = derive_kinematics(flight_of({state(1, 0, 1000.0, 100.0, 0.0)}));
    REQUIRE(k.x_vel.size() == 1);
    CHECK(k.x_vel[0] == doctest::Approx(0.0));
    CHECK(k.y_vel[0] == 100.0);
    const auto east = derive_kinematics(flight_of({state(1, 0, 1000.0, 50.0, 90.0)}));
    CHECK(east.x_vel[0] == doctest::Approx(50.0).epsilon(1e-15));
    CHECK(std::abs(east.y_vel[0]) < 1e-12);
}

TEST_CASE("heading rate uses the shortest signed angle") {
    const auto k = derive_kinematics(flight_of({state(1, 0, 1000.0, 100.0, 350.0), state(1, 2, 1000.0, 100.0, 10.0)}));
    REQUIRE(k.heading_rate.size() == 1);
    CHECK(k.heading_rate[0] == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(shortest_angle_deg(10.0, 350.0) == doctest::Approx(-20.0));
    CHECK(shortest_angle_deg(0.0, 180.0) == 180.0);
    CHECK(shortest_angle_deg(180.0, 0.0) == 180.0);
}

TEST_CASE("constant x-acceleration is recovered exactly") {
    std::vector<StateVector> states;
    for (int t = 0; t < 50; ++t) states.push_back(state(1, t, 1000.0, 10.0 + 2.0 * t, 90.0));
    const auto k = derive_kinematics(flight_of(states));
    REQUIRE(k.x_acc.size() == 49);
    for (double a : k.x_acc) CHECK(std::abs(a - 2.0) <= 1e-9);
    for (double a : k.y_acc) CHECK(std::abs(a) <= 1e-9);
}

TEST_CASE("speed reconstruction and series lengths on random flights") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> speed(0.0, 300.0), heading(0.0, 360.0);
    std::uniform_int_distribution<int> step(1, 15);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<StateVector> states;
        std::int64_t t = 0;
        for (int i = 0; i < 40; ++i) {
            auto s = state(1, t, 1000.0 + i, speed(rng), heading(rng));
            if (i % 7 == 3) s.heading.reset();
            states.push_back(s);
            t += step(rng);
        }
        const auto f = flight_of(states);
        const auto k = derive_kinematics(f);
        std::size_t j = 0;
        for (const auto& s : states) {
            if (!s.heading || !s.ground_speed) continue;
            REQUIRE(j < k.x_vel.size());
            CHECK(std::hypot(k.x_vel[j], k.y_vel[j]) == doctest::Approx(*s.ground_speed).epsilon(1e-12));
            ++j;
        }
        CHECK(j == k.x_vel.size());

        std::size_t admissible = 0;
        double min_dt = 1e9;
        for (std::size_t i = 0; i + 1 < states.size(); ++i) {
            const auto dt = states[i + 1].time - states[i].time;
            if (states[i].heading && states[i + 1].heading && dt > 0 && dt <= 10) {
                ++admissible;
                min_dt = std::min<double>(min_dt, dt);
            }
        }
        CHECK(k.heading_rate.size() == admissible);
        CHECK(k.altitude.size() == states.size());
        CHECK(k.vert_acc.size() <= states.size() - 1);
        for (double r : k.heading_rate) {
            CHECK(r > -180.0 / min_dt);
            CHECK(r <= 180.0 / min_dt);
        }
    }
}

TEST_CASE("reversing a two-state flight negates the heading rate") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> heading(0.0, 360.0);
    for (int i = 0; i < 100; ++i) {
        const double a = heading(rng), b = heading(rng);
        const auto fwd = derive_kinematics(flight_of({state(1, 0, 1.0, 1.0, a), state(1, 3, 1.0, 1.0, b)}));
        const auto rev = derive_kinematics(flight_of({state(1, 0, 1.0, 1.0, b), state(1, 3, 1.0, 1.0, a)}));
        CHECK(fwd.heading_rate[0] == doctest::Approx(-rev.heading_rate[0]).epsilon(1e-12));
    }
}

TEST_CASE("pairs beyond max_dt contribute nothing") {
    const auto k = derive_kinematics(flight_of({state(1, 0), state(1, 11), state(1, 21), state(1, 22)}));
    CHECK(k.heading_rate.size() == 2);  // 11->21 (10 s) and 21->22
    CHECK(k.x_acc.size() == 2);
    // heading-rate samples at t=16 and t=21.5 are 5.5 s apart, so one acceleration sample
    CHECK(k.heading_acc.size() == 1);
    const auto tight = derive_kinematics(flight_of({state(1, 0), state(1, 11)}), 10.0);
    CHECK(tight.heading_rate.empty());
    CHECK(tight.vert_acc.empty());
}
