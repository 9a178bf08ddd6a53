#pragma once

#include <unistd.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "classifly/dataset.hpp"
#include "classifly/error.hpp"
#include "classifly/types.hpp"

namespace testutil {

using classifly::Icao24;
using classifly::StateVector;

inline StateVector state(std::uint32_t icao, std::int64_t t, std::optional<double> alt = 1000.0,
                         std::optional<double> speed = 100.0, std::optional<double> heading = 90.0) {
    StateVector s;
    s.icao24 = Icao24{icao};
    s.time = t;
    s.lat = 45.0;
    s.lon = 7.0;
    s.baro_alt = alt;
    s.ground_speed = speed;
    s.heading = heading;
    s.vert_rate = 0.0;
    return s;
}

/// Straight level flight of `n` 1 Hz states starting at t0 with a small drift
/// in every channel so that all feature groups have samples.
inline classifly::Flight level_flight(std::uint32_t icao, std::int64_t t0, int n, double alt = 1000.0,
                                      double speed = 100.0, double lat0 = 45.0) {
    classifly::Flight f;
    f.icao24 = Icao24{icao};
    for (int i = 0; i < n; ++i) {
        StateVector s = state(icao, t0 + i, alt + i, speed + 0.5 * i, std::fmod(90.0 + 2.0 * i, 360.0));
        s.lat = lat0 + 0.001 * i;
        s.lon = 7.0 + 0.002 * i;
        s.vert_rate = 0.1 * i;
        f.states.push_back(s);
    }
    return f;
}

template <class F>
classifly::ErrorKind error_kind(F&& f) {
    try {
        f();
    } catch (const classifly::Error& e) {
        return e.kind();
    }
    throw std::runtime_error("expected classifly::Error");
}

/// Gaussian blobs, one per class, in `dim` dimensions.
inline classifly::Dataset blobs(int n_per_class, int classes, int dim, double spread, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, spread);
    classifly::Dataset d;
    d.X = classifly::Matrix(0, static_cast<std::size_t>(dim));
    for (int c = 0; c < classes; ++c) d.class_names.push_back("c" + std::to_string(c));
    std::vector<double> row(static_cast<std::size_t>(dim));
    for (int i = 0; i < n_per_class; ++i) {
        for (int c = 0; c < classes; ++c) {
            for (int j = 0; j < dim; ++j) row[j] = (j % classes == c ? 1.0 : 0.0) + noise(rng);
            d.X.append_row(row);
            d.y.push_back(c);
        }
    }
    return d;
}

inline std::string fixture(const std::string& name) { return std::string(CLASSIFLY_FIXTURES) + "/" + name; }

inline std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Fresh scratch directory removed on destruction.
struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("classifly_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace testutil
