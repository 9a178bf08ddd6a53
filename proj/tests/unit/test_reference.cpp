#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "classifly/reference.hpp"
#include "helpers.hpp"

using namespace classifly;
using testutil::error_kind;

namespace {

GroupValues same_for_all(const std::vector<double>& v) {
    GroupValues g;
    for (auto& slot : g) slot = v;
    return g;
}

// Nearest-rank by its defining property: the smallest sample value x with
// q * #{v <= x} >= j * n.
double counting_quantile(const std::vector<double>& values, std::size_t j, std::size_t q) {
    std::vector<double> candidates = values;
    std::sort(candidates.begin(), candidates.end());
    for (double x : candidates) {
        const auto at_most = static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [&](double v) { return v <= x; }));
        if (at_most * q >= j * values.size()) return x;
    }
    return candidates.back();
}

std::vector<double> scan_proportions(const std::vector<double>& values, const std::vector<double>& bounds) {
    std::vector<double> counts(bounds.size() + 1, 0.0);
    for (double v : values) {
        std::size_t bin = bounds.size();
        for (std::size_t j = 0; j < bounds.size(); ++j) {
            if (v <= bounds[j]) {
                bin = j;
                break;
            }
        }
        counts[bin] += 1.0;
    }
    for (auto& c : counts) c /= static_cast<double>(values.size());
    return counts;
}

}  // namespace

TEST_CASE("bounds on 1..100 with q=10 are the deciles") {
    std::vector<double> v(100);
    std::iota(v.begin(), v.end(), 1.0);
    const auto b = learn_quantile_bounds(same_for_all(v), 10);
    CHECK(b.q() == 10);
    const auto d = b.boundaries(FeatureGroup::Duration);
    CHECK(std::vector<double>(d.begin(), d.end()) == std::vector<double>{10, 20, 30, 40, 50, 60, 70, 80, 90});
}

TEST_CASE("a constant group gives repeated boundaries") {
    const auto b = learn_quantile_bounds(same_for_all({4.2, 4.2, 4.2}), 5);
    for (auto g : kAllFeatureGroups) {
        const auto d = b.boundaries(g);
        CHECK(d.size() == 4);
        for (double x : d) CHECK(x == 4.2);
    }
}

TEST_CASE("bounds match the counting definition of nearest rank") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto [n, q] : {std::pair{10000, 10}, std::pair{997, 7}, std::pair{3, 10}}) {
        std::vector<double> v(static_cast<std::size_t>(n));
        for (auto& x : v) x = u(rng);
        const auto b = learn_quantile_bounds(same_for_all(v), q);
        const auto got = b.boundaries(FeatureGroup::HeadingAcceleration);
        for (int j = 1; j < q; ++j) {
            CAPTURE(n);
            CAPTURE(j);
            CHECK(got[static_cast<std::size_t>(j - 1)] == counting_quantile(v, static_cast<std::size_t>(j), static_cast<std::size_t>(q)));
        }
    }
}

TEST_CASE("bound learning errors") {
    CHECK(error_kind([] { learn_quantile_bounds(same_for_all({1.0}), 1); }) == ErrorKind::InvalidQ);
    auto g = same_for_all({1.0, 2.0});
    g[static_cast<std::size_t>(FeatureGroup::Heading)].clear();
    try {
        learn_quantile_bounds(g, 4);
        FAIL("expected EmptyGroup");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::EmptyGroup);
        CHECK(std::string(e.what()).find(std::string(to_string(FeatureGroup::Heading))) != std::string::npos);
    }
}

TEST_CASE("quantization examples") {
    const std::vector<double> bounds = {1.0, 2.0, 3.0};
    CHECK(quantize_proportions(std::vector{0.1, 0.5, -4.0}, bounds) == std::vector<double>{1, 0, 0, 0});
    CHECK(quantize_proportions(std::vector{1.0}, bounds) == std::vector<double>{1, 0, 0, 0});
    CHECK(quantize_proportions(std::vector{9.0, 3.0}, bounds) == std::vector<double>{0, 0, 0.5, 0.5});
    // Repeated boundaries: mass collapses into the lowest implicated bin.
    CHECK(quantize_proportions(std::vector{2.0}, std::vector{2.0, 2.0, 2.0}) == std::vector<double>{1, 0, 0, 0});
    CHECK(error_kind([&] { quantize_proportions(std::vector<double>{}, bounds); }) == ErrorKind::EmptyValues);
}

TEST_CASE("quantization matches a linear-scan counting oracle") {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<double> bounds(9);
    for (auto& b : bounds) b = n01(rng);
    std::sort(bounds.begin(), bounds.end());
    bounds[4] = bounds[3];
    std::vector<double> values(1000);
    for (auto& v : values) v = n01(rng);
    values[0] = bounds[2];
    const auto got = quantize_proportions(values, bounds);
    CHECK(got == scan_proportions(values, bounds));
    CHECK(std::accumulate(got.begin(), got.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("self-quantization is close to uniform and monotone maps leave proportions alone") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::vector<double> v(1234);
    for (auto& x : v) x = u(rng);
    const int q = 10;
    const auto b = learn_quantile_bounds(same_for_all(v), q);
    const auto bounds = b.boundaries(FeatureGroup::Altitude);
    const auto p = quantize_proportions(v, bounds);
    for (double x : p) CHECK(std::abs(x - 1.0 / q) <= 1.0 / static_cast<double>(v.size()) + 1e-12);

    std::vector<double> tv, tb;
    for (double x : v) tv.push_back(std::exp(x));
    for (double x : bounds) tb.push_back(std::exp(x));
    CHECK(quantize_proportions(tv, tb) == p);
}

TEST_CASE("bounds JSON round trip and validation") {
    std::vector<double> v(50);
    std::iota(v.begin(), v.end(), 0.5);
    const auto b = learn_quantile_bounds(same_for_all(v), 4);
    const auto doc = b.to_json();
    CHECK(doc.at("q") == 4);
    CHECK(doc.at("groups").size() == kFeatureGroupCount);
    CHECK(QuantileBounds::from_json(nlohmann::json::parse(doc.dump())) == b);

    auto decreasing = doc;
    decreasing["groups"]["Altitude"] = {3.0, 2.0, 1.0};
    CHECK(error_kind([&] { QuantileBounds::from_json(decreasing); }) == ErrorKind::MalformedFile);
    auto short_group = doc;
    short_group["groups"]["Heading"] = {1.0};
    CHECK(error_kind([&] { QuantileBounds::from_json(short_group); }) == ErrorKind::MalformedFile);
    auto missing = doc;
    missing["groups"].erase("Duration");
    CHECK(error_kind([&] { QuantileBounds::from_json(missing); }) == ErrorKind::MalformedFile);
}

TEST_CASE("reference sample caps flights per aircraft") {
    std::vector<Flight> fleet;
    for (int i = 0; i < 30; ++i) fleet.push_back(testutil::level_flight(0xa00001, 10000 * i, 5));
    for (int i = 0; i < 3; ++i) fleet.push_back(testutil::level_flight(0xa00002, 10000 * i, 5));
    ReferenceSampleOptions opts;
    const auto values = collect_reference_values(fleet, opts);
    CHECK(values[static_cast<std::size_t>(FeatureGroup::Duration)].size() == 28);
    CHECK(values[static_cast<std::size_t>(FeatureGroup::Altitude)].size() == 28 * 5);

    opts.max_aircraft = 1;
    opts.seed = 1;
    const auto one = collect_reference_values(fleet, opts);
    const auto n = one[static_cast<std::size_t>(FeatureGroup::Duration)].size();
    CHECK((n == 25 || n == 3));
    CHECK(collect_reference_values(fleet, opts) == one);
}
