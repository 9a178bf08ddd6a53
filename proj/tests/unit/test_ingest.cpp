#include <doctest.h>

#include <random>
#include <sstream>

#include "classifly/ingest.hpp"
#include "helpers.hpp"

using namespace classifly;
using testutil::error_kind;
using testutil::state;

namespace {

const std::string kHeader = std::string(kStateVectorHeader) + "\n";

ParseResult parse(const std::string& text, bool strict = false) {
    std::istringstream in(text);
    return parse_state_vectors(in, strict);
}

// Split positions found by walking the sequence once and checking the two
// arrival conditions on every adjacent pair.
std::vector<std::vector<std::int64_t>> scan_oracle(const std::vector<StateVector>& states) {
    std::vector<std::vector<std::int64_t>> groups;
    std::vector<std::int64_t> current;
    for (std::size_t i = 0; i < states.size(); ++i) {
        current.push_back(states[i].time);
        const bool last = i + 1 == states.size();
        if (last) break;
        const bool long_gap = states[i + 1].time - states[i].time > 600;
        const bool low = states[i].baro_alt.has_value() && *states[i].baro_alt < 2500.0;
        if (long_gap && low) {
            groups.push_back(current);
            current.clear();
        }
    }
    if (!current.empty()) groups.push_back(current);
    return groups;
}

std::vector<std::vector<std::int64_t>> times_of(const std::vector<Flight>& flights) {
    std::vector<std::vector<std::int64_t>> out;
    for (const auto& f : flights) {
        std::vector<std::int64_t> t;
        for (const auto& s : f.states) t.push_back(s.time);
        out.push_back(t);
    }
    return out;
}

}  // namespace

TEST_CASE("header-only input parses to nothing") {
    const auto r = parse(kHeader);
    CHECK(r.states.empty());
    CHECK(r.rejected == 0);
}

TEST_CASE("latitude out of range is skipped and counted") {
    const auto r = parse(kHeader + "abcdef,100,91.0,8.0,1000,100,90,0\nabcdef,101,45.0,8.0,1000,100,90,0\n");
    CHECK(r.states.size() == 1);
    CHECK(r.rejected == 1);
}

TEST_CASE("row validation rules") {
    const std::vector<std::string> bad = {
        "abcde,100,45,8,1000,100,90,0",      // short address
        "abcdeg,100,45,8,1000,100,90,0",     // non-hex
        "abcdef,1.5,45,8,1000,100,90,0",     // fractional time
        "abcdef,100,45,,1000,100,90,0",      // lat without lon
        "abcdef,100,45,181,1000,100,90,0",   // lon out of range
        "abcdef,100,45,8,1000,-1,90,0",      // negative speed
        "abcdef,100,45,8,nan,100,90,0",      // non-finite
        "abcdef,100,45,8,1000,100,90",       // missing column
    };
    for (const auto& row : bad) {
        CAPTURE(row);
        const auto r = parse(kHeader + row + "\n");
        CHECK(r.states.empty());
        CHECK(r.rejected == 1);
    }
}

TEST_CASE("strict mode stops at the first bad row with its line number") {
    try {
        parse(kHeader + "abcdef,100,45,8,1000,100,90,0\nabcdef,101,91,8,1000,100,90,0\n", true);
        FAIL("expected MalformedRow");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedRow);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("wrong header is rejected") {
    CHECK(error_kind([] { parse("icao24,time\nabcdef,1\n"); }) == ErrorKind::MalformedHeader);
    CHECK(error_kind([] { parse(""); }) == ErrorKind::MalformedHeader);
}

TEST_CASE("three-row fixture parses field by field") {
    auto in = std::ifstream(testutil::fixture("three_rows.csv"));
    const auto r = parse_state_vectors(in);
    REQUIRE(r.states.size() == 3);
    CHECK(r.rejected == 0);

    const auto& a = r.states[0];
    CHECK(a.icao24.str() == "4b1805");
    CHECK(a.time == 1514764800);
    CHECK(*a.lat == 47.4582);
    CHECK(*a.lon == 8.5556);
    CHECK(*a.baro_alt == 426.72);
    CHECK(*a.ground_speed == 0.0);
    CHECK(*a.heading == 180.5);
    CHECK_FALSE(a.vert_rate.has_value());

    const auto& b = r.states[1];
    CHECK(b.icao24.str() == "4b1805");
    CHECK(b.time == 1514764801);
    CHECK(*b.ground_speed == 12.5);
    CHECK(*b.heading == 0.0);  // 360 normalizes to 0
    CHECK(*b.vert_rate == 1.3);

    const auto& c = r.states[2];
    CHECK(c.icao24.str() == "a0b1c2");
    CHECK_FALSE(c.lat.has_value());
    CHECK_FALSE(c.lon.has_value());
    CHECK_FALSE(c.baro_alt.has_value());
    CHECK_FALSE(c.ground_speed.has_value());
    CHECK_FALSE(c.heading.has_value());
    CHECK_FALSE(c.vert_rate.has_value());
}

TEST_CASE("state vectors survive a write/parse round trip") {
    std::vector<StateVector> states = {state(0xabc123, 5, 1234.5678901234), state(0xabc123, 6, std::nullopt)};
    states[1].lat.reset();
    states[1].lon.reset();
    std::ostringstream out;
    write_state_vectors(out, states);
    const auto r = parse(out.str());
    CHECK(r.rejected == 0);
    CHECK(r.states == states);
}

TEST_CASE("segmentation examples") {
    SUBCASE("single state is one zero-length flight") {
        const auto flights = segment_flights(std::vector{state(1, 10)});
        REQUIRE(flights.size() == 1);
        CHECK(flights[0].duration() == 0);
    }
    SUBCASE("long gap at low altitude splits") {
        const auto flights = segment_flights(std::vector{state(1, 0, 1000.0), state(1, 660, 1000.0)});
        CHECK(flights.size() == 2);
    }
    SUBCASE("long gap at cruise altitude does not split") {
        const auto flights = segment_flights(std::vector{state(1, 0, 3000.0), state(1, 660, 1000.0)});
        CHECK(flights.size() == 1);
    }
    SUBCASE("a gap of exactly 600 s does not split") {
        CHECK(segment_flights(std::vector{state(1, 0, 100.0), state(1, 600, 100.0)}).size() == 1);
        CHECK(segment_flights(std::vector{state(1, 0, 100.0), state(1, 601, 100.0)}).size() == 2);
    }
    SUBCASE("altitude exactly at the threshold does not split") {
        CHECK(segment_flights(std::vector{state(1, 0, 2500.0), state(1, 700, 100.0)}).size() == 1);
    }
    SUBCASE("missing altitude does not split") {
        CHECK(segment_flights(std::vector{state(1, 0, std::nullopt), state(1, 5000, 100.0)}).size() == 1);
    }
    SUBCASE("hard gap splits regardless of altitude") {
        SegmentOptions opts;
        opts.hard_gap_s = 3600;
        CHECK(segment_flights(std::vector{state(1, 0, 9000.0), state(1, 3601, 9000.0)}, opts).size() == 2);
        CHECK(segment_flights(std::vector{state(1, 0, 9000.0), state(1, 3600, 9000.0)}, opts).size() == 1);
    }
    SUBCASE("empty input gives no flights") { CHECK(segment_flights(std::vector<StateVector>{}).empty()); }
}

TEST_CASE("segmentation preconditions") {
    CHECK(error_kind([] { segment_flights(std::vector{state(1, 5), state(1, 5)}); }) == ErrorKind::UnsortedInput);
    CHECK(error_kind([] { segment_flights(std::vector{state(1, 5), state(1, 4)}); }) == ErrorKind::UnsortedInput);
    CHECK(error_kind([] { segment_flights(std::vector{state(1, 5), state(2, 6)}); }) == ErrorKind::MixedAircraft);
}

TEST_CASE("segmentation matches the scan oracle and its invariants on random sequences") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> length(1, 60);
    std::uniform_int_distribution<int> gap_kind(0, 3);
    std::uniform_real_distribution<double> alt(0.0, 5000.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<StateVector> states;
        std::int64_t t = 1000;
        const int n = length(rng);
        for (int i = 0; i < n; ++i) {
            std::optional<double> a = alt(rng);
            if (gap_kind(rng) == 0) a.reset();
            states.push_back(state(7, t, a));
            const int kind = gap_kind(rng);
            t += kind == 0 ? 601 + static_cast<int>(rng() % 2000) : kind == 1 ? 600 : 1 + static_cast<int>(rng() % 10);
        }
        const auto flights = segment_flights(states);
        REQUIRE(times_of(flights) == scan_oracle(states));

        std::vector<StateVector> joined;
        for (const auto& f : flights) joined.insert(joined.end(), f.states.begin(), f.states.end());
        CHECK(joined == states);
        for (std::size_t k = 0; k + 1 < flights.size(); ++k) {
            const auto& last = flights[k].states.back();
            CHECK(flights[k + 1].states.front().time - last.time > 600);
            CHECK(*last.baro_alt < 2500.0);
        }
    }
}

TEST_CASE("fleet segmentation sorts, drops duplicate timestamps and groups by aircraft") {
    std::vector<StateVector> mixed = {state(2, 10), state(1, 20, 500.0), state(1, 10), state(2, 10, 7.0),
                                      state(1, 1000)};
    const auto seg = segment_fleet(mixed);
    CHECK(seg.duplicates_dropped == 1);
    REQUIRE(seg.flights.size() == 3);
    CHECK(seg.flights[0].icao24 == Icao24{1});
    CHECK(seg.flights[0].states.size() == 2);
    CHECK(seg.flights[1].states.size() == 1);
    CHECK(seg.flights[2].icao24 == Icao24{2});
    CHECK(*seg.flights[2].states[0].baro_alt == 1000.0);  // first occurrence kept

    const auto groups = group_by_aircraft(seg.flights);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].size() == 2);
    CHECK(groups[1].size() == 1);
}

TEST_CASE("flight files round-trip exactly") {
    const auto seg = segment_fleet({state(1, 0, 123.456789012345), state(1, 700), state(3, 5)});
    std::ostringstream out;
    write_flights(out, seg.flights);
    std::istringstream in(out.str());
    CHECK(read_flights(in) == seg.flights);
}

TEST_CASE("flight files are validated on read") {
    std::istringstream wrong_header(std::string(kStateVectorHeader) + "\n");
    CHECK(error_kind([&] { read_flights(wrong_header); }) == ErrorKind::MalformedHeader);
    std::istringstream bad_ordinal(std::string(kFlightHeader) + "\nabcdef,x,1,45,7,1,1,1,1\n");
    CHECK(error_kind([&] { read_flights(bad_ordinal); }) == ErrorKind::MalformedRow);
}
