#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path path;
    Scratch() {
        static int counter = 0;
        path = fs::temp_directory_path() / ("classifly_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~Scratch() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const char* name) const { return (path / name).string(); }
};

std::string fixture(const char* name) { return std::string(CLASSIFLY_FIXTURES) + "/" + name; }

std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int code = -1;
    std::string err;
};

// Runs the CLI with stdout discarded and stderr captured into a file.
Run run(const Scratch& dir, const std::string& args) {
    const auto err_path = dir.file("stderr.txt");
    const std::string cmd = std::string("'") + CLASSIFLY_CLI + "' " + args + " > /dev/null 2> '" + err_path + "'";
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err_path);
    return r;
}

}  // namespace

TEST_CASE("usage errors exit 1 with a JSON error on stderr") {
    Scratch dir;
    const auto r = run(dir, "train --model-type forest --input x --registry y --out z");
    CHECK(r.code == 1);
    const auto doc = nlohmann::json::parse(r.err.substr(r.err.find('{')));
    CHECK(doc["error"]["code"] == 1);

    CHECK(run(dir, "no-such-command").code == 1);
    CHECK(run(dir, "segment --input a.csv").code == 1);  // --out missing
}

TEST_CASE("evaluate with a missing model fails without writing output") {
    Scratch dir;
    const auto out = dir.file("report.json");
    const auto r = run(dir, "evaluate --model '" + dir.file("absent.json") + "' --input '" + fixture("three_rows.csv") +
                                "' --registry '" + fixture("registry_a.csv") + "' --out '" + out + "'");
    CHECK(r.code != 0);
    CHECK_FALSE(fs::exists(out));
    const auto doc = nlohmann::json::parse(r.err.substr(r.err.find('{')));
    CHECK(doc["error"].contains("message"));
}

TEST_CASE("export-geojson writes one line string per flight") {
    Scratch dir;
    const auto out = dir.file("f.geojson");
    const auto r = run(dir, "export-geojson --input '" + fixture("one_flight.csv") + "' --out '" + out + "'");
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::json::parse(slurp(out));
    CHECK(doc["type"] == "FeatureCollection");
    REQUIRE(doc["features"].size() == 1);
    CHECK(doc["features"][0]["geometry"]["type"] == "LineString");
    CHECK(doc["features"][0]["properties"]["icao24"] == "3c6444");
    CHECK(doc["features"][0]["geometry"]["coordinates"].size() == 3);
}

TEST_CASE("ingest and segment through the CLI") {
    Scratch dir;
    const auto clean = dir.file("clean.csv"), flights = dir.file("flights.csv");
    REQUIRE(run(dir, "ingest --input '" + fixture("three_rows.csv") + "' --out '" + clean + "'").code == 0);
    REQUIRE(run(dir, "segment --input '" + clean + "' --out '" + flights + "'").code == 0);
    CHECK(slurp(flights).rfind("icao24,flight,time,", 0) == 0);
    const auto bad = dir.file("bad.csv");
    std::ofstream(bad) << "wrong header\n";
    CHECK(run(dir, "ingest --input '" + bad + "' --out '" + dir.file("x.csv") + "'").code == 2);
}
