// Command-line front end. Talks to the library through the C interface only.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "classifly/classifly.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Failure {
    int code;
    std::string kind;
    std::string message;
};

[[noreturn]] void fail(int code, std::string kind, std::string message) {
    throw Failure{code, std::move(kind), std::move(message)};
}

void check(cf_status status) {
    if (status != CF_OK) fail(status, cf_last_error_kind(), cf_last_error_message());
}

template <class T, void (*Free)(T*)>
struct Deleter {
    void operator()(T* p) const { Free(p); }
};
using States = std::unique_ptr<cf_states, Deleter<cf_states, cf_states_free>>;
using Flights = std::unique_ptr<cf_flights, Deleter<cf_flights, cf_flights_free>>;
using Bounds = std::unique_ptr<cf_bounds, Deleter<cf_bounds, cf_bounds_free>>;
using Features = std::unique_ptr<cf_features, Deleter<cf_features, cf_features_free>>;
using RegistryH = std::unique_ptr<cf_registry, Deleter<cf_registry, cf_registry_free>>;
using Model = std::unique_ptr<cf_model, Deleter<cf_model, cf_model_free>>;
using Results = std::unique_ptr<cf_results, Deleter<cf_results, cf_results_free>>;

// Paths are checked before any work starts so a long run never dies at the
// final write.
void require_input(const std::string& path, const char* flag) {
    if (path.empty()) fail(CF_ERR_USAGE, "InvalidArgument", std::string(flag) + " is required");
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) fail(CF_ERR_DATA, "Io", std::string(flag) + " " + path + ": no such file");
}

void require_output(const std::string& path, const char* flag) {
    if (path.empty()) fail(CF_ERR_USAGE, "InvalidArgument", std::string(flag) + " is required");
    const fs::path parent = fs::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty() && !fs::is_directory(parent, ec)) {
        fail(CF_ERR_DATA, "Io", std::string(flag) + " " + path + ": directory does not exist");
    }
    if (fs::is_directory(path, ec)) fail(CF_ERR_DATA, "Io", std::string(flag) + " " + path + ": is a directory");
}

void optional_output(const std::string& path, const char* flag) {
    if (!path.empty()) require_output(path, flag);
}

void print(const json& summary) { std::cout << summary.dump() << std::endl; }

cf_model_type model_type(const std::string& name) {
    if (name == "knn") return CF_MODEL_KNN;
    if (name == "tree") return CF_MODEL_TREE;
    if (name == "boosted") return CF_MODEL_BOOSTED;
    if (name == "svm") return CF_MODEL_SVM;
    fail(CF_ERR_USAGE, "InvalidArgument", "unknown --model-type " + name);
}

RegistryH load_registry(const std::vector<std::string>& paths) {
    for (const auto& p : paths) require_input(p, "--registry");
    std::vector<const char*> raw;
    for (const auto& p : paths) raw.push_back(p.c_str());
    cf_registry* r = nullptr;
    size_t conflicts = 0;
    check(cf_registry_merge(raw.data(), raw.size(), &r, &conflicts));
    return RegistryH(r);
}

Features load_features(const std::string& path) {
    cf_features* f = nullptr;
    check(cf_features_read(path.c_str(), &f));
    return Features(f);
}

Flights load_flights(const std::string& path) {
    cf_flights* f = nullptr;
    check(cf_flights_read(path.c_str(), &f));
    return Flights(f);
}

Model load_model(const std::string& path) {
    cf_model* m = nullptr;
    check(cf_model_read(path.c_str(), &m));
    return Model(m);
}

struct Options {
    std::string input;
    std::string bounds;
    std::string model;
    std::string out;
    std::vector<std::string> registries;
    int q = 10;
    int f_min = 30;
    std::uint64_t seed = 0;
    unsigned jobs = 1;
    std::string model_type = "boosted";
    double threshold = 0.5;

    bool strict = false;
    std::int64_t gap_s = 600;
    double arrival_alt = 2500.0;
    std::int64_t hard_gap_s = 0;
    std::size_t reference_aircraft = 0;
    std::size_t flight_cap = 25;
    int bins = 20;
    std::string correlation;
    int search_iterations = 0;
    int folds = 5;
    double train_fraction = 0.8;
    std::string confusion;
    std::vector<int> f_min_values;
    std::vector<int> q_values;
    int repetitions = 1;
    std::string csv;
    std::string allocations;
    std::size_t min_flights = 10;
    std::size_t min_states = 500;
    std::string truth;
    std::string config;
    std::size_t per_category = 60;
    std::size_t flights = 35;
    std::uint32_t address_offset = 0;
    std::string results;
    bool write_config = false;
};

void run_ingest(const Options& o) {
    require_input(o.input, "--input");
    require_output(o.out, "--out");
    cf_states* s = nullptr;
    size_t rejected = 0;
    check(cf_states_read(o.input.c_str(), o.strict, &s, &rejected));
    States states(s);
    check(cf_states_write(states.get(), o.out.c_str()));
    print({{"states", cf_states_count(states.get())}, {"rejected", rejected}, {"out", o.out}});
}

void run_segment(const Options& o) {
    require_input(o.input, "--input");
    require_output(o.out, "--out");
    cf_states* s = nullptr;
    size_t rejected = 0;
    check(cf_states_read(o.input.c_str(), o.strict, &s, &rejected));
    States states(s);
    cf_segment_options opts;
    cf_segment_options_default(&opts);
    opts.gap_s = o.gap_s;
    opts.arrival_alt_m = o.arrival_alt;
    opts.hard_gap_s = o.hard_gap_s;
    cf_flights* f = nullptr;
    size_t duplicates = 0;
    check(cf_flights_segment(states.get(), &opts, &f, &duplicates));
    Flights flights(f);
    states.reset();
    check(cf_flights_write(flights.get(), o.out.c_str()));
    print({{"flights", cf_flights_count(flights.get())},
           {"aircraft", cf_flights_aircraft_count(flights.get())},
           {"rejected", rejected},
           {"duplicates_dropped", duplicates},
           {"out", o.out}});
}

void run_learn_bounds(const Options& o) {
    require_input(o.input, "--input");
    require_output(o.out, "--out");
    auto flights = load_flights(o.input);
    cf_reference_options ref;
    cf_reference_options_default(&ref);
    ref.max_aircraft = o.reference_aircraft;
    ref.flight_cap = o.flight_cap;
    ref.seed = o.seed;
    cf_bounds* b = nullptr;
    check(cf_bounds_learn(flights.get(), o.q, &ref, &b));
    Bounds bounds(b);
    check(cf_bounds_write(bounds.get(), o.out.c_str()));
    print({{"q", o.q}, {"out", o.out}});
}

void run_extract(const Options& o) {
    require_input(o.input, "--input");
    require_input(o.bounds, "--bounds");
    require_output(o.out, "--out");
    cf_bounds* b = nullptr;
    check(cf_bounds_read(o.bounds.c_str(), &b));
    Bounds bounds(b);
    auto flights = load_flights(o.input);
    cf_features* f = nullptr;
    size_t ineligible = 0;
    check(cf_features_extract(flights.get(), bounds.get(), &f, &ineligible));
    Features features(f);
    check(cf_features_write(features.get(), o.out.c_str()));
    print({{"aircraft", cf_features_count(features.get())},
           {"dim", cf_features_dim(features.get())},
           {"ineligible", ineligible},
           {"out", o.out}});
}

void run_analyze(const Options& o) {
    require_input(o.input, "--input");
    require_output(o.out, "--out");
    optional_output(o.correlation, "--correlation");
    auto registry = load_registry(o.registries);
    auto features = load_features(o.input);
    check(cf_analyze(features.get(), registry.get(), o.f_min, o.bins, o.out.c_str(),
                     o.correlation.empty() ? nullptr : o.correlation.c_str()));
    print({{"out", o.out}});
}

void run_train(const Options& o) {
    require_input(o.input, "--input");
    require_output(o.out, "--out");
    cf_train_options opts;
    cf_train_options_default(&opts);
    opts.model_type = model_type(o.model_type);
    opts.f_min = o.f_min;
    opts.seed = o.seed;
    opts.train_fraction = o.train_fraction;
    opts.search_iterations = o.search_iterations;
    opts.search_folds = o.folds;
    auto registry = load_registry(o.registries);
    auto features = load_features(o.input);
    cf_model* m = nullptr;
    check(cf_model_train(features.get(), registry.get(), &opts, &m));
    Model model(m);
    check(cf_model_write(model.get(), o.out.c_str()));
    print({{"model", o.model_type}, {"out", o.out}});
}

void run_evaluate(const Options& o) {
    require_input(o.model, "--model");
    require_input(o.input, "--input");
    require_output(o.out, "--out");
    optional_output(o.confusion, "--confusion");
    auto model = load_model(o.model);
    auto registry = load_registry(o.registries);
    auto features = load_features(o.input);
    double accuracy = 0.0;
    check(cf_evaluate(model.get(), features.get(), registry.get(), o.f_min, o.out.c_str(),
                      o.confusion.empty() ? nullptr : o.confusion.c_str(), &accuracy));
    print({{"accuracy", accuracy}, {"out", o.out}});
}

void run_sweep(const Options& o) {
    require_input(o.input, "--input");
    require_output(o.out, "--out");
    const auto f_mins = o.f_min_values.empty() ? std::vector<int>{o.f_min} : o.f_min_values;
    const auto qs = o.q_values.empty() ? std::vector<int>{o.q} : o.q_values;
    cf_sweep_options opts{};
    opts.f_min_values = f_mins.data();
    opts.f_min_count = f_mins.size();
    opts.q_values = qs.data();
    opts.q_count = qs.size();
    opts.model_type = model_type(o.model_type);
    opts.repetitions = o.repetitions;
    opts.seed = o.seed;
    opts.train_fraction = o.train_fraction;
    auto registry = load_registry(o.registries);
    auto flights = load_flights(o.input);
    check(cf_sweep(flights.get(), registry.get(), &opts, o.out.c_str()));
    print({{"cells", f_mins.size() * qs.size()}, {"out", o.out}});
}

void run_classify_unknown(const Options& o) {
    require_input(o.model, "--model");
    require_input(o.input, "--input");
    require_output(o.out, "--out");
    optional_output(o.csv, "--csv");
    if (!o.allocations.empty()) require_input(o.allocations, "--allocations");
    auto model = load_model(o.model);
    auto features = load_features(o.input);
    cf_unknown_options opts;
    cf_unknown_options_default(&opts);
    opts.threshold = o.threshold;
    opts.min_flights = o.min_flights;
    opts.min_states = o.min_states;
    opts.allocations_path = o.allocations.empty() ? nullptr : o.allocations.c_str();
    cf_results* r = nullptr;
    check(cf_classify_unknown(model.get(), features.get(), &opts, &r));
    Results results(r);
    check(cf_results_write_json(results.get(), o.out.c_str()));
    if (!o.csv.empty()) check(cf_results_write_csv(results.get(), o.csv.c_str()));
    print({{"classified", cf_results_count(results.get())},
           {"excluded", cf_results_excluded(results.get())},
           {"out", o.out}});
}

void run_synth(const Options& o) {
    if (o.write_config) {
        require_output(o.out, "--out");
        check(cf_synth_write_default_config(o.out.c_str()));
        print({{"out", o.out}});
        return;
    }
    require_output(o.out, "--out");
    optional_output(o.truth, "--truth");
    if (!o.config.empty()) require_input(o.config, "--config");
    check(cf_synth_fleet(o.config.empty() ? nullptr : o.config.c_str(), o.per_category, o.flights, o.seed,
                         o.address_offset, o.out.c_str(), o.truth.empty() ? nullptr : o.truth.c_str()));
    print({{"aircraft", o.per_category * static_cast<std::size_t>(cf_category_count())},
           {"flights_per_aircraft", o.flights},
           {"out", o.out}});
}

void run_export_geojson(const Options& o) {
    require_input(o.input, "--input");
    require_output(o.out, "--out");
    if (!o.results.empty()) require_input(o.results, "--results");
    auto flights = load_flights(o.input);
    Results results;
    if (!o.results.empty()) {
        cf_results* r = nullptr;
        check(cf_results_read_csv(o.results.c_str(), &r));
        results.reset(r);
    }
    RegistryH registry;
    if (!o.registries.empty()) registry = load_registry(o.registries);
    check(cf_flights_export_geojson(flights.get(), results.get(), registry.get(), o.out.c_str()));
    print({{"flights", cf_flights_count(flights.get())}, {"out", o.out}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Behavioural aircraft classification from state-vector dumps"};
    app.set_version_flag("--version", std::string(cf_version()));
    app.require_subcommand(1);
    Options o;

    const auto jobs_flag = [&](CLI::App* c) {
        c->add_option("--jobs", o.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    };
    const auto seed_flag = [&](CLI::App* c) { c->add_option("--seed", o.seed, "Random seed"); };
    const auto registry_flag = [&](CLI::App* c, bool required) {
        auto* opt = c->add_option("--registry", o.registries, "Registry CSV, earlier files take precedence");
        if (required) opt->required();
    };

    auto* ingest = app.add_subcommand("ingest", "Validate a state-vector CSV and write the clean rows");
    ingest->add_option("--input", o.input, "State-vector CSV")->required();
    ingest->add_option("--out", o.out, "Clean state-vector CSV")->required();
    ingest->add_flag("--strict", o.strict, "Abort on the first invalid row");

    auto* segment = app.add_subcommand("segment", "Split state vectors into flights");
    segment->add_option("--input", o.input, "State-vector CSV")->required();
    segment->add_option("--out", o.out, "Flights CSV")->required();
    segment->add_flag("--strict", o.strict, "Abort on the first invalid row");
    segment->add_option("--gap-s", o.gap_s, "Arrival gap in seconds")->capture_default_str();
    segment->add_option("--arrival-alt", o.arrival_alt, "Arrival altitude in meters")->capture_default_str();
    segment->add_option("--hard-gap-s", o.hard_gap_s, "Split on any gap longer than this (0 = off)");

    auto* learn = app.add_subcommand("learn-bounds", "Learn quantile bounds from a reference fleet");
    learn->add_option("--input", o.input, "Flights CSV")->required();
    learn->add_option("--out", o.out, "Bounds JSON")->required();
    learn->add_option("--q", o.q, "Quantile count")->capture_default_str();
    learn->add_option("--reference-aircraft", o.reference_aircraft, "Aircraft sampled (0 = all)");
    learn->add_option("--flight-cap", o.flight_cap, "Flights per sampled aircraft")->capture_default_str();
    seed_flag(learn);

    auto* extract = app.add_subcommand("extract", "Compute per-aircraft feature vectors");
    extract->add_option("--input", o.input, "Flights CSV")->required();
    extract->add_option("--bounds", o.bounds, "Bounds JSON")->required();
    extract->add_option("--out", o.out, "Feature matrix CSV")->required();
    jobs_flag(extract);

    auto* analyze = app.add_subcommand("analyze", "Relative mutual information and correlations");
    analyze->add_option("--input", o.input, "Feature matrix CSV")->required();
    registry_flag(analyze, true);
    analyze->add_option("--out", o.out, "RMI report JSON")->required();
    analyze->add_option("--correlation", o.correlation, "Correlation matrix CSV");
    analyze->add_option("--f-min", o.f_min, "Minimum flights per aircraft")->capture_default_str();
    analyze->add_option("--bins", o.bins, "Discretization bins")->capture_default_str();

    auto* train = app.add_subcommand("train", "Train a classifier");
    train->add_option("--input", o.input, "Feature matrix CSV")->required();
    registry_flag(train, true);
    train->add_option("--out", o.out, "Model JSON")->required();
    train->add_option("--model-type", o.model_type, "knn, tree, boosted or svm")
        ->check(CLI::IsMember({"knn", "tree", "boosted", "svm"}))
        ->capture_default_str();
    train->add_option("--f-min", o.f_min, "Minimum flights per aircraft")->capture_default_str();
    train->add_option("--train-fraction", o.train_fraction, "Training share")->capture_default_str();
    train->add_option("--search-iterations", o.search_iterations, "Randomized search samples (0 = off)");
    train->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();
    seed_flag(train);
    jobs_flag(train);

    auto* evaluate = app.add_subcommand("evaluate", "Evaluate a model on held-out aircraft");
    evaluate->add_option("--model", o.model, "Model JSON")->required();
    evaluate->add_option("--input", o.input, "Feature matrix CSV")->required();
    registry_flag(evaluate, true);
    evaluate->add_option("--out", o.out, "Evaluation report JSON")->required();
    evaluate->add_option("--confusion", o.confusion, "Confusion matrix CSV");
    evaluate->add_option("--f-min", o.f_min, "Minimum flights when the model has no holdout list");

    auto* sw = app.add_subcommand("sweep", "Accuracy over f_min and q grids");
    sw->add_option("--input", o.input, "Flights CSV")->required();
    registry_flag(sw, true);
    sw->add_option("--out", o.out, "Sweep CSV")->required();
    sw->add_option("--f-min", o.f_min_values, "f_min grid")->delimiter(',');
    sw->add_option("--q", o.q_values, "q grid")->delimiter(',');
    sw->add_option("--model-type", o.model_type, "knn, tree, boosted or svm")
        ->check(CLI::IsMember({"knn", "tree", "boosted", "svm"}));
    sw->add_option("--repetitions", o.repetitions, "Repetitions per cell")->capture_default_str();
    sw->add_option("--train-fraction", o.train_fraction, "Training share")->capture_default_str();
    seed_flag(sw);
    jobs_flag(sw);

    auto* unknown = app.add_subcommand("classify-unknown", "Label aircraft without metadata");
    unknown->add_option("--model", o.model, "Model JSON")->required();
    unknown->add_option("--input", o.input, "Feature matrix CSV")->required();
    unknown->add_option("--out", o.out, "Results JSON")->required();
    unknown->add_option("--csv", o.csv, "Results CSV");
    unknown->add_option("--threshold", o.threshold, "Confidence below which a result is Other")
        ->capture_default_str();
    unknown->add_option("--min-flights", o.min_flights, "Eligibility: flights")->capture_default_str();
    unknown->add_option("--min-states", o.min_states, "Eligibility: state vectors")->capture_default_str();
    unknown->add_option("--allocations", o.allocations, "ICAO address allocation CSV");

    auto* synth = app.add_subcommand("synth", "Generate a labelled synthetic fleet");
    synth->add_option("--out", o.out, "State-vector CSV (or config JSON with --write-config)")->required();
    synth->add_option("--truth", o.truth, "Ground-truth icao24,category CSV");
    synth->add_option("--config", o.config, "Archetype config JSON");
    synth->add_option("--aircraft-per-category", o.per_category, "Aircraft per category")->capture_default_str();
    synth->add_option("--flights", o.flights, "Flights per aircraft")->capture_default_str();
    synth->add_option("--address-offset", o.address_offset, "Shift synthetic addresses");
    synth->add_flag("--write-config", o.write_config, "Write the built-in archetype config and exit");
    seed_flag(synth);

    auto* geo = app.add_subcommand("export-geojson", "Flights as GeoJSON LineStrings");
    geo->add_option("--input", o.input, "Flights CSV")->required();
    geo->add_option("--out", o.out, "GeoJSON file")->required();
    geo->add_option("--results", o.results, "Classification results CSV for labels");
    registry_flag(geo, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << json{{"error", {{"code", CF_ERR_USAGE}, {"kind", "Usage"}, {"message", e.what()}}}}.dump()
                  << std::endl;
        return CF_ERR_USAGE;
    }

    try {
        if (o.q < 2) fail(CF_ERR_USAGE, "InvalidQ", "--q must be at least 2");
        if (o.f_min < 0) fail(CF_ERR_USAGE, "InvalidArgument", "--f-min must be non-negative");
        cf_set_max_jobs(o.jobs);
        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "ingest") run_ingest(o);
        else if (name == "segment") run_segment(o);
        else if (name == "learn-bounds") run_learn_bounds(o);
        else if (name == "extract") run_extract(o);
        else if (name == "analyze") run_analyze(o);
        else if (name == "train") run_train(o);
        else if (name == "evaluate") run_evaluate(o);
        else if (name == "sweep") run_sweep(o);
        else if (name == "classify-unknown") run_classify_unknown(o);
        else if (name == "synth") run_synth(o);
        else if (name == "export-geojson") run_export_geojson(o);
        return 0;
    } catch (const Failure& f) {
        std::cerr << json{{"error", {{"code", f.code}, {"kind", f.kind}, {"message", f.message}}}}.dump()
                  << std::endl;
        return f.code;
    } catch (const std::exception& e) {
        std::cerr << json{{"error", {{"code", CF_ERR_INTERNAL}, {"kind", "Internal"}, {"message", e.what()}}}}.dump()
                  << std::endl;
        return CF_ERR_INTERNAL;
    }
}
