#include "classifly/classifly.h"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <fstream>
#include <new>
#include <set>
#include <string>
#include <thread>

#include "classifly/analysis.hpp"
#include "classifly/error.hpp"
#include "classifly/features.hpp"
#include "classifly/geojson.hpp"
#include "classifly/ingest.hpp"
#include "classifly/io.hpp"
#include "classifly/log.hpp"
#include "classifly/model.hpp"
#include "classifly/pipeline.hpp"
#include "classifly/reference.hpp"
#include "classifly/search.hpp"
#include "classifly/synth.hpp"

using namespace classifly;

struct cf_states {
    std::vector<StateVector> states;
};
struct cf_flights {
    std::vector<Flight> flights;
};
struct cf_bounds {
    QuantileBounds bounds;
};
struct cf_features {
    std::vector<FeatureVector> vectors;
};
struct cf_registry {
    Registry records;
};
struct cf_model {
    TrainedModel model;
    nlohmann::json training;  // null when the document had no training block
};
struct cf_results {
    UnknownReport report;
};

namespace {

thread_local std::string t_message;
thread_local std::string t_kind;
std::atomic<unsigned> g_jobs{1};

unsigned jobs() {
    const unsigned j = g_jobs.load();
    return j == 0 ? std::max(1u, std::thread::hardware_concurrency()) : j;
}

void set_error(const char* kind, const std::string& message) {
    t_kind = kind;
    t_message = message;
    logger().debug("{}: {}", kind, message);
}

template <class F>
cf_status guarded(F&& body) noexcept {
    t_kind.clear();
    t_message.clear();
    try {
        body();
        return CF_OK;
    } catch (const Error& e) {
        set_error(to_string(e.kind()), e.what());
        const bool usage = e.kind() == ErrorKind::InvalidArgument || e.kind() == ErrorKind::InvalidQ;
        return usage ? CF_ERR_USAGE : CF_ERR_DATA;
    } catch (const nlohmann::json::exception& e) {
        set_error("MalformedFile", e.what());
        return CF_ERR_DATA;
    } catch (const std::bad_alloc&) {
        set_error("Internal", "out of memory");
        return CF_ERR_INTERNAL;
    } catch (const std::exception& e) {
        set_error("Internal", e.what());
        return CF_ERR_INTERNAL;
    } catch (...) {
        set_error("Internal", "unknown failure");
        return CF_ERR_INTERNAL;
    }
}

template <class T>
const T& need(const T* p, const char* what) {
    if (!p) throw Error(ErrorKind::InvalidArgument, std::string(what) + " is NULL");
    return *p;
}

std::string need_path(const char* path, const char* what) {
    if (!path || !*path) throw Error(ErrorKind::InvalidArgument, std::string(what) + " path is empty");
    return path;
}

template <class T>
void out_check(T** out) {
    if (!out) throw Error(ErrorKind::InvalidArgument, "output handle pointer is NULL");
    *out = nullptr;
}

nlohmann::json read_json(const std::string& path, ErrorKind on_parse) {
    auto in = io::open_input(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(on_parse, path + ": " + e.what());
    }
}

void write_json(const char* path, const nlohmann::json& doc, int indent) {
    io::atomic_write(need_path(path, "output"), [&](std::ostream& out) { out << doc.dump(indent) << '\n'; });
}

ModelFamily family_of(cf_model_type type) {
    switch (type) {
        case CF_MODEL_KNN: return ModelFamily::Knn;
        case CF_MODEL_TREE: return ModelFamily::Tree;
        case CF_MODEL_BOOSTED: return ModelFamily::Boosted;
        case CF_MODEL_SVM: return ModelFamily::Svm;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown model type " + std::to_string(static_cast<int>(type)));
}

cf_model_type type_of(ModelFamily family) {
    switch (family) {
        case ModelFamily::Knn: return CF_MODEL_KNN;
        case ModelFamily::Tree: return CF_MODEL_TREE;
        case ModelFamily::Boosted: return CF_MODEL_BOOSTED;
        case ModelFamily::Svm: return CF_MODEL_SVM;
    }
    return CF_MODEL_BOOSTED;
}

Hyperparameters params_of(const cf_hyperparameters& p) {
    Hyperparameters h;
    h.knn_k = p.knn_k;
    h.tree_max_splits = p.tree_max_splits;
    h.boost_learners = p.boost_learners;
    h.boost_max_splits = p.boost_max_splits;
    h.boost_learning_rate = p.boost_learning_rate;
    h.svm_c = p.svm_c;
    return h;
}

nlohmann::json params_json(const Hyperparameters& h) {
    return {{"knn_k", h.knn_k},
            {"tree_max_splits", h.tree_max_splits},
            {"boost_learners", h.boost_learners},
            {"boost_max_splits", h.boost_max_splits},
            {"boost_learning_rate", h.boost_learning_rate},
            {"svm_c", h.svm_c}};
}

void copy_icao(const Icao24& icao, char out[7]) {
    const auto s = icao.str();
    std::memcpy(out, s.c_str(), 7);
}

}  // namespace

extern "C" {

const char* cf_version(void) { return "1.0.0"; }
const char* cf_last_error_message(void) { return t_message.c_str(); }
const char* cf_last_error_kind(void) { return t_kind.c_str(); }
void cf_set_max_jobs(unsigned n) { g_jobs.store(n); }

const char* cf_category_name(int index) {
    static const std::vector<std::string> names = category_names();
    if (index < 0 || static_cast<std::size_t>(index) >= names.size()) return nullptr;
    return names[static_cast<std::size_t>(index)].c_str();
}

int cf_category_count(void) { return static_cast<int>(kCategoryCount); }

// ---- state vectors --------------------------------------------------------

cf_status cf_states_read(const char* path, int strict, cf_states** out, size_t* rejected) {
    return guarded([&] {
        out_check(out);
        auto in = io::open_input(need_path(path, "input"));
        auto parsed = parse_state_vectors(in, strict != 0);
        if (rejected) *rejected = parsed.rejected;
        *out = new cf_states{std::move(parsed.states)};
    });
}

cf_status cf_states_write(const cf_states* states, const char* path) {
    return guarded([&] {
        const auto& s = need(states, "states");
        io::atomic_write(need_path(path, "output"), [&](std::ostream& o) { write_state_vectors(o, s.states); });
    });
}

size_t cf_states_count(const cf_states* states) { return states ? states->states.size() : 0; }
void cf_states_free(cf_states* states) { delete states; }

// ---- flights --------------------------------------------------------------

void cf_segment_options_default(cf_segment_options* options) {
    if (!options) return;
    options->gap_s = 600;
    options->arrival_alt_m = 2500.0;
    options->hard_gap_s = 0;
}

cf_status cf_flights_segment(const cf_states* states, const cf_segment_options* options, cf_flights** out,
                             size_t* duplicates) {
    return guarded([&] {
        out_check(out);
        const auto& s = need(states, "states");
        SegmentOptions opts;
        if (options) {
            if (options->gap_s < 0) throw Error(ErrorKind::InvalidArgument, "gap_s must be non-negative");
            opts.gap_s = options->gap_s;
            opts.arrival_alt_m = options->arrival_alt_m;
            if (options->hard_gap_s > 0) opts.hard_gap_s = options->hard_gap_s;
        }
        auto seg = segment_fleet(s.states, opts);
        if (duplicates) *duplicates = seg.duplicates_dropped;
        *out = new cf_flights{std::move(seg.flights)};
    });
}

cf_status cf_flights_read(const char* path, cf_flights** out) {
    return guarded([&] {
        out_check(out);
        auto in = io::open_input(need_path(path, "input"));
        *out = new cf_flights{read_flights(in)};
    });
}

cf_status cf_flights_write(const cf_flights* flights, const char* path) {
    return guarded([&] {
        const auto& f = need(flights, "flights");
        io::atomic_write(need_path(path, "output"), [&](std::ostream& o) { write_flights(o, f.flights); });
    });
}

size_t cf_flights_count(const cf_flights* flights) { return flights ? flights->flights.size() : 0; }

size_t cf_flights_aircraft_count(const cf_flights* flights) {
    return flights ? group_by_aircraft(flights->flights).size() : 0;
}

void cf_flights_free(cf_flights* flights) { delete flights; }

cf_status cf_flights_export_geojson(const cf_flights* flights, const cf_results* results,
                                    const cf_registry* registry, const char* path) {
    return guarded([&] {
        const auto& f = need(flights, "flights");
        std::map<Icao24, std::string> labels;
        if (registry) {
            for (const auto& [icao, rec] : registry->records) {
                if (rec.category) labels[icao] = std::string(to_string(*rec.category));
            }
        }
        if (results) {
            for (const auto& r : results->report.results) labels[r.icao24] = r.predicted_name();
        }
        const auto doc = flights_geojson(f.flights, (results || registry) ? &labels : nullptr);
        write_json(path, doc, -1);
    });
}

// ---- quantile bounds ------------------------------------------------------

void cf_reference_options_default(cf_reference_options* options) {
    if (!options) return;
    options->max_aircraft = 0;
    options->flight_cap = 25;
    options->seed = 0;
}

cf_status cf_bounds_learn(const cf_flights* flights, int q, const cf_reference_options* options,
                          cf_bounds** out) {
    return guarded([&] {
        out_check(out);
        const auto& f = need(flights, "flights");
        ReferenceSampleOptions opts;
        if (options) {
            opts.max_aircraft = options->max_aircraft;
            opts.flight_cap = options->flight_cap;
            opts.seed = options->seed;
        }
        if (q < 2) throw Error(ErrorKind::InvalidQ, "q must be at least 2, got " + std::to_string(q));
        const auto values = collect_reference_values(f.flights, opts);
        *out = new cf_bounds{learn_quantile_bounds(values, q)};
    });
}

cf_status cf_bounds_read(const char* path, cf_bounds** out) {
    return guarded([&] {
        out_check(out);
        const std::string p = need_path(path, "bounds");
        try {
            *out = new cf_bounds{QuantileBounds::from_json(read_json(p, ErrorKind::MalformedFile))};
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::Io) throw;
            throw Error(e.kind(), p + ": " + e.what());
        }
    });
}

cf_status cf_bounds_write(const cf_bounds* bounds, const char* path) {
    return guarded([&] { write_json(path, need(bounds, "bounds").bounds.to_json(), 2); });
}

int cf_bounds_q(const cf_bounds* bounds) { return bounds ? bounds->bounds.q() : 0; }
void cf_bounds_free(cf_bounds* bounds) { delete bounds; }

// ---- feature vectors ------------------------------------------------------

cf_status cf_features_extract(const cf_flights* flights, const cf_bounds* bounds, cf_features** out,
                              size_t* ineligible) {
    return guarded([&] {
        out_check(out);
        auto fleet = extract_fleet(need(flights, "flights").flights, need(bounds, "bounds").bounds, jobs());
        for (const auto& bad : fleet.ineligible) {
            logger().info("{} has no usable features: {}", bad.icao24.str(), bad.reason);
        }
        if (ineligible) *ineligible = fleet.ineligible.size();
        *out = new cf_features{std::move(fleet.vectors)};
    });
}

cf_status cf_features_read(const char* path, cf_features** out) {
    return guarded([&] {
        out_check(out);
        const std::string p = need_path(path, "features");
        auto in = io::open_input(p);
        *out = new cf_features{read_feature_matrix(in)};
    });
}

cf_status cf_features_write(const cf_features* features, const char* path) {
    return guarded([&] {
        const auto& f = need(features, "features");
        io::atomic_write(need_path(path, "output"), [&](std::ostream& o) { write_feature_matrix(o, f.vectors); });
    });
}

size_t cf_features_count(const cf_features* features) { return features ? features->vectors.size() : 0; }

size_t cf_features_dim(const cf_features* features) {
    return features && !features->vectors.empty() ? features->vectors.front().values.size() : 0;
}

cf_status cf_features_row(const cf_features* features, size_t index, char icao24[7], const double** values,
                          size_t* n_flights, size_t* n_states) {
    return guarded([&] {
        const auto& f = need(features, "features");
        if (index >= f.vectors.size()) throw Error(ErrorKind::InvalidArgument, "feature row index out of range");
        const auto& v = f.vectors[index];
        if (icao24) copy_icao(v.icao24, icao24);
        if (values) *values = v.values.data();
        if (n_flights) *n_flights = v.n_flights;
        if (n_states) *n_states = v.n_states;
    });
}

void cf_features_free(cf_features* features) { delete features; }

// ---- registry -------------------------------------------------------------

cf_status cf_registry_merge(const char* const* paths, size_t count, cf_registry** out, size_t* conflicts) {
    return guarded([&] {
        out_check(out);
        if (count > 0 && !paths) throw Error(ErrorKind::InvalidArgument, "registry path list is NULL");
        std::vector<std::filesystem::path> list;
        for (size_t i = 0; i < count; ++i) list.emplace_back(need_path(paths[i], "registry"));
        auto merged = merge_metadata_files(list);
        if (conflicts) *conflicts = merged.conflicts;
        if (merged.conflicts > 0) logger().info("registry merge: {} conflicting fields", merged.conflicts);
        *out = new cf_registry{std::move(merged.records)};
    });
}

size_t cf_registry_count(const cf_registry* registry) { return registry ? registry->records.size() : 0; }

int cf_registry_category(const cf_registry* registry, const char* icao24) {
    if (!registry || !icao24) return -1;
    const auto icao = Icao24::try_parse(icao24);
    if (!icao) return -1;
    const auto it = registry->records.find(*icao);
    if (it == registry->records.end() || !it->second.category) return -1;
    return static_cast<int>(*it->second.category);
}

void cf_registry_free(cf_registry* registry) { delete registry; }

// ---- analysis -------------------------------------------------------------

cf_status cf_analyze(const cf_features* features, const cf_registry* registry, int f_min, int bins,
                     const char* rmi_json_path, const char* correlation_csv_path) {
    return guarded([&] {
        const auto& f = need(features, "features");
        const auto& r = need(registry, "registry");
        if (f_min < 0) throw Error(ErrorKind::InvalidArgument, "f_min must be non-negative");
        if (bins < 1) throw Error(ErrorKind::InvalidArgument, "bins must be positive");
        if (!rmi_json_path && !correlation_csv_path) {
            throw Error(ErrorKind::InvalidArgument, "no analysis output requested");
        }
        const auto build = build_dataset(f.vectors, r.records, f_min);
        const int q = f.vectors.front().q;
        if (rmi_json_path) {
            auto doc = rmi_report(build.data.X, build.data.y, q, bins).to_json();
            doc["n_aircraft"] = build.data.size();
            doc["f_min"] = f_min;
            write_json(rmi_json_path, doc, 2);
        }
        if (correlation_csv_path) {
            const auto corr = correlation_matrix(build.data.X);
            io::atomic_write(correlation_csv_path, [&](std::ostream& o) { write_correlation_csv(o, corr); });
        }
    });
}

// ---- models ---------------------------------------------------------------

void cf_train_options_default(cf_train_options* options) {
    if (!options) return;
    const Hyperparameters h;
    options->model_type = CF_MODEL_BOOSTED;
    options->f_min = 30;
    options->train_fraction = 0.8;
    options->seed = 0;
    options->search_iterations = 0;
    options->search_folds = 5;
    options->params = {h.knn_k, h.tree_max_splits, h.boost_learners, h.boost_max_splits, h.boost_learning_rate,
                       h.svm_c};
}

cf_status cf_model_train(const cf_features* features, const cf_registry* registry, const cf_train_options* options,
                         cf_model** out) {
    return guarded([&] {
        out_check(out);
        const auto& f = need(features, "features");
        const auto& r = need(registry, "registry");
        cf_train_options opts;
        cf_train_options_default(&opts);
        if (options) opts = *options;
        const ModelFamily family = family_of(opts.model_type);
        if (opts.f_min < 0) throw Error(ErrorKind::InvalidArgument, "f_min must be non-negative");
        if (!(opts.train_fraction > 0.0 && opts.train_fraction <= 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "train_fraction must lie in (0, 1]");
        }
        if (opts.search_iterations < 0) throw Error(ErrorKind::InvalidArgument, "search iterations must be >= 0");

        const auto build = build_dataset(f.vectors, r.records, opts.f_min);
        const auto split = split_indices(build.data.y, opts.train_fraction, opts.seed);
        const Dataset train = build.data.subset(split.train);
        logger().info("training {} on {} aircraft, {} held out", to_string(family), train.size(), split.eval.size());

        Hyperparameters params = params_of(opts.params);
        nlohmann::json search = nullptr;
        if (opts.search_iterations > 0) {
            const auto result = random_search(family, train, ParameterRanges::defaults_for(family),
                                              opts.search_iterations, opts.search_folds, opts.seed, params, jobs());
            params = result.best;
            search = {{"iterations", opts.search_iterations},
                      {"folds", opts.search_folds},
                      {"cv_accuracy", result.cv_accuracy}};
        }

        nlohmann::json held_out = nlohmann::json::array();
        for (auto i : split.eval) held_out.push_back(build.data.ids[i]);
        nlohmann::json training = {{"f_min", opts.f_min},
                                   {"q", f.vectors.front().q},
                                   {"train_fraction", opts.train_fraction},
                                   {"seed", opts.seed},
                                   {"train_size", train.size()},
                                   {"eval_icao24", std::move(held_out)},
                                   {"parameters", params_json(params)},
                                   {"search", std::move(search)}};
        *out = new cf_model{train_model(family, train, params), std::move(training)};
    });
}

cf_status cf_model_read(const char* path, cf_model** out) {
    return guarded([&] {
        out_check(out);
        const std::string p = need_path(path, "model");
        const auto doc = read_json(p, ErrorKind::MalformedModel);
        try {
            auto model = TrainedModel::from_json(doc);
            nlohmann::json training = doc.contains("training") ? doc.at("training") : nlohmann::json();
            *out = new cf_model{std::move(model), std::move(training)};
        } catch (const Error& e) {
            throw Error(e.kind(), p + ": " + e.what());
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::MalformedModel, p + ": " + e.what());
        }
    });
}

cf_status cf_model_write(const cf_model* model, const char* path) {
    return guarded([&] {
        const auto& m = need(model, "model");
        auto doc = m.model.to_json();
        if (!m.training.is_null()) doc["training"] = m.training;
        write_json(path, doc, -1);
    });
}

cf_model_type cf_model_get_type(const cf_model* model) {
    return model ? type_of(model->model.family()) : CF_MODEL_BOOSTED;
}

size_t cf_model_input_dim(const cf_model* model) { return model ? model->model.input_dim() : 0; }
size_t cf_model_class_count(const cf_model* model) { return model ? model->model.class_names().size() : 0; }

const char* cf_model_class_name(const cf_model* model, size_t index) {
    if (!model || index >= model->model.class_names().size()) return nullptr;
    return model->model.class_names()[index].c_str();
}

cf_status cf_model_predict(const cf_model* model, const double* x, size_t dim, int* label, double* scores) {
    return guarded([&] {
        const auto& m = need(model, "model");
        if (!x && dim > 0) throw Error(ErrorKind::InvalidArgument, "input vector is NULL");
        const auto p = m.model.predict(std::span<const double>(x, dim));
        if (label) *label = p.label;
        if (scores) std::copy(p.scores.begin(), p.scores.end(), scores);
    });
}

void cf_model_free(cf_model* model) { delete model; }

cf_status cf_evaluate(const cf_model* model, const cf_features* features, const cf_registry* registry, int f_min,
                      const char* report_json_path, const char* confusion_csv_path, double* accuracy) {
    return guarded([&] {
        const auto& m = need(model, "model");
        const auto& f = need(features, "features");
        const auto& r = need(registry, "registry");
        if (f_min < 0) throw Error(ErrorKind::InvalidArgument, "f_min must be non-negative");

        std::vector<FeatureVector> selected;
        const char* scope = "eligible";
        if (m.training.is_object() && m.training.contains("eval_icao24") && !m.training["eval_icao24"].empty()) {
            std::set<std::string> held_out;
            for (const auto& id : m.training["eval_icao24"]) held_out.insert(id.get<std::string>());
            for (const auto& v : f.vectors) {
                if (held_out.count(v.icao24.str())) selected.push_back(v);
            }
            scope = "held-out";
            f_min = 0;
        }
        if (selected.empty()) {
            // Features from another corpus: score every eligible aircraft.
            selected = f.vectors;
            scope = "eligible";
        }
        const auto build = build_dataset(selected, r.records, f_min);
        const auto report = evaluate(m.model, build.data);
        if (accuracy) *accuracy = report.accuracy;
        if (report_json_path) {
            auto doc = report.to_json();
            doc["model"] = std::string(to_string(m.model.family()));
            doc["scope"] = scope;
            write_json(report_json_path, doc, 2);
        }
        if (confusion_csv_path) {
            io::atomic_write(confusion_csv_path, [&](std::ostream& o) { report.write_confusion_csv(o); });
        }
    });
}

// ---- sweep ----------------------------------------------------------------

cf_status cf_sweep(const cf_flights* flights, const cf_registry* registry, const cf_sweep_options* options,
                   const char* csv_path) {
    return guarded([&] {
        const auto& f = need(flights, "flights");
        const auto& r = need(registry, "registry");
        const auto& o = need(options, "sweep options");
        const std::string path = need_path(csv_path, "output");
        if (o.f_min_count == 0 || o.q_count == 0 || !o.f_min_values || !o.q_values) {
            throw Error(ErrorKind::InvalidArgument, "sweep needs at least one f_min and one q value");
        }
        if (o.repetitions < 1) throw Error(ErrorKind::InvalidArgument, "repetitions must be at least 1");
        SweepOptions s;
        s.f_min_values.assign(o.f_min_values, o.f_min_values + o.f_min_count);
        s.q_values.assign(o.q_values, o.q_values + o.q_count);
        for (int v : s.f_min_values) {
            if (v < 0) throw Error(ErrorKind::InvalidArgument, "f_min values must be non-negative");
        }
        for (int v : s.q_values) {
            if (v < 2) throw Error(ErrorKind::InvalidQ, "q values must be at least 2");
        }
        s.family = family_of(o.model_type);
        s.repetitions = o.repetitions;
        s.seed = o.seed;
        s.train_fraction = o.train_fraction > 0.0 ? o.train_fraction : 0.8;
        s.reference.seed = o.seed;
        s.jobs = jobs();
        const auto cells = sweep(f.flights, r.records, s);
        io::atomic_write(path, [&](std::ostream& out) { write_sweep_csv(out, cells); });
    });
}

// ---- unknown aircraft -----------------------------------------------------

void cf_unknown_options_default(cf_unknown_options* options) {
    if (!options) return;
    const UnknownOptions d;
    options->threshold = d.threshold;
    options->min_flights = d.min_flights;
    options->min_states = d.min_states;
    options->allocations_path = nullptr;
}

cf_status cf_classify_unknown(const cf_model* model, const cf_features* features, const cf_unknown_options* options,
                              cf_results** out) {
    return guarded([&] {
        out_check(out);
        const auto& m = need(model, "model");
        const auto& f = need(features, "features");
        cf_unknown_options o;
        cf_unknown_options_default(&o);
        if (options) o = *options;
        if (!(o.threshold >= 0.0 && o.threshold <= 1.0)) {
            throw Error(ErrorKind::InvalidArgument, "threshold must lie in [0, 1]");
        }
        std::optional<AllocationTable> table;
        if (o.allocations_path && *o.allocations_path) {
            auto in = io::open_input(o.allocations_path);
            table = AllocationTable::read_csv(in);
        }
        UnknownOptions u;
        u.threshold = o.threshold;
        u.min_flights = o.min_flights;
        u.min_states = o.min_states;
        *out = new cf_results{classify_unknown(f.vectors, m.model, table ? &*table : nullptr, u)};
    });
}

cf_status cf_results_write_json(const cf_results* results, const char* path) {
    return guarded([&] { write_json(path, need(results, "results").report.to_json(), 2); });
}

cf_status cf_results_write_csv(const cf_results* results, const char* path) {
    return guarded([&] {
        const auto& r = need(results, "results");
        io::atomic_write(need_path(path, "output"), [&](std::ostream& o) { r.report.write_csv(o); });
    });
}

cf_status cf_results_read_csv(const char* path, cf_results** out) {
    return guarded([&] {
        out_check(out);
        auto in = io::open_input(need_path(path, "results"));
        UnknownReport report;
        report.results = read_results_csv(in);
        *out = new cf_results{std::move(report)};
    });
}

size_t cf_results_count(const cf_results* results) { return results ? results->report.results.size() : 0; }
size_t cf_results_excluded(const cf_results* results) { return results ? results->report.excluded : 0; }

cf_status cf_results_get(const cf_results* results, size_t index, char icao24[7], char predicted[16],
                         double* confidence) {
    return guarded([&] {
        const auto& r = need(results, "results");
        if (index >= r.report.results.size()) throw Error(ErrorKind::InvalidArgument, "result index out of range");
        const auto& res = r.report.results[index];
        if (icao24) copy_icao(res.icao24, icao24);
        if (predicted) {
            const auto name = res.predicted_name();
            const auto n = std::min<std::size_t>(name.size(), 15);
            std::memcpy(predicted, name.data(), n);
            predicted[n] = '\0';
        }
        if (confidence) *confidence = res.confidence;
    });
}

void cf_results_free(cf_results* results) { delete results; }

// ---- synthetic fleets -----------------------------------------------------

cf_status cf_synth_fleet(const char* config_path, size_t aircraft_per_category, size_t flights_per_aircraft,
                         uint64_t seed, uint32_t address_offset, const char* states_path, const char* truth_path) {
    return guarded([&] {
        const std::string out_states = need_path(states_path, "states output");
        FleetConfig config = default_fleet_config();
        if (config_path && *config_path) {
            config = FleetConfig::from_json(read_json(config_path, ErrorKind::InvalidArchetype));
        }
        const auto fleet = generate_fleet(config, aircraft_per_category, flights_per_aircraft, seed, address_offset);
        io::atomic_write(out_states, [&](std::ostream& o) { write_state_vectors(o, fleet.states); });
        if (truth_path && *truth_path) {
            io::atomic_write(truth_path, [&](std::ostream& o) { write_truth(o, fleet.truth); });
        }
    });
}

cf_status cf_synth_write_default_config(const char* path) {
    return guarded([&] { write_json(path, default_fleet_config().to_json(), 2); });
}

}  // extern "C"
