/* classifly: behavioural aircraft classification from surveillance state
 * vectors. Plain C interface over the C++ core.
 *
 * Every fallible call returns a cf_status. On failure the calling thread's
 * last error (kind + message) is set and output handles are left NULL.
 * Handles are opaque and owned by the caller; free them with the matching
 * *_free function (NULL is accepted). All file outputs are written through a
 * temporary file and renamed, so a failed call never leaves a partial file.
 */
#ifndef CLASSIFLY_H
#define CLASSIFLY_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CF_API __declspec(dllexport)
#else
#define CF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cf_status {
    CF_OK = 0,
    CF_ERR_USAGE = 1,    /* bad argument, invalid option value */
    CF_ERR_DATA = 2,     /* unreadable, malformed or unusable input */
    CF_ERR_INTERNAL = 3
} cf_status;

typedef enum cf_model_type {
    CF_MODEL_KNN = 0,
    CF_MODEL_TREE = 1,
    CF_MODEL_BOOSTED = 2,
    CF_MODEL_SVM = 3
} cf_model_type;

typedef struct cf_states cf_states;
typedef struct cf_flights cf_flights;
typedef struct cf_bounds cf_bounds;
typedef struct cf_features cf_features;
typedef struct cf_registry cf_registry;
typedef struct cf_model cf_model;
typedef struct cf_results cf_results;

CF_API const char* cf_version(void);

/* Message and kind name ("MalformedHeader", ...) of the last failure on this
 * thread; empty strings when the last call succeeded. */
CF_API const char* cf_last_error_message(void);
CF_API const char* cf_last_error_kind(void);

/* Worker cap for parallel stages (extraction, cross-validation, sweeps).
 * 0 means one worker per hardware thread. Default 1. */
CF_API void cf_set_max_jobs(unsigned jobs);

/* Category name for index 0..7, NULL otherwise. */
CF_API const char* cf_category_name(int index);
CF_API int cf_category_count(void);

/* ---- state vectors ---------------------------------------------------- */

CF_API cf_status cf_states_read(const char* path, int strict, cf_states** out, size_t* rejected);
CF_API cf_status cf_states_write(const cf_states* states, const char* path);
CF_API size_t cf_states_count(const cf_states* states);
CF_API void cf_states_free(cf_states* states);

/* ---- flights ---------------------------------------------------------- */

typedef struct cf_segment_options {
    int64_t gap_s;            /* default 600 */
    double arrival_alt_m;     /* default 2500 */
    int64_t hard_gap_s;       /* <= 0: disabled */
} cf_segment_options;

CF_API void cf_segment_options_default(cf_segment_options* options);

/* options may be NULL for defaults. duplicates may be NULL. */
CF_API cf_status cf_flights_segment(const cf_states* states, const cf_segment_options* options,
                                    cf_flights** out, size_t* duplicates);
CF_API cf_status cf_flights_read(const char* path, cf_flights** out);
CF_API cf_status cf_flights_write(const cf_flights* flights, const char* path);
CF_API size_t cf_flights_count(const cf_flights* flights);
CF_API size_t cf_flights_aircraft_count(const cf_flights* flights);
CF_API void cf_flights_free(cf_flights* flights);

/* GeoJSON with one LineString per flight. Labels come from results when
 * given, else from registry categories; both may be NULL. */
CF_API cf_status cf_flights_export_geojson(const cf_flights* flights, const cf_results* results,
                                           const cf_registry* registry, const char* path);

/* ---- quantile bounds -------------------------------------------------- */

typedef struct cf_reference_options {
    size_t max_aircraft;      /* 0 = every aircraft */
    size_t flight_cap;        /* default 25 */
    uint64_t seed;
} cf_reference_options;

CF_API void cf_reference_options_default(cf_reference_options* options);

CF_API cf_status cf_bounds_learn(const cf_flights* flights, int q, const cf_reference_options* options,
                                 cf_bounds** out);
CF_API cf_status cf_bounds_read(const char* path, cf_bounds** out);
CF_API cf_status cf_bounds_write(const cf_bounds* bounds, const char* path);
CF_API int cf_bounds_q(const cf_bounds* bounds);
CF_API void cf_bounds_free(cf_bounds* bounds);

/* ---- feature vectors -------------------------------------------------- */

CF_API cf_status cf_features_extract(const cf_flights* flights, const cf_bounds* bounds, cf_features** out,
                                     size_t* ineligible);
CF_API cf_status cf_features_read(const char* path, cf_features** out);
CF_API cf_status cf_features_write(const cf_features* features, const char* path);
CF_API size_t cf_features_count(const cf_features* features);
CF_API size_t cf_features_dim(const cf_features* features);

/* Row access. icao24 receives 6 hex digits plus NUL; values points into the
 * handle and stays valid until it is freed. Either output may be NULL. */
CF_API cf_status cf_features_row(const cf_features* features, size_t index, char icao24[7],
                                 const double** values, size_t* n_flights, size_t* n_states);
CF_API void cf_features_free(cf_features* features);

/* ---- registry metadata ------------------------------------------------ */

/* Field-wise first-non-null merge, earlier paths take precedence. */
CF_API cf_status cf_registry_merge(const char* const* paths, size_t count, cf_registry** out,
                                   size_t* conflicts);
CF_API size_t cf_registry_count(const cf_registry* registry);
/* Category index of an address, -1 when unknown or unlabelled. */
CF_API int cf_registry_category(const cf_registry* registry, const char* icao24);
CF_API void cf_registry_free(cf_registry* registry);

/* ---- feature analysis ------------------------------------------------- */

/* RMI report (JSON) over the labelled aircraft with >= f_min flights, and
 * optionally the feature correlation matrix (CSV). */
CF_API cf_status cf_analyze(const cf_features* features, const cf_registry* registry, int f_min, int bins,
                            const char* rmi_json_path, const char* correlation_csv_path);

/* ---- models ----------------------------------------------------------- */

typedef struct cf_hyperparameters {
    int knn_k;
    int tree_max_splits;
    int boost_learners;
    int boost_max_splits;
    double boost_learning_rate;
    double svm_c;
} cf_hyperparameters;

typedef struct cf_train_options {
    cf_model_type model_type;   /* default boosted */
    int f_min;                  /* default 30 */
    double train_fraction;      /* default 0.8 */
    uint64_t seed;
    int search_iterations;      /* 0 = train with `params` as given */
    int search_folds;           /* default 5 */
    cf_hyperparameters params;
} cf_train_options;

CF_API void cf_train_options_default(cf_train_options* options);

/* Builds the labelled dataset, holds out a stratified evaluation share and
 * trains on the rest. The held-out addresses are stored with the model. */
CF_API cf_status cf_model_train(const cf_features* features, const cf_registry* registry,
                                const cf_train_options* options, cf_model** out);
CF_API cf_status cf_model_read(const char* path, cf_model** out);
CF_API cf_status cf_model_write(const cf_model* model, const char* path);
CF_API cf_model_type cf_model_get_type(const cf_model* model);
CF_API size_t cf_model_input_dim(const cf_model* model);
CF_API size_t cf_model_class_count(const cf_model* model);
CF_API const char* cf_model_class_name(const cf_model* model, size_t index);

/* scores receives cf_model_class_count values when non-NULL. */
CF_API cf_status cf_model_predict(const cf_model* model, const double* x, size_t dim, int* label,
                                  double* scores);
CF_API void cf_model_free(cf_model* model);

/* Evaluates on the model's held-out addresses when it carries them, else on
 * every labelled aircraft with >= f_min flights. Outputs may be NULL. */
CF_API cf_status cf_evaluate(const cf_model* model, const cf_features* features, const cf_registry* registry,
                             int f_min, const char* report_json_path, const char* confusion_csv_path,
                             double* accuracy);

/* ---- parameter sweep -------------------------------------------------- */

typedef struct cf_sweep_options {
    const int* f_min_values;
    size_t f_min_count;
    const int* q_values;
    size_t q_count;
    cf_model_type model_type;
    int repetitions;
    uint64_t seed;
    double train_fraction;
} cf_sweep_options;

CF_API cf_status cf_sweep(const cf_flights* flights, const cf_registry* registry, const cf_sweep_options* options,
                          const char* csv_path);

/* ---- unknown aircraft ------------------------------------------------- */

typedef struct cf_unknown_options {
    double threshold;           /* default 0.5 */
    size_t min_flights;         /* default 10 */
    size_t min_states;          /* default 500 */
    const char* allocations_path; /* ICAO address allocation CSV, may be NULL */
} cf_unknown_options;

CF_API void cf_unknown_options_default(cf_unknown_options* options);

CF_API cf_status cf_classify_unknown(const cf_model* model, const cf_features* features,
                                     const cf_unknown_options* options, cf_results** out);
CF_API cf_status cf_results_write_json(const cf_results* results, const char* path);
CF_API cf_status cf_results_write_csv(const cf_results* results, const char* path);
CF_API cf_status cf_results_read_csv(const char* path, cf_results** out);
CF_API size_t cf_results_count(const cf_results* results);
CF_API size_t cf_results_excluded(const cf_results* results);
/* predicted receives the category name or "Other" (up to 16 bytes). */
CF_API cf_status cf_results_get(const cf_results* results, size_t index, char icao24[7], char predicted[16],
                                double* confidence);
CF_API void cf_results_free(cf_results* results);

/* ---- synthetic fleets ------------------------------------------------- */

/* config_path may be NULL for the built-in archetypes; truth_path may be
 * NULL. */
CF_API cf_status cf_synth_fleet(const char* config_path, size_t aircraft_per_category,
                                size_t flights_per_aircraft, uint64_t seed, uint32_t address_offset,
                                const char* states_path, const char* truth_path);
CF_API cf_status cf_synth_write_default_config(const char* path);

#ifdef __cplusplus
}
#endif

#endif /* CLASSIFLY_H */
