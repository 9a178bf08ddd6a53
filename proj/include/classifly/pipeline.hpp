#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "classifly/dataset.hpp"
#include "classifly/features.hpp"
#include "classifly/model.hpp"
#include "classifly/reference.hpp"
#include "classifly/types.hpp"

namespace classifly {

// ---------------------------------------------------------------------------
// Registry metadata
// ---------------------------------------------------------------------------

struct AircraftRecord {
    Icao24 icao24;
    std::optional<std::string> registration;
    std::optional<std::string> model_name;
    std::optional<std::string> operator_name;
    std::optional<Category> category;
    std::string source;

    bool operator==(const AircraftRecord&) const = default;
};

using Registry = std::map<Icao24, AircraftRecord>;

/// Parses `icao24,registration,model,operator,category,source` or the short
/// truth form `icao24,category`. Fields may be double-quoted. `source_name`
/// fills empty source cells. Any bad row raises Error(MalformedRegistry).
std::vector<AircraftRecord> read_registry(std::istream& in, const std::string& source_name);

struct RegistrySource {
    std::string name;
    std::vector<AircraftRecord> records;
};

struct MergeResult {
    Registry records;
    std::size_t conflicts = 0;  // fields where a later source disagreed with a kept value
};

/// Field-wise first-non-null merge in source order.
MergeResult merge_metadata(std::span<const RegistrySource> sources);
MergeResult merge_metadata_files(std::span<const std::filesystem::path> paths);

// ---------------------------------------------------------------------------
// Dataset construction and evaluation protocol
// ---------------------------------------------------------------------------

struct DatasetBuild {
    Dataset data;
    std::size_t kept = 0;
    std::size_t dropped_unlabelled = 0;
    std::size_t dropped_few_flights = 0;
};

/// Keeps aircraft with a known category and at least `f_min` flights. Rows
/// keep the input order; ids carry the addresses. Throws Error(EmptyDataset)
/// when nothing survives.
DatasetBuild build_dataset(std::span<const FeatureVector> features, const Registry& registry,
                           int f_min = 30);

struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> eval;
};

/// Stratified split: every class sends floor(n_c * (1 - train_fraction)) rows
/// to evaluation, chosen by a seeded shuffle. Both index lists are ascending.
SplitIndices split_indices(std::span<const int> labels, double train_fraction, std::uint64_t seed);

std::pair<Dataset, Dataset> split_train_eval(const Dataset& data, double train_fraction = 0.8,
                                             std::uint64_t seed = 0);

struct EvaluationReport {
    std::vector<std::string> class_names;
    std::vector<std::vector<std::size_t>> confusion;  // rows = true class
    std::size_t total = 0;
    double accuracy = 0.0;
    // Per class, one-vs-rest. Empty when the class is absent from the
    // evaluation set or the ratio is 0/0.
    std::vector<std::optional<double>> precision;
    std::vector<std::optional<double>> tpr;
    std::vector<std::optional<double>> tnr;
    std::optional<double> macro_precision;
    std::optional<double> macro_tpr;
    std::optional<double> macro_tnr;
    double micro_precision = 0.0;
    double micro_tpr = 0.0;

    nlohmann::json to_json() const;
    /// Confusion matrix as CSV, true classes down the rows.
    void write_confusion_csv(std::ostream& out) const;
};

/// Rates derived from a confusion matrix alone.
EvaluationReport report_from_confusion(std::vector<std::vector<std::size_t>> confusion,
                                       std::vector<std::string> class_names);

EvaluationReport evaluate(const TrainedModel& model, const Dataset& eval_set);

// ---------------------------------------------------------------------------
// Parameter sweep
// ---------------------------------------------------------------------------

struct SweepOptions {
    std::vector<int> f_min_values{30};
    std::vector<int> q_values{10};
    ModelFamily family = ModelFamily::Boosted;
    Hyperparameters params;
    int repetitions = 1;
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
    ReferenceSampleOptions reference;
    unsigned jobs = 1;
};

struct SweepCell {
    int f_min = 0;
    int q = 0;
    std::size_t n_aircraft = 0;
    int repetitions = 0;
    double mean_accuracy = 0.0;  // NaN when the grid point had no usable data
    double stddev_accuracy = 0.0;
};

/// For every q: learn bounds from the reference sample (seeded by
/// options.seed) and extract features. For every f_min: rebuild the dataset
/// and average held-out accuracy over repetitions, repetition r splitting
/// with seed + r.
std::vector<SweepCell> sweep(std::span<const Flight> fleet, const Registry& registry,
                             const SweepOptions& options);

void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells);

// ---------------------------------------------------------------------------
// Country attribution
// ---------------------------------------------------------------------------

class AllocationTable {
public:
    struct Range {
        std::uint32_t low = 0;
        std::uint32_t high = 0;
        std::string country;
    };

    AllocationTable() = default;
    /// Sorts the ranges; throws Error(MalformedFile) when any overlap or has
    /// low > high.
    explicit AllocationTable(std::vector<Range> ranges);

    /// CSV `low_hex,high_hex,country`.
    static AllocationTable read_csv(std::istream& in);

    std::optional<std::string> country_of(Icao24 address) const;
    std::span<const Range> ranges() const noexcept { return ranges_; }

private:
    std::vector<Range> ranges_;
};

// ---------------------------------------------------------------------------
// Unknown aircraft
// ---------------------------------------------------------------------------

struct UnknownOptions {
    double threshold = 0.5;
    std::size_t min_flights = 10;
    std::size_t min_states = 500;
};

struct ClassificationResult {
    Icao24 icao24;
    std::optional<Category> predicted;  // empty = Other
    double confidence = 0.0;
    std::size_t n_flights = 0;
    std::size_t n_states = 0;
    std::optional<std::string> country;
    std::vector<double> scores;

    std::string predicted_name() const;
};

struct UnknownReport {
    UnknownOptions options;
    std::vector<ClassificationResult> results;
    std::size_t excluded = 0;
    bool ensemble_scores = true;  // false: scores are not ensemble vote shares

    /// Per-bucket counts (eight categories then Other) with percentages of
    /// all classified aircraft.
    std::vector<std::pair<std::string, std::size_t>> bucket_counts() const;
    nlohmann::json to_json() const;
    void write_csv(std::ostream& out) const;
};

/// Aircraft below min_flights or min_states are excluded; the rest get the
/// model's top class, or Other when its score is under the threshold.
UnknownReport classify_unknown(std::span<const FeatureVector> features, const TrainedModel& model,
                               const AllocationTable* allocations = nullptr,
                               const UnknownOptions& options = {});

/// Reads the CSV written by UnknownReport::write_csv back into results
/// (scores are not stored in the CSV).
std::vector<ClassificationResult> read_results_csv(std::istream& in);

}  // namespace classifly
