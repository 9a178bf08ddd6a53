#include "classifly/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <fstream>
#include <random>

#include "classifly/error.hpp"
#include "classifly/io.hpp"
#include "classifly/log.hpp"
#include "classifly/parallel.hpp"

namespace classifly {
namespace {

constexpr std::string_view kRegistryHeader = "icao24,registration,model,operator,category,source";
constexpr std::string_view kTruthHeader = "icao24,category";
constexpr std::string_view kAllocationHeader = "low_hex,high_hex,country";
constexpr std::string_view kResultsHeader = "icao24,predicted,confidence,n_flights,n_states,country";

std::optional<std::string> non_empty(std::string_view cell) {
    cell = io::trim(cell);
    if (cell.empty()) return std::nullopt;
    return std::string(cell);
}

std::string join_header(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        out += io::trim(cells[i]);
    }
    return out;
}

template <typename T>
void merge_field(std::optional<T>& kept, const std::optional<T>& incoming, std::size_t& conflicts) {
    if (!incoming) return;
    if (!kept) kept = incoming;
    else if (*kept != *incoming) ++conflicts;
}

nlohmann::json optional_json(const std::optional<double>& v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::string csv_escape(const std::string& text) {
    if (text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string out = "\"";
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<AircraftRecord> read_registry(std::istream& in, const std::string& source_name) {
    const auto fail = [&](const std::string& what) {
        throw Error(ErrorKind::MalformedRegistry, source_name + ": " + what);
    };
    std::string line;
    if (!std::getline(in, line)) fail("empty file");
    const auto header = join_header(io::split_csv_quoted(io::trim(line)));
    const bool full = header == kRegistryHeader;
    if (!full && header != kTruthHeader) {
        fail("expected header '" + std::string(kRegistryHeader) + "' or '" + std::string(kTruthHeader) + "'");
    }
    const std::size_t width = full ? 6 : 2;
    std::vector<AircraftRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (io::trim(line).empty()) continue;
        const auto cells = io::split_csv_quoted(io::trim(line));
        const auto where = "line " + std::to_string(line_no) + ": ";
        if (cells.size() != width) fail(where + "expected " + std::to_string(width) + " fields");
        AircraftRecord r;
        const auto icao = Icao24::try_parse(io::trim(cells[0]));
        if (!icao) fail(where + "bad icao24 '" + cells[0] + "'");
        r.icao24 = *icao;
        const auto& category_cell = full ? cells[4] : cells[1];
        if (auto text = non_empty(category_cell)) {
            r.category = parse_category(*text);
            if (!r.category) fail(where + "unknown category '" + *text + "'");
        }
        if (full) {
            r.registration = non_empty(cells[1]);
            r.model_name = non_empty(cells[2]);
            r.operator_name = non_empty(cells[3]);
            r.source = non_empty(cells[5]).value_or(source_name);
        } else {
            r.source = source_name;
        }
        records.push_back(std::move(r));
    }
    return records;
}

MergeResult merge_metadata(std::span<const RegistrySource> sources) {
    MergeResult result;
    for (const auto& source : sources) {
        for (const auto& record : source.records) {
            auto [it, inserted] = result.records.try_emplace(record.icao24, record);
            if (inserted) continue;
            auto& kept = it->second;
            merge_field(kept.registration, record.registration, result.conflicts);
            merge_field(kept.model_name, record.model_name, result.conflicts);
            merge_field(kept.operator_name, record.operator_name, result.conflicts);
            merge_field(kept.category, record.category, result.conflicts);
        }
    }
    return result;
}

MergeResult merge_metadata_files(std::span<const std::filesystem::path> paths) {
    std::vector<RegistrySource> sources;
    for (const auto& path : paths) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(ErrorKind::MalformedRegistry, path.string() + ": cannot open");
        sources.push_back({path.filename().string(), read_registry(in, path.filename().string())});
    }
    return merge_metadata(sources);
}

// ---------------------------------------------------------------------------

DatasetBuild build_dataset(std::span<const FeatureVector> features, const Registry& registry, int f_min) {
    if (f_min < 0) throw Error(ErrorKind::InvalidArgument, "f_min must be non-negative");
    DatasetBuild build;
    build.data.class_names = category_names();
    for (const auto& fv : features) {
        const auto it = registry.find(fv.icao24);
        if (it == registry.end() || !it->second.category) {
            ++build.dropped_unlabelled;
            continue;
        }
        if (fv.n_flights < static_cast<std::size_t>(f_min)) {
            ++build.dropped_few_flights;
            continue;
        }
        if (build.kept > 0 && fv.values.size() != build.data.X.cols()) {
            throw Error(ErrorKind::ShapeMismatch, "feature vectors differ in length");
        }
        build.data.X.append_row(fv.values);
        build.data.y.push_back(static_cast<int>(*it->second.category));
        build.data.ids.push_back(fv.icao24.str());
        ++build.kept;
    }
    if (build.kept == 0) {
        throw Error(ErrorKind::EmptyDataset, "no labelled aircraft with at least " + std::to_string(f_min) + " flights");
    }
    return build;
}

SplitIndices split_indices(std::span<const int> labels, double train_fraction, std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction <= 1.0)) {
        throw Error(ErrorKind::InvalidArgument, "train fraction must lie in (0, 1]");
    }
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    std::mt19937_64 rng(seed);
    SplitIndices split;
    for (auto& [label, rows] : by_class) {
        std::shuffle(rows.begin(), rows.end(), rng);
        const auto n_eval = static_cast<std::size_t>(
            std::floor(static_cast<double>(rows.size()) * (1.0 - train_fraction) + 1e-9));
        split.eval.insert(split.eval.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(n_eval));
        split.train.insert(split.train.end(), rows.begin() + static_cast<std::ptrdiff_t>(n_eval), rows.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.eval.begin(), split.eval.end());
    return split;
}

std::pair<Dataset, Dataset> split_train_eval(const Dataset& data, double train_fraction, std::uint64_t seed) {
    const auto split = split_indices(data.y, train_fraction, seed);
    return {data.subset(split.train), data.subset(split.eval)};
}

EvaluationReport report_from_confusion(std::vector<std::vector<std::size_t>> confusion,
                                       std::vector<std::string> class_names) {
    const std::size_t k = class_names.size();
    if (confusion.size() != k) throw Error(ErrorKind::ShapeMismatch, "confusion matrix size");
    EvaluationReport r;
    r.class_names = std::move(class_names);
    std::vector<std::size_t> row_sum(k, 0), col_sum(k, 0);
    std::size_t trace = 0;
    for (std::size_t a = 0; a < k; ++a) {
        if (confusion[a].size() != k) throw Error(ErrorKind::ShapeMismatch, "confusion matrix size");
        for (std::size_t b = 0; b < k; ++b) {
            row_sum[a] += confusion[a][b];
            col_sum[b] += confusion[a][b];
            r.total += confusion[a][b];
        }
        trace += confusion[a][a];
    }
    if (r.total == 0) throw Error(ErrorKind::EmptyDataset, "evaluation set is empty");
    r.confusion = std::move(confusion);
    r.accuracy = static_cast<double>(trace) / static_cast<double>(r.total);
    r.micro_precision = r.accuracy;
    r.micro_tpr = r.accuracy;

    const auto ratio = [](std::size_t num, std::size_t den) -> std::optional<double> {
        if (den == 0) return std::nullopt;
        return static_cast<double>(num) / static_cast<double>(den);
    };
    const auto mean = [](const std::vector<std::optional<double>>& values) -> std::optional<double> {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& v : values) {
            if (!v) continue;
            sum += *v;
            ++n;
        }
        if (n == 0) return std::nullopt;
        return sum / static_cast<double>(n);
    };
    for (std::size_t c = 0; c < k; ++c) {
        const std::size_t tp = r.confusion[c][c];
        const std::size_t fn = row_sum[c] - tp;
        const std::size_t fp = col_sum[c] - tp;
        const std::size_t tn = r.total - tp - fn - fp;
        if (row_sum[c] == 0) {
            r.precision.emplace_back();
            r.tpr.emplace_back();
            r.tnr.emplace_back();
            continue;
        }
        r.precision.push_back(ratio(tp, tp + fp));
        r.tpr.push_back(ratio(tp, tp + fn));
        r.tnr.push_back(ratio(tn, tn + fp));
    }
    r.macro_precision = mean(r.precision);
    r.macro_tpr = mean(r.tpr);
    r.macro_tnr = mean(r.tnr);
    return r;
}

EvaluationReport evaluate(const TrainedModel& model, const Dataset& eval_set) {
    const std::size_t k = eval_set.class_names.size();
    if (model.class_names() != eval_set.class_names) {
        throw Error(ErrorKind::ShapeMismatch, "model and evaluation set use different class lists");
    }
    std::vector<std::vector<std::size_t>> confusion(k, std::vector<std::size_t>(k, 0));
    for (std::size_t i = 0; i < eval_set.size(); ++i) {
        const auto predicted = model.predict(eval_set.X.row(i)).label;
        ++confusion[static_cast<std::size_t>(eval_set.y[i])][static_cast<std::size_t>(predicted)];
    }
    return report_from_confusion(std::move(confusion), eval_set.class_names);
}

nlohmann::json EvaluationReport::to_json() const {
    nlohmann::json per_class = nlohmann::json::array();
    for (std::size_t c = 0; c < class_names.size(); ++c) {
        const auto support = std::accumulate(confusion[c].begin(), confusion[c].end(), std::size_t{0});
        per_class.push_back({{"class", class_names[c]},
                             {"support", support},
                             {"precision", optional_json(precision[c])},
                             {"tpr", optional_json(tpr[c])},
                             {"tnr", optional_json(tnr[c])}});
    }
    return {{"class_names", class_names},
            {"confusion", confusion},
            {"total", total},
            {"accuracy", accuracy},
            {"per_class", per_class},
            {"macro", {{"precision", optional_json(macro_precision)},
                       {"tpr", optional_json(macro_tpr)},
                       {"tnr", optional_json(macro_tnr)}}},
            {"micro", {{"precision", micro_precision}, {"tpr", micro_tpr}}}};
}

void EvaluationReport::write_confusion_csv(std::ostream& out) const {
    out << "true\\predicted";
    for (const auto& name : class_names) out << ',' << name;
    out << '\n';
    for (std::size_t a = 0; a < class_names.size(); ++a) {
        out << class_names[a];
        for (std::size_t b = 0; b < class_names.size(); ++b) out << ',' << confusion[a][b];
        out << '\n';
    }
}

// ---------------------------------------------------------------------------

std::vector<SweepCell> sweep(std::span<const Flight> fleet, const Registry& registry, const SweepOptions& options) {
    if (options.repetitions < 1) throw Error(ErrorKind::InvalidArgument, "sweep needs at least one repetition");
    std::vector<SweepCell> cells;
    auto reference_options = options.reference;
    reference_options.seed = options.seed;
    const auto reference = collect_reference_values(fleet, reference_options);

    for (int q : options.q_values) {
        const auto bounds = learn_quantile_bounds(reference, q);
        const auto features = extract_fleet(fleet, bounds, options.jobs);
        for (int f_min : options.f_min_values) {
            SweepCell cell;
            cell.f_min = f_min;
            cell.q = q;
            cell.mean_accuracy = std::numeric_limits<double>::quiet_NaN();
            std::optional<DatasetBuild> build;
            try {
                build = build_dataset(features.vectors, registry, f_min);
            } catch (const Error& e) {
                if (e.kind() != ErrorKind::EmptyDataset) throw;
                logger().warn("sweep point f_min={} q={} has no data", f_min, q);
                cells.push_back(cell);
                continue;
            }
            cell.n_aircraft = build->kept;
            std::vector<double> accuracy(static_cast<std::size_t>(options.repetitions),
                                         std::numeric_limits<double>::quiet_NaN());
            parallel_for(accuracy.size(), options.jobs, [&](std::size_t r) {
                try {
                    const auto [train, eval] =
                        split_train_eval(build->data, options.train_fraction, options.seed + r);
                    if (eval.size() == 0) return;
                    const auto model = train_model(options.family, train, options.params);
                    accuracy[r] = evaluate(model, eval).accuracy;
                } catch (const Error& e) {
                    logger().warn("sweep point f_min={} q={} repetition {} failed: {}", f_min, q, r, e.what());
                }
            });
            double sum = 0.0;
            int used = 0;
            for (double a : accuracy) {
                if (std::isnan(a)) continue;
                sum += a;
                ++used;
            }
            cell.repetitions = used;
            if (used > 0) {
                cell.mean_accuracy = sum / used;
                double var = 0.0;
                for (double a : accuracy) {
                    if (!std::isnan(a)) var += (a - cell.mean_accuracy) * (a - cell.mean_accuracy);
                }
                cell.stddev_accuracy = used > 1 ? std::sqrt(var / (used - 1)) : 0.0;
            }
            logger().info("sweep f_min={} q={} aircraft={} accuracy={}", f_min, q, cell.n_aircraft, cell.mean_accuracy);
            cells.push_back(cell);
        }
    }
    return cells;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepCell> cells) {
    out << "f_min,q,n_aircraft,repetitions,mean_accuracy,stddev_accuracy\n";
    for (const auto& c : cells) {
        out << c.f_min << ',' << c.q << ',' << c.n_aircraft << ',' << c.repetitions << ','
            << (std::isnan(c.mean_accuracy) ? std::string() : io::format_double(c.mean_accuracy)) << ','
            << io::format_double(c.stddev_accuracy) << '\n';
    }
}

// ---------------------------------------------------------------------------

AllocationTable::AllocationTable(std::vector<Range> ranges) : ranges_(std::move(ranges)) {
    std::sort(ranges_.begin(), ranges_.end(), [](const Range& a, const Range& b) { return a.low < b.low; });
    for (std::size_t i = 0; i < ranges_.size(); ++i) {
        if (ranges_[i].low > ranges_[i].high) {
            throw Error(ErrorKind::MalformedFile, "allocation range for " + ranges_[i].country + " has low > high");
        }
        if (i > 0 && ranges_[i].low <= ranges_[i - 1].high) {
            throw Error(ErrorKind::MalformedFile,
                        "allocation ranges of " + ranges_[i - 1].country + " and " + ranges_[i].country + " overlap");
        }
    }
}

AllocationTable AllocationTable::read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || join_header(io::split_csv_quoted(io::trim(line))) != kAllocationHeader) {
        throw Error(ErrorKind::MalformedHeader, "expected header '" + std::string(kAllocationHeader) + "'");
    }
    std::vector<Range> ranges;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (io::trim(line).empty()) continue;
        const auto cells = io::split_csv_quoted(io::trim(line));
        const auto low = cells.size() == 3 ? Icao24::try_parse(io::trim(cells[0])) : std::nullopt;
        const auto high = cells.size() == 3 ? Icao24::try_parse(io::trim(cells[1])) : std::nullopt;
        if (!low || !high || io::trim(cells[2]).empty()) {
            throw Error(ErrorKind::MalformedRow, "allocation table line " + std::to_string(line_no));
        }
        ranges.push_back({low->value, high->value, std::string(io::trim(cells[2]))});
    }
    return AllocationTable(std::move(ranges));
}

std::optional<std::string> AllocationTable::country_of(Icao24 address) const {
    const auto it = std::upper_bound(ranges_.begin(), ranges_.end(), address.value,
                                     [](std::uint32_t v, const Range& r) { return v < r.low; });
    if (it == ranges_.begin()) return std::nullopt;
    const auto& candidate = *std::prev(it);
    if (address.value <= candidate.high) return candidate.country;
    return std::nullopt;
}

// ---------------------------------------------------------------------------

std::string ClassificationResult::predicted_name() const {
    return predicted ? std::string(to_string(*predicted)) : std::string("Other");
}

UnknownReport classify_unknown(std::span<const FeatureVector> features, const TrainedModel& model,
                               const AllocationTable* allocations, const UnknownOptions& options) {
    UnknownReport report;
    report.options = options;
    report.ensemble_scores = model.family() == ModelFamily::Boosted;
    if (!report.ensemble_scores) {
        logger().warn("confidence threshold applied to {} scores; not comparable to ensemble vote shares",
                      to_string(model.family()));
    }
    std::vector<std::optional<Category>> label_category;
    for (const auto& name : model.class_names()) {
        const auto c = parse_category(name);
        if (!c) throw Error(ErrorKind::InvalidArgument, "model class '" + name + "' is not an aircraft category");
        label_category.push_back(c);
    }
    for (const auto& fv : features) {
        if (fv.n_flights < options.min_flights || fv.n_states < options.min_states) {
            ++report.excluded;
            continue;
        }
        const auto prediction = model.predict(fv.values);
        ClassificationResult r;
        r.icao24 = fv.icao24;
        r.confidence = prediction.scores[static_cast<std::size_t>(prediction.label)];
        if (r.confidence >= options.threshold) r.predicted = label_category[static_cast<std::size_t>(prediction.label)];
        r.n_flights = fv.n_flights;
        r.n_states = fv.n_states;
        if (allocations) r.country = allocations->country_of(fv.icao24);
        r.scores = prediction.scores;
        report.results.push_back(std::move(r));
    }
    return report;
}

std::vector<std::pair<std::string, std::size_t>> UnknownReport::bucket_counts() const {
    std::vector<std::pair<std::string, std::size_t>> buckets;
    for (Category c : kAllCategories) buckets.emplace_back(std::string(to_string(c)), 0);
    buckets.emplace_back("Other", 0);
    for (const auto& r : results) {
        ++buckets[r.predicted ? static_cast<std::size_t>(*r.predicted) : kCategoryCount].second;
    }
    return buckets;
}

nlohmann::json UnknownReport::to_json() const {
    nlohmann::json summary = nlohmann::json::array();
    const auto total = static_cast<double>(results.size());
    for (const auto& [name, count] : bucket_counts()) {
        summary.push_back({{"category", name},
                           {"count", count},
                           {"percent", results.empty() ? 0.0 : 100.0 * static_cast<double>(count) / total}});
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : results) {
        rows.push_back({{"icao24", r.icao24.str()},
                        {"predicted", r.predicted_name()},
                        {"confidence", r.confidence},
                        {"n_flights", r.n_flights},
                        {"n_states", r.n_states},
                        {"country", r.country ? nlohmann::json(*r.country) : nlohmann::json(nullptr)},
                        {"scores", r.scores}});
    }
    return {{"threshold", options.threshold},
            {"min_flights", options.min_flights},
            {"min_states", options.min_states},
            {"score_semantics", ensemble_scores ? "ensemble-vote" : "non-comparable"},
            {"excluded", excluded},
            {"classified", results.size()},
            {"summary", summary},
            {"results", rows}};
}

void UnknownReport::write_csv(std::ostream& out) const {
    out << kResultsHeader << '\n';
    for (const auto& r : results) {
        out << r.icao24.str() << ',' << r.predicted_name() << ',' << io::format_double(r.confidence) << ','
            << r.n_flights << ',' << r.n_states << ',' << (r.country ? csv_escape(*r.country) : std::string()) << '\n';
    }
}

std::vector<ClassificationResult> read_results_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || io::trim(line) != kResultsHeader) {
        throw Error(ErrorKind::MalformedHeader, "expected header '" + std::string(kResultsHeader) + "'");
    }
    std::vector<ClassificationResult> results;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (io::trim(line).empty()) continue;
        const auto cells = io::split_csv_quoted(io::trim(line));
        const auto bad = [&] { return Error(ErrorKind::MalformedRow, "results line " + std::to_string(line_no)); };
        if (cells.size() != 6) throw bad();
        ClassificationResult r;
        const auto icao = Icao24::try_parse(cells[0]);
        const auto confidence = io::parse_double(cells[2]);
        const auto flights = io::parse_int(cells[3]);
        const auto states = io::parse_int(cells[4]);
        if (!icao || !confidence || !flights || !states) throw bad();
        r.icao24 = *icao;
        if (cells[1] != "Other") {
            r.predicted = parse_category(cells[1]);
            if (!r.predicted) throw bad();
        }
        r.confidence = *confidence;
        r.n_flights = static_cast<std::size_t>(*flights);
        r.n_states = static_cast<std::size_t>(*states);
        r.country = non_empty(cells[5]);
        results.push_back(std::move(r));
    }
    return results;
}

}  // namespace classifly
