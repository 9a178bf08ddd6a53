#include "classifly/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>

#include "classifly/error.hpp"
#include "classifly/io.hpp"
#include "classifly/reference.hpp"

namespace classifly {
namespace {

double entropy_of_counts(const std::map<int, std::size_t>& counts, std::size_t total) {
    double h = 0.0;
    for (const auto& [label, count] : counts) {
        if (count == 0) continue;
        const double p = static_cast<double>(count) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

double entropy(std::span<const int> labels) {
    if (labels.empty()) throw Error(ErrorKind::EmptyInput, "entropy of an empty label list");
    std::map<int, std::size_t> counts;
    for (int l : labels) ++counts[l];
    return entropy_of_counts(counts, labels.size());
}

EwdResult ewd_discretize(std::span<const double> values, int bins) {
    if (values.empty()) throw Error(ErrorKind::EmptyInput, "cannot discretize an empty feature");
    if (bins < 2) throw Error(ErrorKind::InvalidArgument, "EWD needs at least 2 bins");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    EwdResult r;
    r.low = nearest_rank(sorted, 1, 100);
    r.high = nearest_rank(sorted, 99, 100);
    r.bins.assign(values.size(), 0);
    if (!(r.high > r.low)) return r;
    const double width = (r.high - r.low) / bins;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double pos = std::floor((values[i] - r.low) / width);
        r.bins[i] = static_cast<int>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)));
    }
    return r;
}

double rmi(std::span<const double> feature, std::span<const int> labels, int bins) {
    if (feature.size() != labels.size()) {
        throw Error(ErrorKind::ShapeMismatch, "feature and label lengths differ");
    }
    const double h_cat = entropy(labels);
    if (h_cat <= 0.0) throw Error(ErrorKind::DegenerateLabels, "labels have a single class");
    const auto disc = ewd_discretize(feature, bins);

    std::vector<std::map<int, std::size_t>> joint(static_cast<std::size_t>(bins));
    std::vector<std::size_t> marginal(static_cast<std::size_t>(bins), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto b = static_cast<std::size_t>(disc.bins[i]);
        ++joint[b][labels[i]];
        ++marginal[b];
    }
    double h_cond = 0.0;
    const auto n = static_cast<double>(labels.size());
    for (std::size_t b = 0; b < joint.size(); ++b) {
        if (marginal[b] == 0) continue;
        h_cond += static_cast<double>(marginal[b]) / n * entropy_of_counts(joint[b], marginal[b]);
    }
    const double percent = 100.0 * (h_cat - h_cond) / h_cat;
    return std::clamp(percent, 0.0, 100.0);
}

Matrix correlation_matrix(const Matrix& features) {
    const std::size_t n = features.rows();
    const std::size_t d = features.cols();
    if (n < 2) throw Error(ErrorKind::TooFewRows, "correlation needs at least 2 rows");
    std::vector<double> mean(d, 0.0), norm(d, 0.0);
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) mean[c] += features(r, c);
    for (auto& m : mean) m /= static_cast<double>(n);
    Matrix centered(n, d);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            centered(r, c) = features(r, c) - mean[c];
            norm[c] += centered(r, c) * centered(r, c);
        }
    }
    for (auto& v : norm) v = std::sqrt(v);

    Matrix corr(d, d, 0.0);
    for (std::size_t a = 0; a < d; ++a) {
        corr(a, a) = 1.0;
        if (norm[a] == 0.0) continue;
        for (std::size_t b = a + 1; b < d; ++b) {
            if (norm[b] == 0.0) continue;
            double dot = 0.0;
            for (std::size_t r = 0; r < n; ++r) dot += centered(r, a) * centered(r, b);
            const double value = std::clamp(dot / (norm[a] * norm[b]), -1.0, 1.0);
            corr(a, b) = value;
            corr(b, a) = value;
        }
    }
    return corr;
}

nlohmann::json RmiReport::to_json() const {
    nlohmann::json features_json = nlohmann::json::array();
    for (const auto& f : features) {
        features_json.push_back({{"feature", "f_" + std::to_string(f.index + 1)},
                                 {"group", f.group},
                                 {"rmi_percent", f.rmi_percent},
                                 {"low", f.low},
                                 {"high", f.high}});
    }
    nlohmann::json groups = nlohmann::json::object();
    for (const auto& [name, mean] : group_means) groups[name] = mean;
    return {{"bins", bins},
            {"label_entropy_bits", label_entropy_bits},
            {"features", features_json},
            {"group_mean_rmi_percent", groups}};
}

RmiReport rmi_report(const Matrix& features, std::span<const int> labels, int q, int bins) {
    if (features.cols() != kFeatureGroupCount * static_cast<std::size_t>(q)) {
        throw Error(ErrorKind::ShapeMismatch, "feature matrix is not 12q wide");
    }
    RmiReport report;
    report.bins = bins;
    report.label_entropy_bits = entropy(labels);
    std::vector<double> column(features.rows());
    for (std::size_t c = 0; c < features.cols(); ++c) {
        for (std::size_t r = 0; r < features.rows(); ++r) column[r] = features(r, c);
        const auto disc = ewd_discretize(column, bins);
        const auto group = kAllFeatureGroups[c / static_cast<std::size_t>(q)];
        report.features.push_back({c, std::string(to_string(group)), rmi(column, labels, bins), disc.low, disc.high});
    }
    for (std::size_t g = 0; g < kFeatureGroupCount; ++g) {
        double sum = 0.0;
        for (int j = 0; j < q; ++j) sum += report.features[g * static_cast<std::size_t>(q) + j].rmi_percent;
        report.group_means.emplace_back(std::string(to_string(kAllFeatureGroups[g])), sum / q);
    }
    return report;
}

void write_correlation_csv(std::ostream& out, const Matrix& correlation) {
    out << "feature";
    for (std::size_t c = 0; c < correlation.cols(); ++c) out << ",f_" << c + 1;
    out << '\n';
    for (std::size_t r = 0; r < correlation.rows(); ++r) {
        out << "f_" << r + 1;
        for (std::size_t c = 0; c < correlation.cols(); ++c) out << ',' << io::format_double(correlation(r, c));
        out << '\n';
    }
}

}  // namespace classifly
