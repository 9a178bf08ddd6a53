#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "classifly/matrix.hpp"

namespace classifly {

/// Shannon entropy (bits) of the empirical label distribution.
double entropy(std::span<const int> labels);

struct EwdResult {
    std::vector<int> bins;
    double low = 0.0;   // nearest-rank 1st percentile
    double high = 0.0;  // nearest-rank 99th percentile
};

/// Equal-width discretization between the 1st and 99th percentiles; values
/// outside are clamped into the end bins. A zero-width range maps everything
/// to bin 0.
EwdResult ewd_discretize(std::span<const double> values, int bins = 20);

/// Share of label entropy removed by the discretized feature, in percent.
/// Errors: ShapeMismatch, EmptyInput, DegenerateLabels.
double rmi(std::span<const double> feature, std::span<const int> labels, int bins = 20);

/// Pearson correlation of the columns. Constant columns correlate 0 with
/// everything else and 1 with themselves. Errors: TooFewRows.
Matrix correlation_matrix(const Matrix& features);

struct FeatureRmi {
    std::size_t index = 0;  // 0-based column
    std::string group;
    double rmi_percent = 0.0;
    double low = 0.0;
    double high = 0.0;
};

struct RmiReport {
    int bins = 20;
    double label_entropy_bits = 0.0;
    std::vector<FeatureRmi> features;
    std::vector<std::pair<std::string, double>> group_means;

    nlohmann::json to_json() const;
};

/// RMI for every column of a 12q feature matrix, plus per-group means.
RmiReport rmi_report(const Matrix& features, std::span<const int> labels, int q, int bins = 20);

/// Square CSV with an `f_i` header row and column.
void write_correlation_csv(std::ostream& out, const Matrix& correlation);

}  // namespace classifly
