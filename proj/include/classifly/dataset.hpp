#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "classifly/matrix.hpp"

namespace classifly {

/// Labelled feature matrix. `ids` is optional row provenance (aircraft
/// addresses) and may be empty.
struct Dataset {
    Matrix X;
    std::vector<int> y;
    std::vector<std::string> class_names;
    std::vector<std::string> ids;

    std::size_t size() const noexcept { return y.size(); }
    std::size_t dim() const noexcept { return X.cols(); }

    /// Throws Error(ShapeMismatch) or Error(InvalidArgument) on a broken
    /// invariant (row count, label range, non-finite entry).
    void validate() const;

    Dataset subset(std::span<const std::size_t> rows) const;

    /// Number of distinct labels present.
    std::size_t distinct_labels() const;
};

/// Per-column training statistics. Columns with zero spread are only
/// mean-centered.
class Standardizer {
public:
    Standardizer() = default;
    static Standardizer fit(const Matrix& X);

    std::vector<double> transform(std::span<const double> x) const;
    Matrix transform(const Matrix& X) const;

    std::span<const double> mean() const noexcept { return mean_; }
    std::span<const double> stddev() const noexcept { return stddev_; }

    nlohmann::json to_json() const;
    static Standardizer from_json(const nlohmann::json& doc);

private:
    std::vector<double> mean_;
    std::vector<double> stddev_;
};

/// Predicted label plus per-class scores in [0, 1] summing to 1.
struct Prediction {
    int label = 0;
    std::vector<double> scores;
};

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax(std::span<const double> values) noexcept;

}  // namespace classifly
