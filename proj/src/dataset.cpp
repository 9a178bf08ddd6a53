#include "classifly/dataset.hpp"

#include <cmath>
#include <set>
#include <string>

#include "classifly/error.hpp"

namespace classifly {

void Dataset::validate() const {
    if (X.rows() != y.size()) {
        throw Error(ErrorKind::ShapeMismatch, "dataset has " + std::to_string(X.rows()) + " rows but " +
                                                  std::to_string(y.size()) + " labels");
    }
    if (!ids.empty() && ids.size() != y.size()) throw Error(ErrorKind::ShapeMismatch, "ids and labels differ in length");
    for (int label : y) {
        if (label < 0 || static_cast<std::size_t>(label) >= class_names.size()) {
            throw Error(ErrorKind::InvalidArgument, "label " + std::to_string(label) + " outside class list");
        }
    }
    for (double v : X.data()) {
        if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "dataset contains a non-finite value");
    }
}

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
    Dataset out;
    out.class_names = class_names;
    out.X = Matrix(0, 0);
    for (std::size_t r : rows) {
        out.X.append_row(X.row(r));
        out.y.push_back(y[r]);
        if (!ids.empty()) out.ids.push_back(ids[r]);
    }
    if (rows.empty()) out.X = Matrix(0, X.cols());
    return out;
}

std::size_t Dataset::distinct_labels() const {
    return std::set<int>(y.begin(), y.end()).size();
}

Standardizer Standardizer::fit(const Matrix& X) {
    Standardizer s;
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    s.mean_.assign(d, 0.0);
    s.stddev_.assign(d, 0.0);
    if (n == 0) return s;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) s.mean_[c] += X(r, c);
    for (auto& m : s.mean_) m /= static_cast<double>(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            const double dev = X(r, c) - s.mean_[c];
            s.stddev_[c] += dev * dev;
        }
    }
    for (auto& v : s.stddev_) v = std::sqrt(v / static_cast<double>(n));
    return s;
}

std::vector<double> Standardizer::transform(std::span<const double> x) const {
    std::vector<double> out(x.size());
    for (std::size_t c = 0; c < x.size(); ++c) {
        const double centered = x[c] - mean_[c];
        out[c] = stddev_[c] > 0.0 ? centered / stddev_[c] : centered;
    }
    return out;
}

Matrix Standardizer::transform(const Matrix& X) const {
    Matrix out(X.rows(), X.cols());
    for (std::size_t r = 0; r < X.rows(); ++r) {
        const auto row = transform(X.row(r));
        std::copy(row.begin(), row.end(), out.row(r).begin());
    }
    return out;
}

nlohmann::json Standardizer::to_json() const { return {{"mean", mean_}, {"stddev", stddev_}}; }

Standardizer Standardizer::from_json(const nlohmann::json& doc) {
    Standardizer s;
    s.mean_ = doc.at("mean").get<std::vector<double>>();
    s.stddev_ = doc.at("stddev").get<std::vector<double>>();
    if (s.mean_.size() != s.stddev_.size()) throw Error(ErrorKind::MalformedModel, "standardizer shape mismatch");
    return s;
}

std::size_t argmax(std::span<const double> values) noexcept {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

}  // namespace classifly
