#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "classifly/dataset.hpp"

namespace classifly {

/// Cubic kernel (u.v / d + 1)^3 with d the input dimension.
double cubic_kernel(std::span<const double> u, std::span<const double> v) noexcept;

struct SmoOptions {
    double tolerance = 1e-3;
    /// Cap on pair updates; 0 picks max(10'000'000, 100 n).
    std::size_t max_iterations = 0;
};

struct SmoSolution {
    std::vector<double> alpha;
    double bias = 0.0;
    bool converged = false;
    std::size_t iterations = 0;
};

/// Soft-margin dual for labels y in {-1, +1} over a precomputed Gram matrix.
/// Decision function: f(x) = sum_i alpha_i y_i K(x_i, x) + bias.
SmoSolution solve_smo(const Matrix& gram, std::span<const double> y, double C,
                      const SmoOptions& options = {});

/// One-vs-all machine for a single class.
struct BinarySvm {
    Matrix support_vectors;       // standardized inputs
    std::vector<double> coef;     // alpha_i * y_i
    std::vector<double> alpha;
    double bias = 0.0;
    bool converged = true;

    double decision(std::span<const double> standardized_x) const;
};

struct SvmModel {
    Standardizer standardizer;
    std::vector<BinarySvm> machines;  // one per class; empty for classes absent in training
    std::vector<std::string> class_names;
    double C = 1.0;

    bool converged() const noexcept;

    std::vector<double> decision_values(std::span<const double> x) const;
    /// Argmax decision value; scores are the softmax of the decision values,
    /// a ranking convention rather than a probability.
    Prediction predict(std::span<const double> x) const;
};

/// Errors: InvalidArgument (C <= 0), TooFewSamples, DegenerateLabels.
/// Non-convergence returns the best iterate and logs a warning.
SvmModel svm_train(const Dataset& data, double C = 4.795, const SmoOptions& options = {});

}  // namespace classifly
