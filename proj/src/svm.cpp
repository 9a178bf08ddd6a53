#include "classifly/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "classifly/error.hpp"
#include "classifly/log.hpp"

namespace classifly {
namespace {

constexpr double kTau = 1e-12;

}  // namespace

double cubic_kernel(std::span<const double> u, std::span<const double> v) noexcept {
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
    const double base = dot / static_cast<double>(u.empty() ? 1 : u.size()) + 1.0;
    return base * base * base;
}

// Sequential minimal optimization with second-order working-set selection.
// The dual is min 1/2 a'Qa - e'a with Q_ij = y_i y_j K_ij, 0 <= a <= C, y'a = 0.
// Stops when the maximal KKT violation (Gmax + Gmax2) drops below tolerance.
SmoSolution solve_smo(const Matrix& gram, std::span<const double> y, double C, const SmoOptions& options) {
    const std::size_t n = y.size();
    if (gram.rows() != n || gram.cols() != n) throw Error(ErrorKind::ShapeMismatch, "gram matrix must be n x n");
    SmoSolution sol;
    sol.alpha.assign(n, 0.0);
    std::vector<double> G(n, -1.0);
    const auto& alpha = sol.alpha;
    const auto upper = [&](std::size_t t) { return alpha[t] >= C; };
    const auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };
    const std::size_t max_iter = options.max_iterations > 0 ? options.max_iterations
                                                             : std::max<std::size_t>(10'000'000, 100 * n);
    const auto Q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * gram(i, j); };

    while (sol.iterations < max_iter) {
        double gmax = -std::numeric_limits<double>::infinity();
        double gmax2 = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t i_sel = -1;
        for (std::size_t t = 0; t < n; ++t) {
            if (y[t] > 0) {
                if (!upper(t) && -G[t] >= gmax) { gmax = -G[t]; i_sel = static_cast<std::ptrdiff_t>(t); }
            } else {
                if (!lower(t) && G[t] >= gmax) { gmax = G[t]; i_sel = static_cast<std::ptrdiff_t>(t); }
            }
        }
        std::ptrdiff_t j_sel = -1;
        double best_obj = std::numeric_limits<double>::infinity();
        if (i_sel >= 0) {
            const auto i = static_cast<std::size_t>(i_sel);
            for (std::size_t t = 0; t < n; ++t) {
                double grad_diff;
                double quad;
                if (y[t] > 0) {
                    if (lower(t)) continue;
                    gmax2 = std::max(gmax2, G[t]);
                    grad_diff = gmax + G[t];
                    quad = gram(i, i) + gram(t, t) - 2.0 * y[i] * Q(i, t);
                } else {
                    if (upper(t)) continue;
                    gmax2 = std::max(gmax2, -G[t]);
                    grad_diff = gmax - G[t];
                    quad = gram(i, i) + gram(t, t) + 2.0 * y[i] * Q(i, t);
                }
                if (grad_diff <= 0.0) continue;
                const double obj = -(grad_diff * grad_diff) / (quad > 0.0 ? quad : kTau);
                if (obj <= best_obj) {
                    best_obj = obj;
                    j_sel = static_cast<std::ptrdiff_t>(t);
                }
            }
        }
        if (i_sel < 0 || j_sel < 0 || gmax + gmax2 < options.tolerance) {
            sol.converged = true;
            break;
        }
        ++sol.iterations;

        const auto i = static_cast<std::size_t>(i_sel);
        const auto j = static_cast<std::size_t>(j_sel);
        const double old_i = sol.alpha[i];
        const double old_j = sol.alpha[j];
        double& ai = sol.alpha[i];
        double& aj = sol.alpha[j];
        if (y[i] != y[j]) {
            double quad = gram(i, i) + gram(j, j) + 2.0 * Q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (-G[i] - G[j]) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) { aj = 0.0; ai = diff; }
            } else {
                if (ai < 0.0) { ai = 0.0; aj = -diff; }
            }
            if (diff > 0.0) {
                if (ai > C) { ai = C; aj = C - diff; }
            } else {
                if (aj > C) { aj = C; ai = C + diff; }
            }
        } else {
            double quad = gram(i, i) + gram(j, j) - 2.0 * Q(i, j);
            if (quad <= 0.0) quad = kTau;
            const double delta = (G[i] - G[j]) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > C) {
                if (ai > C) { ai = C; aj = sum - C; }
            } else {
                if (aj < 0.0) { aj = 0.0; ai = sum; }
            }
            if (sum > C) {
                if (aj > C) { aj = C; ai = sum - C; }
            } else {
                if (ai < 0.0) { ai = 0.0; aj = sum; }
            }
        }
        const double d_i = ai - old_i;
        const double d_j = aj - old_j;
        for (std::size_t t = 0; t < n; ++t) G[t] += Q(i, t) * d_i + Q(j, t) * d_j;
    }

    // Bias from the free vectors, else the midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yg = y[t] * G[t];
        if (upper(t)) {
            if (y[t] < 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (lower(t)) {
            if (y[t] > 0) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : 0.5 * (ub + lb);
    sol.bias = -rho;
    return sol;
}

double BinarySvm::decision(std::span<const double> standardized_x) const {
    double f = bias;
    for (std::size_t i = 0; i < coef.size(); ++i) f += coef[i] * cubic_kernel(support_vectors.row(i), standardized_x);
    return f;
}

bool SvmModel::converged() const noexcept {
    return std::all_of(machines.begin(), machines.end(), [](const BinarySvm& m) { return m.converged; });
}

std::vector<double> SvmModel::decision_values(std::span<const double> x) const {
    const auto z = standardizer.transform(x);
    std::vector<double> values;
    values.reserve(machines.size());
    for (const auto& m : machines) values.push_back(m.decision(z));
    return values;
}

Prediction SvmModel::predict(std::span<const double> x) const {
    const auto values = decision_values(x);
    Prediction p;
    p.label = static_cast<int>(argmax(values));
    const double top = values[static_cast<std::size_t>(p.label)];
    double total = 0.0;
    for (double v : values) {
        p.scores.push_back(std::exp(v - top));
        total += p.scores.back();
    }
    for (auto& s : p.scores) s /= total;
    return p;
}

SvmModel svm_train(const Dataset& data, double C, const SmoOptions& options) {
    if (!(C > 0.0) || !std::isfinite(C)) throw Error(ErrorKind::InvalidArgument, "C must be positive");
    data.validate();
    if (data.size() < 2) throw Error(ErrorKind::TooFewSamples, "SVM needs at least 2 samples");
    if (data.distinct_labels() < 2) throw Error(ErrorKind::DegenerateLabels, "SVM needs at least 2 classes");

    SvmModel model;
    model.C = C;
    model.class_names = data.class_names;
    model.standardizer = Standardizer::fit(data.X);
    const Matrix Z = model.standardizer.transform(data.X);
    const std::size_t n = data.size();

    Matrix gram(n, n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            const double k = cubic_kernel(Z.row(a), Z.row(b));
            gram(a, b) = k;
            gram(b, a) = k;
        }
    }

    std::vector<double> y(n);
    for (std::size_t c = 0; c < data.class_names.size(); ++c) {
        BinarySvm machine;
        const bool present = std::find(data.y.begin(), data.y.end(), static_cast<int>(c)) != data.y.end();
        if (!present) {
            machine.bias = -1.0;
            machine.support_vectors = Matrix(0, data.dim());
            model.machines.push_back(std::move(machine));
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) y[i] = data.y[i] == static_cast<int>(c) ? 1.0 : -1.0;
        const auto sol = solve_smo(gram, y, C, options);
        if (!sol.converged) {
            logger().warn("SMO for class '{}' stopped after {} iterations without converging",
                          data.class_names[c], sol.iterations);
        }
        machine.bias = sol.bias;
        machine.converged = sol.converged;
        machine.support_vectors = Matrix(0, data.dim());
        for (std::size_t i = 0; i < n; ++i) {
            if (sol.alpha[i] <= 0.0) continue;
            machine.support_vectors.append_row(Z.row(i));
            machine.alpha.push_back(sol.alpha[i]);
            machine.coef.push_back(sol.alpha[i] * y[i]);
        }
        model.machines.push_back(std::move(machine));
    }
    return model;
}

}  // namespace classifly
