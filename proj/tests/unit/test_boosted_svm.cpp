#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "classifly/boosted.hpp"
#include "classifly/svm.hpp"
#include "helpers.hpp"

using namespace classifly;
using testutil::error_kind;

namespace {

Dataset separable_2d(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Dataset d;
    d.X = Matrix(0, 2);
    d.class_names = {"neg", "pos"};
    while (static_cast<int>(d.size()) < n) {
        const double a = u(rng), b = u(rng);
        const double margin = a + 0.5 * b;
        if (std::abs(margin) < 0.2) continue;
        d.X.append_row(std::vector{a, b});
        d.y.push_back(margin > 0 ? 1 : 0);
    }
    return d;
}

DecisionTree stump(int n_classes, int left_class, int right_class) {
    std::vector<DecisionTree::Node> nodes(3);
    nodes[0].feature = 0;
    nodes[0].threshold = 0.0;
    nodes[0].left = 1;
    nodes[0].right = 2;
    nodes[0].distribution.assign(static_cast<std::size_t>(n_classes), 1.0 / n_classes);
    nodes[1].distribution.assign(static_cast<std::size_t>(n_classes), 0.0);
    nodes[1].distribution[static_cast<std::size_t>(left_class)] = 1.0;
    nodes[2].distribution.assign(static_cast<std::size_t>(n_classes), 0.0);
    nodes[2].distribution[static_cast<std::size_t>(right_class)] = 1.0;
    return DecisionTree(nodes, n_classes);
}

double accuracy_of(const auto& model, const Dataset& d) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < d.size(); ++i) ok += model.predict(d.X.row(i)).label == d.y[i];
    return static_cast<double>(ok) / static_cast<double>(d.size());
}

}  // namespace

TEST_CASE("boosting reaches full training accuracy on separable data within 10 learners") {
    const auto d = separable_2d(80, 1);
    const auto m = boosted_train(d, 10, 1, 0.792);
    CHECK(m.learners.size() <= 10);
    CHECK(accuracy_of(m, d) == 1.0);
    for (double w : m.learner_weights) CHECK(std::isfinite(w));
}

TEST_CASE("a perfect first learner stops boosting") {
    const auto d = separable_2d(40, 2);
    const auto m = boosted_train(d, 50, 125, 0.5);
    REQUIRE(m.learners.size() == 1);
    CHECK(m.learner_weights[0] == kPerfectLearnerWeight);
    const auto p = m.predict(d.X.row(0));
    CHECK(p.scores[static_cast<std::size_t>(p.label)] == 1.0);
}

TEST_CASE("one learner equals a single weighted tree") {
    const auto d = testutil::blobs(30, 3, 4, 0.8, 3);
    const auto m = boosted_train(d, 1, 3, 0.792);
    REQUIRE(m.learners.size() == 1);
    const auto tree = DecisionTree::fit(d.X, d.y, {}, 3, 3);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(m.predict(d.X.row(i)).label == tree.predict(d.X.row(i)));
}

TEST_CASE("boosted scores are normalized vote shares") {
    BoostedModel m;
    m.class_names = {"a", "b", "c"};
    m.learners = {stump(3, 0, 1), stump(3, 1, 0)};
    m.learner_weights = {2.0, 2.0};
    const auto p = m.predict(std::vector{-1.0});
    CHECK(p.scores == std::vector<double>{0.5, 0.5, 0.0});
    CHECK(p.label == 0);

    // five learners with hand-summed weights: class 2 gets 1.5 + 0.5, class 0
    // gets 1.0, class 1 gets 0.25 + 0.75
    m.learners = {stump(3, 2, 0), stump(3, 0, 0), stump(3, 1, 0), stump(3, 2, 0), stump(3, 1, 0)};
    m.learner_weights = {1.5, 1.0, 0.25, 0.5, 0.75};
    const auto q = m.predict(std::vector{-1.0});
    CHECK(q.scores[0] == doctest::Approx(1.0 / 4.0));
    CHECK(q.scores[1] == doctest::Approx(1.0 / 4.0));
    CHECK(q.scores[2] == doctest::Approx(2.0 / 4.0));
    CHECK(q.label == 2);
}

TEST_CASE("boosted scores sum to one and argmax matches on noisy data") {
    const auto d = testutil::blobs(40, 4, 6, 1.0, 5);
    const auto m = boosted_train(d, 30, 4, 0.792);
    CHECK(m.learners.size() > 1);
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto p = m.predict(d.X.row(i));
        CHECK(std::accumulate(p.scores.begin(), p.scores.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(static_cast<std::size_t>(p.label) == argmax(p.scores));
    }
}

TEST_CASE("boosting validates its inputs") {
    auto d = separable_2d(10, 4);
    CHECK(error_kind([&] { boosted_train(d, 0, 1, 0.5); }) == ErrorKind::InvalidArgument);
    CHECK(error_kind([&] { boosted_train(d, 5, 1, 0.0); }) == ErrorKind::InvalidArgument);
    std::fill(d.y.begin(), d.y.end(), 1);
    CHECK(error_kind([&] { boosted_train(d, 5, 1, 0.5); }) == ErrorKind::DegenerateLabels);
}

TEST_CASE("svm separates a linearly separable fixture and satisfies KKT") {
    const auto d = separable_2d(60, 6);
    const double C = 4.795;
    const auto m = svm_train(d, C);
    CHECK(m.converged());
    CHECK(accuracy_of(m, d) == 1.0);

    // KKT on the positive-class machine, checked against the standardized data.
    const auto& machine = m.machines[1];
    const Matrix Z = m.standardizer.transform(d.X);
    for (std::size_t i = 0; i < d.size(); ++i) {
        double alpha = 0.0;
        for (std::size_t s = 0; s < machine.support_vectors.rows(); ++s) {
            if (std::equal(Z.row(i).begin(), Z.row(i).end(), machine.support_vectors.row(s).begin())) {
                alpha = machine.alpha[s];
            }
        }
        const double y = d.y[i] == 1 ? 1.0 : -1.0;
        const double margin = y * machine.decision(Z.row(i));
        CHECK(alpha >= -1e-12);
        CHECK(alpha <= C + 1e-12);
        if (alpha <= 1e-8) CHECK(margin >= 1.0 - 1e-2);
        else if (alpha >= C - 1e-8) CHECK(margin <= 1.0 + 1e-2);
        else CHECK(std::abs(margin - 1.0) <= 1e-2);
    }
}

TEST_CASE("svm scores, symmetry and affine invariance") {
    const auto d = separable_2d(40, 7);
    const auto m = svm_train(d);
    auto swapped = d;
    for (auto& y : swapped.y) y = 1 - y;
    const auto ms = svm_train(swapped);
    auto shifted = d;
    for (std::size_t i = 0; i < shifted.size(); ++i) {
        shifted.X(i, 0) = 3.0 * shifted.X(i, 0) + 10.0;
        shifted.X(i, 1) = 0.5 * shifted.X(i, 1) - 4.0;
    }
    const auto ma = svm_train(shifted);

    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        const std::vector<double> x = {u(rng), u(rng)};
        const auto p = m.predict(x);
        CHECK(p.scores[0] + p.scores[1] == doctest::Approx(1.0).epsilon(1e-12));
        const auto dv = m.decision_values(x);
        const auto dvs = ms.decision_values(x);
        CHECK(dv[0] == doctest::Approx(dvs[1]).epsilon(1e-6));
        CHECK(dv[1] == doctest::Approx(dvs[0]).epsilon(1e-6));
        CHECK(ma.predict(std::vector{3.0 * x[0] + 10.0, 0.5 * x[1] - 4.0}).label == p.label);
    }
    // a support vector sits on the side of its label
    const auto& machine = m.machines[1];
    for (std::size_t s = 0; s < machine.support_vectors.rows(); ++s) {
        const double f = machine.decision(machine.support_vectors.row(s));
        CHECK((f > 0) == (machine.coef[s] > 0));
    }
}

TEST_CASE("svm validation") {
    auto d = separable_2d(10, 9);
    CHECK(error_kind([&] { svm_train(d, 0.0); }) == ErrorKind::InvalidArgument);
    std::fill(d.y.begin(), d.y.end(), 0);
    CHECK(error_kind([&] { svm_train(d); }) == ErrorKind::DegenerateLabels);
}

TEST_CASE("SMO on a tiny hand problem") {
    // two points at +-1 in one dimension with a linear kernel: alpha = 0.5, b = 0
    Matrix gram(2, 2);
    gram(0, 0) = 1.0;
    gram(0, 1) = -1.0;
    gram(1, 0) = -1.0;
    gram(1, 1) = 1.0;
    const auto sol = solve_smo(gram, std::vector{1.0, -1.0}, 10.0);
    CHECK(sol.converged);
    CHECK(sol.alpha[0] == doctest::Approx(0.5));
    CHECK(sol.alpha[1] == doctest::Approx(0.5));
    CHECK(sol.bias == doctest::Approx(0.0));
}

TEST_CASE("cubic kernel") {
    CHECK(cubic_kernel(std::vector{1.0, 2.0}, std::vector{3.0, 4.0}) == doctest::Approx(std::pow(11.0 / 2.0 + 1.0, 3)));
}
