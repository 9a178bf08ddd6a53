#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "classifly/analysis.hpp"
#include "helpers.hpp"

using namespace classifly;
using testutil::error_kind;

TEST_CASE("entropy examples") {
    std::vector<int> uniform;
    for (int c = 0; c < 8; ++c) uniform.insert(uniform.end(), 5, c);
    CHECK(std::abs(entropy(uniform) - 3.0) <= 1e-12);
    CHECK(entropy(std::vector{2, 2, 2}) == 0.0);
    const double expected = -(0.75 * std::log2(0.75) + 0.25 * std::log2(0.25));
    CHECK(entropy(std::vector{0, 0, 0, 1}) == doctest::Approx(expected).epsilon(1e-15));
    CHECK(entropy(std::vector{0, 0, 0, 1}) == doctest::Approx(0.811278124459).epsilon(1e-11));
    CHECK(entropy(std::vector{1, 0, 0, 0}) == entropy(std::vector{0, 0, 0, 1}));
    CHECK(error_kind([] { entropy(std::vector<int>{}); }) == ErrorKind::EmptyInput);
}

TEST_CASE("equal-width discretization") {
    SUBCASE("constant values all map to bin 0") {
        const auto r = ewd_discretize(std::vector(50, 7.0), 20);
        for (int b : r.bins) CHECK(b == 0);
        CHECK(r.low == 7.0);
        CHECK(r.high == 7.0);
    }
    SUBCASE("values beyond the percentiles are clamped") {
        std::vector<double> v;
        for (int i = 1; i <= 1000; ++i) v.push_back(i);
        v[0] = -1e6;
        v[999] = 1e6;
        const auto r = ewd_discretize(v, 20);
        CHECK(r.low == 10.0);
        CHECK(r.high == 990.0);
        CHECK(r.bins[0] == 0);
        CHECK(r.bins[4] == 0);
        CHECK(r.bins[999] == 19);
    }
    SUBCASE("matches a linear-scan counting oracle") {
        std::mt19937_64 rng(12);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::vector<double> v(1000);
        for (auto& x : v) x = u(rng);
        const auto r = ewd_discretize(v, 20);
        std::vector<double> sorted = v;
        std::sort(sorted.begin(), sorted.end());
        CHECK(r.low == sorted[9]);    // rank ceil(1000 * 0.01) = 10
        CHECK(r.high == sorted[989]); // rank ceil(1000 * 0.99) = 990
        const double width = (r.high - r.low) / 20.0;
        std::vector<int> expected(20, 0), got(20, 0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            int bin = 0;
            for (int b = 1; b < 20; ++b) {
                if (v[i] >= r.low + b * width) bin = b;
            }
            ++expected[static_cast<std::size_t>(bin)];
            ++got[static_cast<std::size_t>(r.bins[i])];
        }
        CHECK(got == expected);
    }
    CHECK(error_kind([] { ewd_discretize(std::vector<double>{}, 20); }) == ErrorKind::EmptyInput);
}

TEST_CASE("relative mutual information identities") {
    std::vector<int> labels;
    std::vector<double> encoded, constant;
    for (int i = 0; i < 400; ++i) {
        labels.push_back(i % 4);
        encoded.push_back(static_cast<double>(i % 4) * 10.0);
        constant.push_back(3.0);
    }
    CHECK(std::abs(rmi(encoded, labels) - 100.0) <= 1e-9);
    CHECK(std::abs(rmi(constant, labels)) <= 1e-9);

    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<int> y(10000);
    std::vector<double> x(10000);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = static_cast<int>(i % 8);
        x[i] = u(rng);
    }
    std::shuffle(x.begin(), x.end(), rng);
    const double independent = rmi(x, y);
    CHECK(independent >= 0.0);
    CHECK(independent < 5.0);

    CHECK(error_kind([&] { rmi(constant, std::vector<int>(400, 1)); }) == ErrorKind::DegenerateLabels);
    CHECK(error_kind([&] { rmi(std::vector{1.0}, std::vector{0, 1}); }) == ErrorKind::ShapeMismatch);
}

TEST_CASE("RMI is unchanged by a strictly increasing map") {
    std::mt19937_64 rng(22);
    std::normal_distribution<double> n01(0.0, 1.0);
    std::vector<int> y(2000);
    std::vector<double> x(2000), tx(2000);
    for (std::size_t i = 0; i < y.size(); ++i) {
        y[i] = static_cast<int>(i % 3);
        x[i] = n01(rng) + y[i];
        tx[i] = 5.0 * x[i] + 2.0;
    }
    CHECK(rmi(x, y) == doctest::Approx(rmi(tx, y)).epsilon(1e-12));
}

TEST_CASE("correlation matrix") {
    // 5x3 fixture: column 1 = -column 0, column 2 arbitrary.
    Matrix m(0, 3);
    const double rows[5][3] = {{1, -1, 2}, {2, -2, 1}, {3, -3, 4}, {4, -4, 3}, {6, -6, 9}};
    for (const auto& r : rows) m.append_row(std::vector<double>(r, r + 3));
    const auto c = correlation_matrix(m);
    CHECK(c(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c(0, 1) == doctest::Approx(-1.0).epsilon(1e-12));

    // textbook formula on columns 0 and 2
    double mx = 0, my = 0;
    for (const auto& r : rows) {
        mx += r[0] / 5.0;
        my += r[2] / 5.0;
    }
    double sxy = 0, sxx = 0, syy = 0;
    for (const auto& r : rows) {
        sxy += (r[0] - mx) * (r[2] - my);
        sxx += (r[0] - mx) * (r[0] - mx);
        syy += (r[2] - my) * (r[2] - my);
    }
    CHECK(std::abs(c(0, 2) - sxy / std::sqrt(sxx * syy)) <= 1e-12);
    CHECK(c(2, 0) == c(0, 2));

    Matrix with_constant(0, 2);
    for (int i = 0; i < 4; ++i) with_constant.append_row(std::vector<double>{static_cast<double>(i), 1.0});
    const auto cc = correlation_matrix(with_constant);
    CHECK(cc(0, 1) == 0.0);
    CHECK(cc(1, 1) == 1.0);

    Matrix one(0, 2);
    one.append_row(std::vector<double>{1.0, 2.0});
    CHECK(error_kind([&] { correlation_matrix(one); }) == ErrorKind::TooFewRows);

    std::ostringstream out;
    write_correlation_csv(out, c);
    CHECK(out.str().rfind("feature,f_1,f_2,f_3\nf_1,", 0) == 0);
}

TEST_CASE("RMI report covers every column with group means") {
    std::mt19937_64 rng(30);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int q = 2;
    Matrix x(0, 12 * q);
    std::vector<int> y;
    std::vector<double> row(12 * q);
    for (int i = 0; i < 200; ++i) {
        y.push_back(i % 2);
        for (auto& v : row) v = u(rng);
        row[0] = y.back();
        x.append_row(row);
    }
    const auto report = rmi_report(x, y, q);
    REQUIRE(report.features.size() == 24);
    CHECK(report.features[0].rmi_percent == doctest::Approx(100.0));
    CHECK(report.features[0].group == "Duration");
    REQUIRE(report.group_means.size() == 12);
    CHECK(report.group_means[0].second == doctest::Approx((report.features[0].rmi_percent + report.features[1].rmi_percent) / 2));
    for (const auto& f : report.features) CHECK((f.rmi_percent >= 0.0 && f.rmi_percent <= 100.0));
    CHECK(report.label_entropy_bits == doctest::Approx(1.0));
    const auto doc = report.to_json();
    CHECK(doc.at("features").size() == 24);
}
