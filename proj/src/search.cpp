#include "classifly/search.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "classifly/error.hpp"
#include "classifly/log.hpp"
#include "classifly/parallel.hpp"

namespace classifly {
namespace {

int draw_int(std::mt19937_64& rng, std::pair<int, int> range) {
    if (range.first >= range.second) return range.first;
    return std::uniform_int_distribution<int>(range.first, range.second)(rng);
}

double draw_log(std::mt19937_64& rng, std::pair<double, double> range) {
    if (!(range.first < range.second)) return range.first;
    const double u = std::uniform_real_distribution<double>(std::log(range.first), std::log(range.second))(rng);
    return std::clamp(std::exp(u), range.first, range.second);
}

Hyperparameters sample(std::mt19937_64& rng, const ParameterRanges& ranges, Hyperparameters p) {
    if (ranges.knn_k) p.knn_k = draw_int(rng, *ranges.knn_k);
    if (ranges.tree_max_splits) p.tree_max_splits = draw_int(rng, *ranges.tree_max_splits);
    if (ranges.boost_learners) p.boost_learners = draw_int(rng, *ranges.boost_learners);
    if (ranges.boost_max_splits) p.boost_max_splits = draw_int(rng, *ranges.boost_max_splits);
    if (ranges.boost_learning_rate) p.boost_learning_rate = draw_log(rng, *ranges.boost_learning_rate);
    if (ranges.svm_c) p.svm_c = draw_log(rng, *ranges.svm_c);
    return p;
}

}  // namespace

ParameterRanges ParameterRanges::defaults_for(ModelFamily family) {
    ParameterRanges r;
    switch (family) {
        case ModelFamily::Knn: r.knn_k = {{1, 30}}; break;
        case ModelFamily::Tree: r.tree_max_splits = {{1, 2000}}; break;
        case ModelFamily::Boosted:
            r.boost_learners = {{10, 500}};
            r.boost_max_splits = {{1, 200}};
            r.boost_learning_rate = {{1e-3, 1.0}};
            break;
        case ModelFamily::Svm: r.svm_c = {{1e-3, 1e3}}; break;
    }
    return r;
}

std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed) {
    if (folds < 2) throw Error(ErrorKind::InvalidArgument, "cross-validation needs at least 2 folds");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    std::mt19937_64 rng(seed);
    std::vector<int> assignment(labels.size(), 0);
    std::size_t offset = 0;
    for (auto& [label, rows] : by_class) {
        std::shuffle(rows.begin(), rows.end(), rng);
        for (std::size_t j = 0; j < rows.size(); ++j) {
            assignment[rows[j]] = static_cast<int>((offset + j) % static_cast<std::size_t>(folds));
        }
        offset += rows.size();
    }
    return assignment;
}

double cross_validate(ModelFamily family, const Dataset& data, const Hyperparameters& params, int folds,
                      std::uint64_t seed, unsigned jobs) {
    const auto assignment = stratified_folds(data.y, folds, seed);
    std::vector<double> accuracy(static_cast<std::size_t>(folds), -1.0);
    parallel_for(static_cast<std::size_t>(folds), jobs, [&](std::size_t f) {
        std::vector<std::size_t> train, test;
        for (std::size_t i = 0; i < data.size(); ++i) {
            (assignment[i] == static_cast<int>(f) ? test : train).push_back(i);
        }
        if (test.empty() || train.empty()) return;
        const auto model = train_model(family, data.subset(train), params);
        std::size_t correct = 0;
        for (auto i : test) correct += model.predict(data.X.row(i)).label == data.y[i] ? 1 : 0;
        accuracy[f] = static_cast<double>(correct) / static_cast<double>(test.size());
    });
    double sum = 0.0;
    int used = 0;
    for (double a : accuracy) {
        if (a < 0.0) continue;
        sum += a;
        ++used;
    }
    if (used == 0) throw Error(ErrorKind::TooFewSamples, "no usable cross-validation fold");
    return sum / used;
}

SearchResult random_search(ModelFamily family, const Dataset& data, const ParameterRanges& ranges, int iterations,
                           int folds, std::uint64_t seed, const Hyperparameters& base, unsigned jobs) {
    if (iterations < 1) throw Error(ErrorKind::InvalidArgument, "search needs at least one iteration");
    std::mt19937_64 rng(seed);
    SearchResult result;
    result.cv_accuracy = -1.0;
    for (int it = 0; it < iterations; ++it) {
        const auto params = sample(rng, ranges, base);
        double score = 0.0;
        try {
            score = cross_validate(family, data, params, folds, seed, jobs);
        } catch (const Error& e) {
            logger().info("search trial {} failed: {}", it, e.what());
        }
        result.trials.emplace_back(params, score);
        if (score > result.cv_accuracy) {
            result.cv_accuracy = score;
            result.best = params;
        }
    }
    return result;
}

}  // namespace classifly
