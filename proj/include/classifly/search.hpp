#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "classifly/dataset.hpp"
#include "classifly/model.hpp"

namespace classifly {

/// Inclusive sampling ranges. Integer parameters are drawn uniformly; C and
/// the learning rate log-uniformly. Unset ranges keep the base value.
struct ParameterRanges {
    std::optional<std::pair<int, int>> knn_k;
    std::optional<std::pair<int, int>> tree_max_splits;
    std::optional<std::pair<int, int>> boost_learners;
    std::optional<std::pair<int, int>> boost_max_splits;
    std::optional<std::pair<double, double>> boost_learning_rate;
    std::optional<std::pair<double, double>> svm_c;

    /// Broad ranges around the defaults for one family.
    static ParameterRanges defaults_for(ModelFamily family);
};

struct SearchResult {
    Hyperparameters best;
    double cv_accuracy = 0.0;
    std::vector<std::pair<Hyperparameters, double>> trials;
};

/// Stratified fold assignment (fold index per row), deterministic in seed.
std::vector<int> stratified_folds(std::span<const int> labels, int folds, std::uint64_t seed);

/// Mean k-fold accuracy of one configuration.
double cross_validate(ModelFamily family, const Dataset& data, const Hyperparameters& params,
                      int folds, std::uint64_t seed, unsigned jobs = 1);

/// Randomized search: `iterations` samples, each scored by k-fold CV. The best
/// mean accuracy wins, ties to the earlier sample. Deterministic in seed.
SearchResult random_search(ModelFamily family, const Dataset& data, const ParameterRanges& ranges,
                           int iterations = 30, int folds = 5, std::uint64_t seed = 0,
                           const Hyperparameters& base = {}, unsigned jobs = 1);

}  // namespace classifly
