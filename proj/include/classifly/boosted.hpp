#pragma once

#include <span>
#include <string>
#include <vector>

#include "classifly/dataset.hpp"
#include "classifly/tree.hpp"

namespace classifly {

/// Weight given to a learner with zero weighted training error before
/// boosting stops.
inline constexpr double kPerfectLearnerWeight = 1e3;

/// Multiclass AdaBoost (SAMME) over weighted Gini trees.
struct BoostedModel {
    std::vector<DecisionTree> learners;
    std::vector<double> learner_weights;
    std::vector<std::string> class_names;
    int n_learners = 0;
    int max_splits = 0;
    double learning_rate = 1.0;

    /// Per-class share of the total learner weight voting for it.
    Prediction predict(std::span<const double> x) const;
};

/// Learner weight: learning_rate * (ln((1 - err) / err) + ln(K - 1)), K the
/// number of classes present. Stops early when a learner is no better than
/// chance (err >= 1 - 1/K; discarded unless it is the only one) or perfect
/// (kept with kPerfectLearnerWeight).
/// Errors: InvalidArgument, TooFewSamples, DegenerateLabels.
BoostedModel boosted_train(const Dataset& data, int n_learners = 402, int max_splits = 125,
                           double learning_rate = 0.792);

}  // namespace classifly
