#include "classifly/boosted.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "classifly/error.hpp"
#include "classifly/log.hpp"

namespace classifly {

Prediction BoostedModel::predict(std::span<const double> x) const {
    Prediction p;
    p.scores.assign(class_names.size(), 0.0);
    double total = 0.0;
    for (std::size_t t = 0; t < learners.size(); ++t) {
        p.scores[static_cast<std::size_t>(learners[t].predict(x))] += learner_weights[t];
        total += learner_weights[t];
    }
    if (total > 0.0) {
        for (auto& s : p.scores) s /= total;
    }
    p.label = static_cast<int>(argmax(p.scores));
    return p;
}

BoostedModel boosted_train(const Dataset& data, int n_learners, int max_splits, double learning_rate) {
    if (n_learners < 1) throw Error(ErrorKind::InvalidArgument, "n_learners must be positive");
    if (max_splits < 0) throw Error(ErrorKind::InvalidArgument, "max_splits must be non-negative");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw Error(ErrorKind::InvalidArgument, "learning_rate must be positive");
    }
    data.validate();
    const std::size_t n = data.size();
    if (n < 2) throw Error(ErrorKind::TooFewSamples, "boosting needs at least 2 samples");
    const std::size_t k = data.distinct_labels();
    if (k < 2) throw Error(ErrorKind::DegenerateLabels, "boosting needs at least 2 classes");

    BoostedModel model;
    model.class_names = data.class_names;
    model.n_learners = n_learners;
    model.max_splits = max_splits;
    model.learning_rate = learning_rate;

    const int n_classes = static_cast<int>(data.class_names.size());
    const double chance_error = 1.0 - 1.0 / static_cast<double>(k);
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<char> miss(n, 0);

    for (int round = 0; round < n_learners; ++round) {
        auto tree = DecisionTree::fit(data.X, data.y, w, n_classes, max_splits);
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            miss[i] = tree.predict(data.X.row(i)) != data.y[i] ? 1 : 0;
            if (miss[i]) err += w[i];
        }
        err /= std::accumulate(w.begin(), w.end(), 0.0);

        if (err <= 0.0) {
            model.learners.push_back(std::move(tree));
            model.learner_weights.push_back(kPerfectLearnerWeight);
            logger().debug("boosting stopped at round {}: perfect learner", round + 1);
            break;
        }
        if (err >= chance_error) {
            if (model.learners.empty()) {
                model.learners.push_back(std::move(tree));
                model.learner_weights.push_back(learning_rate);
            }
            logger().debug("boosting stopped at round {}: error {} at chance level", round + 1, err);
            break;
        }
        const double alpha =
            learning_rate * (std::log((1.0 - err) / err) + std::log(static_cast<double>(k) - 1.0));
        model.learners.push_back(std::move(tree));
        model.learner_weights.push_back(alpha);

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (miss[i]) w[i] *= std::exp(alpha);
            total += w[i];
        }
        for (auto& wi : w) wi /= total;
    }
    return model;
}

}  // namespace classifly
