#pragma once

#include <span>

#include "classifly/dataset.hpp"

namespace classifly {

/// Lazy k-nearest-neighbour classifier: city-block distance, inverse-distance
/// vote weights.
struct KnnModel {
    Dataset train;
    int k = 4;

    /// Ties at the k-th distance go to the lower training index. When any of
    /// the k neighbours sits at distance zero, only the zero-distance
    /// neighbours vote, one vote each.
    Prediction predict(std::span<const double> x) const;
};

/// Errors: InvalidArgument for k < 1, TooFewSamples when n < k.
KnnModel knn_train(const Dataset& data, int k = 4);

}  // namespace classifly
