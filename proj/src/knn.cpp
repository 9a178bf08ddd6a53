#include "classifly/knn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "classifly/error.hpp"

namespace classifly {

KnnModel knn_train(const Dataset& data, int k) {
    if (k < 1) throw Error(ErrorKind::InvalidArgument, "k must be positive, got " + std::to_string(k));
    data.validate();
    if (data.size() < static_cast<std::size_t>(k)) {
        throw Error(ErrorKind::TooFewSamples, "k=" + std::to_string(k) + " exceeds " +
                                                  std::to_string(data.size()) + " training samples");
    }
    return KnnModel{data, k};
}

Prediction KnnModel::predict(std::span<const double> x) const {
    const std::size_t n = train.size();
    std::vector<std::pair<double, std::size_t>> dist(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto row = train.X.row(i);
        double d = 0.0;
        for (std::size_t c = 0; c < row.size(); ++c) d += std::abs(row[c] - x[c]);
        dist[i] = {d, i};
    }
    const auto kk = static_cast<std::size_t>(k);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(kk), dist.end());

    Prediction p;
    p.scores.assign(train.class_names.size(), 0.0);
    const bool exact = dist[0].first == 0.0;
    for (std::size_t j = 0; j < kk; ++j) {
        const auto [d, idx] = dist[j];
        if (exact) {
            if (d == 0.0) p.scores[static_cast<std::size_t>(train.y[idx])] += 1.0;
        } else {
            p.scores[static_cast<std::size_t>(train.y[idx])] += 1.0 / d;
        }
    }
    const double total = std::accumulate(p.scores.begin(), p.scores.end(), 0.0);
    for (auto& s : p.scores) s /= total;
    p.label = static_cast<int>(argmax(p.scores));
    return p;
}

}  // namespace classifly
