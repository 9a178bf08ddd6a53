#include "classifly/tree.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>

#include "classifly/error.hpp"

namespace classifly {
namespace {

struct Split {
    bool valid = false;
    double gain = 0.0;
    int feature = -1;
    double threshold = 0.0;
};

// A leaf waiting for expansion, holding its samples sorted along every
// feature (one list per feature, stable with respect to the root order).
struct Frontier {
    int node = -1;
    std::vector<std::vector<std::uint32_t>> sorted;
    Split split;
};

class Builder {
public:
    Builder(const Matrix& X, std::span<const int> y, std::span<const double> w, int n_classes)
        : X_(X), y_(y), w_(w), k_(static_cast<std::size_t>(n_classes)) {}

    std::vector<double> class_weights(const std::vector<std::uint32_t>& samples) const {
        std::vector<double> totals(k_, 0.0);
        for (auto i : samples) totals[static_cast<std::size_t>(y_[i])] += w_[i];
        return totals;
    }

    // Best Gini split of a node. Impurity is weighted: W * gini = W - sum(w_c^2) / W.
    Split best_split(const std::vector<std::vector<std::uint32_t>>& sorted,
                     const std::vector<double>& totals) const {
        Split best;
        const double W = std::accumulate(totals.begin(), totals.end(), 0.0);
        double sq_total = 0.0;
        std::size_t present = 0;
        for (double t : totals) {
            sq_total += t * t;
            if (t > 0.0) ++present;
        }
        if (present <= 1 || W <= 0.0) return best;  // pure node
        const double parent = W - sq_total / W;
        const double tie_eps = 1e-12 * W;

        std::vector<double> left(k_);
        for (std::size_t f = 0; f < sorted.size(); ++f) {
            const auto& list = sorted[f];
            std::fill(left.begin(), left.end(), 0.0);
            double w_left = 0.0;
            double sq_left = 0.0;
            double sq_right = sq_total;
            for (std::size_t pos = 0; pos + 1 < list.size(); ++pos) {
                const auto i = list[pos];
                const auto c = static_cast<std::size_t>(y_[i]);
                const double wi = w_[i];
                const double right_before = totals[c] - left[c];
                sq_left += (left[c] + wi) * (left[c] + wi) - left[c] * left[c];
                sq_right += (right_before - wi) * (right_before - wi) - right_before * right_before;
                left[c] += wi;
                w_left += wi;

                const double a = X_(i, f);
                const double b = X_(list[pos + 1], f);
                if (!(a < b)) continue;
                const double w_right = W - w_left;
                if (w_left <= 0.0 || w_right <= 0.0) continue;
                const double children = (w_left - sq_left / w_left) + (w_right - sq_right / w_right);
                const double gain = std::max(0.0, parent - children);
                if (!best.valid || gain > best.gain + tie_eps) {
                    double threshold = a + 0.5 * (b - a);
                    if (!(threshold < b)) threshold = a;
                    best = Split{true, gain, static_cast<int>(f), threshold};
                }
            }
        }
        return best;
    }

    const Matrix& X_;
    std::span<const int> y_;
    std::span<const double> w_;
    std::size_t k_;
};

std::vector<double> normalized(std::vector<double> totals) {
    const double W = std::accumulate(totals.begin(), totals.end(), 0.0);
    if (W > 0.0) {
        for (auto& t : totals) t /= W;
    }
    return totals;
}

}  // namespace

DecisionTree::DecisionTree(std::vector<Node> nodes, int n_classes)
    : nodes_(std::move(nodes)), n_classes_(n_classes) {
    if (nodes_.empty()) throw Error(ErrorKind::MalformedModel, "tree without nodes");
    for (const auto& node : nodes_) {
        if (node.distribution.size() != static_cast<std::size_t>(n_classes)) {
            throw Error(ErrorKind::MalformedModel, "tree node distribution has wrong size");
        }
        if (!node.is_leaf()) {
            const auto limit = static_cast<int>(nodes_.size());
            if (node.left <= 0 || node.right <= 0 || node.left >= limit || node.right >= limit) {
                throw Error(ErrorKind::MalformedModel, "tree child index out of range");
            }
        }
    }
}

DecisionTree DecisionTree::fit(const Matrix& X, std::span<const int> y, std::span<const double> weights,
                               int n_classes, int max_splits) {
    const std::size_t n = X.rows();
    const std::size_t d = X.cols();
    if (n == 0) throw Error(ErrorKind::TooFewSamples, "cannot fit a tree on no samples");
    if (y.size() != n) throw Error(ErrorKind::ShapeMismatch, "labels and rows differ");
    std::vector<double> unit;
    if (weights.empty()) {
        unit.assign(n, 1.0);
        weights = unit;
    }
    if (weights.size() != n) throw Error(ErrorKind::ShapeMismatch, "weights and rows differ");

    Builder builder(X, y, weights, n_classes);
    Frontier root;
    root.node = 0;
    root.sorted.resize(d);
    for (std::size_t f = 0; f < d; ++f) {
        auto& list = root.sorted[f];
        list.resize(n);
        std::iota(list.begin(), list.end(), 0u);
        std::stable_sort(list.begin(), list.end(), [&](std::uint32_t a, std::uint32_t b) { return X(a, f) < X(b, f); });
    }
    std::vector<std::uint32_t> all(n);
    std::iota(all.begin(), all.end(), 0u);
    const auto root_totals = builder.class_weights(all);

    std::vector<Node> nodes;
    nodes.push_back(Node{-1, 0.0, -1, -1, normalized(root_totals)});
    root.split = builder.best_split(root.sorted, root_totals);

    std::vector<Frontier> frontier;
    if (root.split.valid) frontier.push_back(std::move(root));

    std::vector<char> goes_left(n, 0);
    int splits = 0;
    while (splits < max_splits && !frontier.empty()) {
        // Highest gain first; equal gains expand the older node.
        std::size_t pick = 0;
        for (std::size_t i = 1; i < frontier.size(); ++i) {
            const auto& a = frontier[i].split;
            const auto& b = frontier[pick].split;
            if (a.gain > b.gain || (a.gain == b.gain && frontier[i].node < frontier[pick].node)) pick = i;
        }
        Frontier current = std::move(frontier[pick]);
        frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(pick));

        const auto f = static_cast<std::size_t>(current.split.feature);
        for (auto i : current.sorted[0]) goes_left[i] = X(i, f) <= current.split.threshold ? 1 : 0;

        Frontier left, right;
        left.sorted.resize(d);
        right.sorted.resize(d);
        for (std::size_t g = 0; g < d; ++g) {
            for (auto i : current.sorted[g]) (goes_left[i] ? left.sorted[g] : right.sorted[g]).push_back(i);
        }
        current.sorted.clear();

        const auto left_totals = builder.class_weights(left.sorted[0]);
        const auto right_totals = builder.class_weights(right.sorted[0]);
        left.node = static_cast<int>(nodes.size());
        nodes.push_back(Node{-1, 0.0, -1, -1, normalized(left_totals)});
        right.node = static_cast<int>(nodes.size());
        nodes.push_back(Node{-1, 0.0, -1, -1, normalized(right_totals)});
        auto& parent = nodes[static_cast<std::size_t>(current.node)];
        parent.feature = current.split.feature;
        parent.threshold = current.split.threshold;
        parent.left = left.node;
        parent.right = right.node;
        ++splits;

        left.split = builder.best_split(left.sorted, left_totals);
        right.split = builder.best_split(right.sorted, right_totals);
        if (left.split.valid) frontier.push_back(std::move(left));
        if (right.split.valid) frontier.push_back(std::move(right));
    }
    return DecisionTree(std::move(nodes), n_classes);
}

const DecisionTree::Node& DecisionTree::leaf_for(std::span<const double> x) const {
    const Node* node = &nodes_[0];
    while (!node->is_leaf()) {
        const auto f = static_cast<std::size_t>(node->feature);
        node = &nodes_[static_cast<std::size_t>(x[f] <= node->threshold ? node->left : node->right)];
    }
    return *node;
}

int DecisionTree::predict(std::span<const double> x) const {
    return static_cast<int>(argmax(leaf_for(x).distribution));
}

std::size_t DecisionTree::internal_node_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return !n.is_leaf(); }));
}

nlohmann::json DecisionTree::to_json() const {
    std::vector<int> feature, left, right;
    std::vector<double> threshold;
    std::vector<std::vector<double>> distribution;
    for (const auto& node : nodes_) {
        feature.push_back(node.feature);
        threshold.push_back(node.threshold);
        left.push_back(node.left);
        right.push_back(node.right);
        distribution.push_back(node.distribution);
    }
    return {{"n_classes", n_classes_}, {"feature", feature}, {"threshold", threshold},
            {"left", left},           {"right", right},     {"distribution", distribution}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& doc) {
    const auto feature = doc.at("feature").get<std::vector<int>>();
    const auto threshold = doc.at("threshold").get<std::vector<double>>();
    const auto left = doc.at("left").get<std::vector<int>>();
    const auto right = doc.at("right").get<std::vector<int>>();
    auto distribution = doc.at("distribution").get<std::vector<std::vector<double>>>();
    const std::size_t n = feature.size();
    if (threshold.size() != n || left.size() != n || right.size() != n || distribution.size() != n) {
        throw Error(ErrorKind::MalformedModel, "tree arrays differ in length");
    }
    std::vector<Node> nodes(n);
    for (std::size_t i = 0; i < n; ++i) {
        nodes[i] = Node{feature[i], threshold[i], left[i], right[i], std::move(distribution[i])};
    }
    return DecisionTree(std::move(nodes), doc.at("n_classes").get<int>());
}

Prediction TreeModel::predict(std::span<const double> x) const {
    const auto& leaf = tree.leaf_for(x);
    return Prediction{static_cast<int>(argmax(leaf.distribution)), leaf.distribution};
}

TreeModel tree_train(const Dataset& data, int max_splits) {
    if (max_splits < 0) throw Error(ErrorKind::InvalidArgument, "max_splits must be non-negative");
    data.validate();
    if (data.size() == 0) throw Error(ErrorKind::TooFewSamples, "tree needs at least one sample");
    auto tree = DecisionTree::fit(data.X, data.y, {}, static_cast<int>(data.class_names.size()), max_splits);
    return TreeModel{std::move(tree), data.class_names, max_splits};
}

}  // namespace classifly
