#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <json.hpp>

#include "classifly/dataset.hpp"

namespace classifly {

/// Binary threshold tree. Internal nodes send x[feature] <= threshold left.
/// Leaves hold the (weighted) training class proportions that reached them.
class DecisionTree {
public:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        std::vector<double> distribution;

        bool is_leaf() const noexcept { return feature < 0; }
        bool operator==(const Node&) const = default;
    };

    DecisionTree() = default;
    DecisionTree(std::vector<Node> nodes, int n_classes);

    /// Weighted CART with Gini impurity, grown best-first by absolute weighted
    /// impurity decrease until no split helps or `max_splits` internal nodes
    /// exist. Candidate thresholds are midpoints between consecutive distinct
    /// values; equal gains prefer the lower feature, then the lower threshold.
    /// Empty `weights` means unit weights.
    static DecisionTree fit(const Matrix& X, std::span<const int> y, std::span<const double> weights,
                            int n_classes, int max_splits);

    const Node& leaf_for(std::span<const double> x) const;
    /// Majority class at the reached leaf, ties to the lowest ordinal.
    int predict(std::span<const double> x) const;

    std::size_t internal_node_count() const noexcept;
    std::span<const Node> nodes() const noexcept { return nodes_; }
    int n_classes() const noexcept { return n_classes_; }

    nlohmann::json to_json() const;
    static DecisionTree from_json(const nlohmann::json& doc);

    bool operator==(const DecisionTree&) const = default;

private:
    std::vector<Node> nodes_;
    int n_classes_ = 0;
};

struct TreeModel {
    DecisionTree tree;
    std::vector<std::string> class_names;
    int max_splits = 0;

    /// Scores are the training class proportions at the reached leaf.
    Prediction predict(std::span<const double> x) const;
};

TreeModel tree_train(const Dataset& data, int max_splits = 1297);

}  // namespace classifly
