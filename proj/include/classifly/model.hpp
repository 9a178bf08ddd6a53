#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "classifly/boosted.hpp"
#include "classifly/dataset.hpp"
#include "classifly/knn.hpp"
#include "classifly/svm.hpp"
#include "classifly/tree.hpp"

namespace classifly {

enum class ModelFamily { Knn, Tree, Boosted, Svm };

std::string_view to_string(ModelFamily family) noexcept;
std::optional<ModelFamily> parse_model_family(std::string_view name) noexcept;

/// Defaults are the operating point of the published comparison.
struct Hyperparameters {
    int knn_k = 4;
    int tree_max_splits = 1297;
    int boost_learners = 402;
    int boost_max_splits = 125;
    double boost_learning_rate = 0.792;
    double svm_c = 4.795;

    bool operator==(const Hyperparameters&) const = default;
};

/// Any trained classifier. Immutable after training; predict is const and
/// safe to call from several threads.
class TrainedModel {
public:
    using Variant = std::variant<KnnModel, TreeModel, BoostedModel, SvmModel>;

    TrainedModel(Variant model, std::size_t input_dim)
        : model_(std::move(model)), input_dim_(input_dim) {}

    ModelFamily family() const noexcept;
    const Variant& variant() const noexcept { return model_; }
    const std::vector<std::string>& class_names() const noexcept;
    std::size_t input_dim() const noexcept { return input_dim_; }

    /// Throws Error(ShapeMismatch) for a wrong-length or non-finite input.
    Prediction predict(std::span<const double> x) const;

    /// One JSON document: {"variant": ..., "class_names": [...], ...learned
    /// arrays}. Doubles are written in round-trip precision so a reloaded
    /// model predicts identically.
    nlohmann::json to_json() const;
    static TrainedModel from_json(const nlohmann::json& doc);

private:
    Variant model_;
    std::size_t input_dim_ = 0;
};

TrainedModel train_model(ModelFamily family, const Dataset& data, const Hyperparameters& params = {});

}  // namespace classifly
