#include "classifly/model.hpp"

#include <cmath>
#include <string>

#include "classifly/error.hpp"

namespace classifly {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

nlohmann::json matrix_json(const Matrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

Matrix matrix_from_json(const nlohmann::json& rows, std::size_t cols) {
    Matrix m(0, cols);
    for (const auto& row : rows) {
        const auto values = row.get<std::vector<double>>();
        if (values.size() != cols) throw Error(ErrorKind::MalformedModel, "matrix row has wrong width");
        m.append_row(values);
    }
    return m;
}

}  // namespace

std::string_view to_string(ModelFamily family) noexcept {
    switch (family) {
        case ModelFamily::Knn: return "knn";
        case ModelFamily::Tree: return "tree";
        case ModelFamily::Boosted: return "boosted";
        case ModelFamily::Svm: return "svm";
    }
    return "unknown";
}

std::optional<ModelFamily> parse_model_family(std::string_view name) noexcept {
    for (auto f : {ModelFamily::Knn, ModelFamily::Tree, ModelFamily::Boosted, ModelFamily::Svm}) {
        if (to_string(f) == name) return f;
    }
    return std::nullopt;
}

ModelFamily TrainedModel::family() const noexcept {
    return std::visit(Overloaded{[](const KnnModel&) { return ModelFamily::Knn; },
                                 [](const TreeModel&) { return ModelFamily::Tree; },
                                 [](const BoostedModel&) { return ModelFamily::Boosted; },
                                 [](const SvmModel&) { return ModelFamily::Svm; }},
                      model_);
}

const std::vector<std::string>& TrainedModel::class_names() const noexcept {
    return std::visit(Overloaded{[](const KnnModel& m) -> const std::vector<std::string>& { return m.train.class_names; },
                                 [](const auto& m) -> const std::vector<std::string>& { return m.class_names; }},
                      model_);
}

Prediction TrainedModel::predict(std::span<const double> x) const {
    if (x.size() != input_dim_) {
        throw Error(ErrorKind::ShapeMismatch, "model expects " + std::to_string(input_dim_) + " features, got " +
                                                  std::to_string(x.size()));
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw Error(ErrorKind::ShapeMismatch, "non-finite feature value");
    }
    return std::visit([&](const auto& m) { return m.predict(x); }, model_);
}

nlohmann::json TrainedModel::to_json() const {
    nlohmann::json doc;
    doc["variant"] = std::string(to_string(family()));
    doc["class_names"] = class_names();
    doc["input_dim"] = input_dim_;
    std::visit(Overloaded{
                   [&](const KnnModel& m) {
                       doc["hyperparameters"] = {{"k", m.k}, {"distance", "cityblock"}, {"weighting", "inverse"}};
                       doc["train"] = {{"X", matrix_json(m.train.X)}, {"y", m.train.y}};
                   },
                   [&](const TreeModel& m) {
                       doc["hyperparameters"] = {{"max_splits", m.max_splits}, {"criterion", "gini"}};
                       doc["tree"] = m.tree.to_json();
                   },
                   [&](const BoostedModel& m) {
                       doc["hyperparameters"] = {{"n_learners", m.n_learners},
                                                 {"max_splits", m.max_splits},
                                                 {"learning_rate", m.learning_rate}};
                       doc["learner_weights"] = m.learner_weights;
                       nlohmann::json learners = nlohmann::json::array();
                       for (const auto& t : m.learners) learners.push_back(t.to_json());
                       doc["learners"] = std::move(learners);
                   },
                   [&](const SvmModel& m) {
                       doc["hyperparameters"] = {{"C", m.C}, {"kernel", "cubic"}, {"multiclass", "one-vs-all"}};
                       doc["standardizer"] = m.standardizer.to_json();
                       nlohmann::json machines = nlohmann::json::array();
                       for (const auto& b : m.machines) {
                           machines.push_back({{"bias", b.bias},
                                               {"converged", b.converged},
                                               {"alpha", b.alpha},
                                               {"coef", b.coef},
                                               {"support_vectors", matrix_json(b.support_vectors)}});
                       }
                       doc["machines"] = std::move(machines);
                   }},
               model_);
    return doc;
}

TrainedModel TrainedModel::from_json(const nlohmann::json& doc) {
    try {
        const auto variant = doc.at("variant").get<std::string>();
        const auto family = parse_model_family(variant);
        if (!family) throw Error(ErrorKind::MalformedModel, "unknown model variant '" + variant + "'");
        auto class_names = doc.at("class_names").get<std::vector<std::string>>();
        const auto dim = doc.at("input_dim").get<std::size_t>();
        const auto& hp = doc.at("hyperparameters");
        switch (*family) {
            case ModelFamily::Knn: {
                KnnModel m;
                m.k = hp.at("k").get<int>();
                m.train.class_names = std::move(class_names);
                m.train.X = matrix_from_json(doc.at("train").at("X"), dim);
                m.train.y = doc.at("train").at("y").get<std::vector<int>>();
                m.train.validate();
                if (m.k < 1 || m.train.size() < static_cast<std::size_t>(m.k)) {
                    throw Error(ErrorKind::MalformedModel, "knn model has invalid k");
                }
                return TrainedModel(std::move(m), dim);
            }
            case ModelFamily::Tree: {
                TreeModel m;
                m.max_splits = hp.at("max_splits").get<int>();
                m.class_names = std::move(class_names);
                m.tree = DecisionTree::from_json(doc.at("tree"));
                return TrainedModel(std::move(m), dim);
            }
            case ModelFamily::Boosted: {
                BoostedModel m;
                m.n_learners = hp.at("n_learners").get<int>();
                m.max_splits = hp.at("max_splits").get<int>();
                m.learning_rate = hp.at("learning_rate").get<double>();
                m.class_names = std::move(class_names);
                m.learner_weights = doc.at("learner_weights").get<std::vector<double>>();
                for (const auto& t : doc.at("learners")) m.learners.push_back(DecisionTree::from_json(t));
                if (m.learners.size() != m.learner_weights.size() || m.learners.empty()) {
                    throw Error(ErrorKind::MalformedModel, "boosted model learner/weight count mismatch");
                }
                for (double w : m.learner_weights) {
                    if (!std::isfinite(w)) throw Error(ErrorKind::MalformedModel, "non-finite learner weight");
                }
                return TrainedModel(std::move(m), dim);
            }
            case ModelFamily::Svm: {
                SvmModel m;
                m.C = hp.at("C").get<double>();
                m.class_names = std::move(class_names);
                m.standardizer = Standardizer::from_json(doc.at("standardizer"));
                for (const auto& b : doc.at("machines")) {
                    BinarySvm machine;
                    machine.bias = b.at("bias").get<double>();
                    machine.converged = b.at("converged").get<bool>();
                    machine.alpha = b.at("alpha").get<std::vector<double>>();
                    machine.coef = b.at("coef").get<std::vector<double>>();
                    machine.support_vectors = matrix_from_json(b.at("support_vectors"), dim);
                    if (machine.coef.size() != machine.support_vectors.rows()) {
                        throw Error(ErrorKind::MalformedModel, "svm coefficient count mismatch");
                    }
                    m.machines.push_back(std::move(machine));
                }
                if (m.machines.size() != m.class_names.size()) {
                    throw Error(ErrorKind::MalformedModel, "svm needs one machine per class");
                }
                return TrainedModel(std::move(m), dim);
            }
        }
        throw Error(ErrorKind::MalformedModel, "unreachable model variant");
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::MalformedModel, std::string("model document: ") + e.what());
    }
}

TrainedModel train_model(ModelFamily family, const Dataset& data, const Hyperparameters& params) {
    const std::size_t dim = data.dim();
    switch (family) {
        case ModelFamily::Knn: return TrainedModel(knn_train(data, params.knn_k), dim);
        case ModelFamily::Tree: return TrainedModel(tree_train(data, params.tree_max_splits), dim);
        case ModelFamily::Boosted:
            return TrainedModel(boosted_train(data, params.boost_learners, params.boost_max_splits,
                                              params.boost_learning_rate),
                                dim);
        case ModelFamily::Svm: return TrainedModel(svm_train(data, params.svm_c), dim);
    }
    throw Error(ErrorKind::InvalidArgument, "unknown model family");
}

}  // namespace classifly
