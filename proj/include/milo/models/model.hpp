#pragma once

#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "milo/error.hpp"
#include "milo/models/decision_tree.hpp"
#include "milo/models/gaussian_nb.hpp"
#include "milo/models/kmeans.hpp"
#include "milo/models/linear_regression.hpp"
#include "milo/models/logistic_regression.hpp"
#include "milo/state.hpp"
#include "milo/transporters.hpp"

namespace milo {

using Model = std::variant<LinearRegression, LogisticRegression, DecisionTreeClassifier, KMeans,
                           GaussianNB>;

struct ModelTypeInfo {
  std::string_view model_type;
  ModelCategory category;
  std::vector<std::string_view> required_fields;
};

// Registry of everything the format knows how to restore. Validation,
// category lookup, and the CLI all read from this one table.
inline const std::vector<ModelTypeInfo>& model_registry() {
  static const std::vector<ModelTypeInfo> registry = {
      {LinearRegression::kModelType,
       ModelCategory::LinearModel,
       {"fit_intercept", "copy_X", "n_jobs", "positive", "n_features_in_", "coef_", "rank_",
        "singular_", "intercept_"}},
      {LogisticRegression::kModelType,
       ModelCategory::LinearModel,
       {"max_iter", "tol", "lr", "n_features_in_", "classes_", "coef_", "intercept_", "n_iter_"}},
      {DecisionTreeClassifier::kModelType,
       ModelCategory::DecisionTree,
       {"criterion", "max_depth", "n_features_in_", "classes_", "tree_"}},
      {KMeans::kModelType,
       ModelCategory::Clustering,
       {"n_clusters", "random_state", "cluster_centers_", "labels_", "inertia_", "n_iter_"}},
      {GaussianNB::kModelType,
       ModelCategory::NaiveBayes,
       {"var_smoothing", "n_features_in_", "classes_", "class_prior_", "theta_", "var_"}},
  };
  return registry;
}

inline const ModelTypeInfo* find_model_type(std::string_view model_type) {
  for (const ModelTypeInfo& info : model_registry())
    if (info.model_type == model_type) return &info;
  return nullptr;
}

inline const ModelTypeInfo& model_type_info(std::string_view model_type) {
  if (const ModelTypeInfo* info = find_model_type(model_type)) return *info;
  raise(Errc::unknown_model_type, "unknown model type \"" + std::string(model_type) + "\"");
}

inline ModelCategory model_category(std::string_view model_type) {
  return model_type_info(model_type).category;
}

inline std::string_view model_type(const Model& m) {
  return std::visit(
      [](const auto& model) { return std::decay_t<decltype(model)>::kModelType; }, m);
}

inline StateMap extract_state(const Model& m) {
  return std::visit([](const auto& model) { return model.extract_state(); }, m);
}

inline Tensor predict(const Model& m, const Tensor& X) {
  return std::visit([&](const auto& model) { return model.predict(X); }, m);
}

inline Model restore_model(std::string_view type, const StateMap& state) {
  model_type_info(type);  // unknown types fail before any field access
  if (type == LinearRegression::kModelType) return LinearRegression::restore(state);
  if (type == LogisticRegression::kModelType) return LogisticRegression::restore(state);
  if (type == DecisionTreeClassifier::kModelType) return DecisionTreeClassifier::restore(state);
  if (type == KMeans::kModelType) return KMeans::restore(state);
  return GaussianNB::restore(state);
}

}  // namespace milo
