#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "milo/error.hpp"
#include "milo/models/dataset.hpp"
#include "milo/models/state_io.hpp"
#include "milo/state.hpp"

namespace milo {

// CART classifier with Gini impurity. Candidate thresholds are the midpoints
// between consecutive distinct sorted feature values; ties break toward the
// lowest feature index, then the lowest threshold. Node ids are preorder, so
// both children of an internal node sit at higher indices.
class DecisionTreeClassifier {
 public:
  static constexpr std::string_view kModelType = "DecisionTreeClassifier";
  static constexpr std::int64_t kLeafChild = -1;
  static constexpr std::int64_t kLeafFeature = -2;
  static constexpr double kLeafThreshold = -2.0;

  DecisionTreeClassifier() = default;

  static DecisionTreeClassifier fit(const Dataset& ds, std::int64_t max_depth = 16) {
    if (max_depth < 1) raise(Errc::invalid_args, "max_depth must be >= 1");
    const std::size_t n = ds.n_samples();
    const Mat X = ds.X_mat();
    const std::vector<std::int64_t> labels = ds.y_labels();

    std::vector<std::int64_t> classes = labels;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    const std::size_t n_classes = classes.size();

    std::vector<std::size_t> y(n);
    for (std::size_t i = 0; i < n; ++i)
      y[i] = static_cast<std::size_t>(
          std::lower_bound(classes.begin(), classes.end(), labels[i]) - classes.begin());

    DecisionTreeClassifier m;
    m.max_depth = max_depth;
    m.n_features_in_ = static_cast<std::int64_t>(ds.n_features());
    m.classes_ = std::move(classes);

    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    Builder builder{X, y, n_classes, max_depth, m.tree_};
    builder.grow(all, 0);
    m.fitted_ = true;
    return m;
  }

  Tensor predict(const Tensor& X) const {
    check_fitted();
    check_features(X);
    const auto m = static_cast<std::size_t>(X.shape()[0]);
    const auto p = static_cast<std::size_t>(X.shape()[1]);
    const std::vector<double>& x = X.f64_data();
    std::vector<std::int64_t> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i)
      out.push_back(classes_[majority_class(leaf_for(x.data() + i * p))]);
    return Tensor::i64(std::move(out), {static_cast<std::int64_t>(m)});
  }

  // Binary-only signed score: the class-proportion margin at the reached leaf,
  // (count₁ − count₀) / total ∈ [−1, 1]. Positive means the higher class.
  Tensor decision_function(const Tensor& X) const {
    check_fitted();
    check_features(X);
    if (classes_.size() != 2)
      raise(Errc::invalid_args, "decision_function is defined for binary trees only");
    const auto m = static_cast<std::size_t>(X.shape()[0]);
    const auto p = static_cast<std::size_t>(X.shape()[1]);
    const std::vector<double>& x = X.f64_data();
    std::vector<double> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      const std::vector<double>& counts = tree_.value[leaf_for(x.data() + i * p)];
      const double total = counts[0] + counts[1];
      out.push_back((counts[1] - counts[0]) / total);
    }
    return Tensor::f64(std::move(out), {static_cast<std::int64_t>(m)});
  }

  StateMap extract_state() const {
    check_fitted();
    StateMap s;
    s.set("criterion", StateValue::str(criterion));
    s.set("max_depth", StateValue::integer(max_depth));
    s.set("n_features_in_", StateValue::integer(n_features_in_));
    s.set("classes_", StateValue::labels(LabelIndex(classes_)));
    s.set("tree_", StateValue::tree(tree_));
    return s;
  }

  static DecisionTreeClassifier restore(const StateMap& state) {
    DecisionTreeClassifier m;
    m.criterion = detail::read_string(state, "criterion");
    if (m.criterion != "gini")
      raise(Errc::invariant_violation, "criterion must be \"gini\"");
    m.max_depth = detail::read_int(state, "max_depth");
    m.n_features_in_ = detail::read_int(state, "n_features_in_");
    m.classes_ = detail::require_field(state, "classes_").as_labels().labels();
    m.tree_ = detail::require_field(state, "tree_").as_tree();
    m.validate_tree();
    m.fitted_ = true;
    return m;
  }

  bool fitted() const { return fitted_; }

  // Rejects trees whose arrays were edited into an inconsistent shape: wrong
  // leaf/internal marking, out-of-range or backward child links, multiply
  // reachable nodes, non-finite thresholds, bad value rows.
  void validate_tree() const {
    const auto count = static_cast<std::int64_t>(tree_.node_count());
    if (count == 0) raise(Errc::invariant_violation, "tree has no nodes");
    if (tree_.children_right.size() != tree_.node_count() ||
        tree_.feature.size() != tree_.node_count() ||
        tree_.threshold.size() != tree_.node_count() || tree_.value.size() != tree_.node_count())
      raise(Errc::invariant_violation, "tree arrays disagree on node count");
    std::vector<int> seen(tree_.node_count(), 0);
    std::vector<std::int64_t> stack{0};
    std::size_t reached = 0;
    while (!stack.empty()) {
      const std::int64_t id = stack.back();
      stack.pop_back();
      if (seen[static_cast<std::size_t>(id)]++)
        raise(Errc::invariant_violation, "node " + std::to_string(id) + " reachable twice");
      ++reached;
      const std::int64_t l = tree_.children_left[static_cast<std::size_t>(id)];
      const std::int64_t r = tree_.children_right[static_cast<std::size_t>(id)];
      const std::int64_t f = tree_.feature[static_cast<std::size_t>(id)];
      const double t = tree_.threshold[static_cast<std::size_t>(id)];
      if (tree_.value[static_cast<std::size_t>(id)].size() != classes_.size())
        raise(Errc::invariant_violation, "value row length disagrees with class count");
      double row_total = 0.0;
      for (double c : tree_.value[static_cast<std::size_t>(id)]) {
        if (!(c >= 0.0))
          raise(Errc::invariant_violation, "negative class count at node " + std::to_string(id));
        row_total += c;
      }
      if (!(row_total > 0.0))
        raise(Errc::invariant_violation, "empty class counts at node " + std::to_string(id));
      const bool leaf = l == kLeafChild && r == kLeafChild;
      if (leaf) {
        if (f != kLeafFeature)
          raise(Errc::invariant_violation, "leaf " + std::to_string(id) + " has a split feature");
      } else {
        if (l <= id || r <= id || l >= count || r >= count)
          raise(Errc::invariant_violation,
                "children of node " + std::to_string(id) + " must follow it");
        if (f < 0 || f >= n_features_in_)
          raise(Errc::invariant_violation, "split feature out of range at node " + std::to_string(id));
        if (!std::isfinite(t))
          raise(Errc::invariant_violation, "non-finite threshold at node " + std::to_string(id));
        stack.push_back(r);
        stack.push_back(l);
      }
    }
    if (reached != tree_.node_count())
      raise(Errc::invariant_violation, "tree has unreachable nodes");
  }

  std::string criterion = "gini";
  std::int64_t max_depth = 16;
  std::int64_t n_features_in_ = 0;
  std::vector<std::int64_t> classes_;
  TreeNodes tree_;

 private:
  struct Builder {
    const Mat& X;
    const std::vector<std::size_t>& y;
    std::size_t n_classes;
    std::int64_t max_depth;
    TreeNodes& tree;

    static double gini(const std::vector<double>& counts, double total) {
      double g = 1.0;
      for (double c : counts) {
        const double q = c / total;
        g -= q * q;
      }
      return g;
    }

    std::vector<double> class_counts(const std::vector<std::size_t>& idx) const {
      std::vector<double> counts(n_classes, 0.0);
      for (std::size_t i : idx) counts[y[i]] += 1.0;
      return counts;
    }

    // Returns this node's id (preorder: the node is appended before its subtrees).
    std::int64_t grow(const std::vector<std::size_t>& idx, std::int64_t depth) {
      const auto id = static_cast<std::int64_t>(tree.node_count());
      tree.children_left.push_back(kLeafChild);
      tree.children_right.push_back(kLeafChild);
      tree.feature.push_back(kLeafFeature);
      tree.threshold.push_back(kLeafThreshold);
      tree.value.push_back(class_counts(idx));

      const std::vector<double>& counts = tree.value.back();
      const auto total = static_cast<double>(idx.size());
      const double impurity = gini(counts, total);
      if (impurity == 0.0 || depth >= max_depth) return id;

      std::size_t best_feature = 0;
      double best_threshold = 0.0;
      double best_decrease = 0.0;
      bool found = false;
      for (std::size_t j = 0; j < X.cols; ++j) {
        std::vector<double> values;
        values.reserve(idx.size());
        for (std::size_t i : idx) values.push_back(X(i, j));
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t v = 0; v + 1 < values.size(); ++v) {
          const double threshold = (values[v] + values[v + 1]) / 2.0;
          std::vector<double> left(n_classes, 0.0);
          double n_left = 0.0;
          for (std::size_t i : idx) {
            if (X(i, j) <= threshold) {
              left[y[i]] += 1.0;
              n_left += 1.0;
            }
          }
          const double n_right = total - n_left;
          if (n_left == 0.0 || n_right == 0.0) continue;
          std::vector<double> right(n_classes);
          for (std::size_t k = 0; k < n_classes; ++k) right[k] = counts[k] - left[k];
          const double decrease = impurity - (n_left / total) * gini(left, n_left) -
                                  (n_right / total) * gini(right, n_right);
          // Strict > keeps the lowest feature index / lowest threshold on ties,
          // since features and thresholds are scanned in ascending order.
          if (decrease > best_decrease) {
            best_decrease = decrease;
            best_feature = j;
            best_threshold = threshold;
            found = true;
          }
        }
      }
      if (!found || best_decrease <= 0.0) return id;

      std::vector<std::size_t> left_idx, right_idx;
      for (std::size_t i : idx)
        (X(i, best_feature) <= best_threshold ? left_idx : right_idx).push_back(i);
      tree.feature[static_cast<std::size_t>(id)] = static_cast<std::int64_t>(best_feature);
      tree.threshold[static_cast<std::size_t>(id)] = best_threshold;
      tree.children_left[static_cast<std::size_t>(id)] = grow(left_idx, depth + 1);
      tree.children_right[static_cast<std::size_t>(id)] = grow(right_idx, depth + 1);
      return id;
    }
  };

  std::size_t leaf_for(const double* x) const {
    std::size_t id = 0;
    while (tree_.children_left[id] != kLeafChild) {
      const auto f = static_cast<std::size_t>(tree_.feature[id]);
      id = static_cast<std::size_t>(x[f] <= tree_.threshold[id] ? tree_.children_left[id]
                                                                : tree_.children_right[id]);
    }
    return id;
  }

  std::size_t majority_class(std::size_t leaf) const {
    const std::vector<double>& counts = tree_.value[leaf];
    std::size_t best = 0;
    for (std::size_t k = 1; k < counts.size(); ++k)
      if (counts[k] > counts[best]) best = k;
    return best;
  }

  void check_fitted() const {
    if (!fitted_) raise(Errc::not_fitted, "DecisionTreeClassifier is not fitted");
  }

  void check_features(const Tensor& X) const {
    if (X.dtype() != DType::float64 || X.shape().size() != 2)
      raise(Errc::feature_count_mismatch, "X must be a 2-d float64 tensor");
    if (X.shape()[1] != n_features_in_)
      raise(Errc::feature_count_mismatch,
            "model expects " + std::to_string(n_features_in_) + " features, got " +
                std::to_string(X.shape()[1]));
  }

  bool fitted_ = false;
};

}  // namespace milo
