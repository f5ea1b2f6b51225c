#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "milo/error.hpp"
#include "milo/models/dataset.hpp"
#include "milo/models/linalg.hpp"
#include "milo/models/state_io.hpp"
#include "milo/state.hpp"

namespace milo {

// Gaussian naive Bayes: per-class feature means and variances with a
// variance-smoothing floor proportional to the largest column variance.
class GaussianNB {
 public:
  static constexpr std::string_view kModelType = "GaussianNB";

  GaussianNB() = default;

  static GaussianNB fit(const Dataset& ds, double var_smoothing = 1e-9) {
    if (var_smoothing < 0.0) raise(Errc::invalid_args, "var_smoothing must be non-negative");
    const std::size_t n = ds.n_samples(), p = ds.n_features();
    const Mat X = ds.X_mat();
    const std::vector<std::int64_t> labels = ds.y_labels();

    std::vector<std::int64_t> classes = labels;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    const std::size_t c = classes.size();

    std::vector<double> count(c, 0.0);
    Mat theta(c, p), var(c, p);
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(
          std::lower_bound(classes.begin(), classes.end(), labels[i]) - classes.begin());
      count[k] += 1.0;
      for (std::size_t j = 0; j < p; ++j) theta(k, j) += X(i, j);
    }
    for (std::size_t k = 0; k < c; ++k) {
      if (count[k] == 0.0)
        raise(Errc::empty_class, "class " + std::to_string(classes[k]) + " has no samples");
      for (std::size_t j = 0; j < p; ++j) theta(k, j) /= count[k];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto k = static_cast<std::size_t>(
          std::lower_bound(classes.begin(), classes.end(), labels[i]) - classes.begin());
      for (std::size_t j = 0; j < p; ++j) {
        const double d = X(i, j) - theta(k, j);
        var(k, j) += d * d;
      }
    }
    for (std::size_t k = 0; k < c; ++k)
      for (std::size_t j = 0; j < p; ++j) var(k, j) /= count[k];

    // Smoothing floor: var_smoothing times the largest whole-column variance.
    double max_col_var = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += X(i, j);
      mean /= static_cast<double>(n);
      double v = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = X(i, j) - mean;
        v += d * d;
      }
      max_col_var = std::max(max_col_var, v / static_cast<double>(n));
    }
    const double epsilon = var_smoothing * max_col_var;
    for (std::size_t k = 0; k < c; ++k)
      for (std::size_t j = 0; j < p; ++j) var(k, j) += epsilon;

    GaussianNB m;
    m.var_smoothing = var_smoothing;
    m.n_features_in_ = static_cast<std::int64_t>(p);
    m.classes_ = std::move(classes);
    for (std::size_t k = 0; k < c; ++k)
      m.class_prior_.push_back(count[k] / static_cast<double>(n));
    m.theta_ = std::move(theta);
    m.var_ = std::move(var);
    m.fitted_ = true;
    return m;
  }

  // Joint log-likelihood per class: log prior + Σ_j log N(x_j | θ, σ²).
  std::vector<double> log_posterior(const double* x) const {
    const std::size_t c = classes_.size(), p = theta_.cols;
    std::vector<double> out(c);
    for (std::size_t k = 0; k < c; ++k) {
      double s = std::log(class_prior_[k]);
      for (std::size_t j = 0; j < p; ++j) {
        const double v = var_(k, j);
        const double d = x[j] - theta_(k, j);
        s += -0.5 * std::log(2.0 * 3.141592653589793 * v) - d * d / (2.0 * v);
      }
      out[k] = s;
    }
    return out;
  }

  Tensor predict(const Tensor& X) const {
    check_fitted();
    check_features(X);
    const auto m = static_cast<std::size_t>(X.shape()[0]);
    const auto p = static_cast<std::size_t>(X.shape()[1]);
    const std::vector<double>& x = X.f64_data();
    std::vector<std::int64_t> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      const std::vector<double> lp = log_posterior(x.data() + i * p);
      std::size_t best = 0;
      for (std::size_t k = 1; k < lp.size(); ++k)
        if (lp[k] > lp[best]) best = k;
      out.push_back(classes_[best]);
    }
    return Tensor::i64(std::move(out), {static_cast<std::int64_t>(m)});
  }

  // Binary-only signed score: log-posterior margin for the higher class.
  Tensor decision_function(const Tensor& X) const {
    check_fitted();
    check_features(X);
    if (classes_.size() != 2)
      raise(Errc::invalid_args, "decision_function is defined for binary GaussianNB only");
    const auto m = static_cast<std::size_t>(X.shape()[0]);
    const auto p = static_cast<std::size_t>(X.shape()[1]);
    const std::vector<double>& x = X.f64_data();
    std::vector<double> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
      const std::vector<double> lp = log_posterior(x.data() + i * p);
      out.push_back(lp[1] - lp[0]);
    }
    return Tensor::f64(std::move(out), {static_cast<std::int64_t>(m)});
  }

  StateMap extract_state() const {
    check_fitted();
    StateMap s;
    s.set("var_smoothing", StateValue::real(var_smoothing));
    s.set("n_features_in_", StateValue::integer(n_features_in_));
    s.set("classes_", StateValue::labels(LabelIndex(classes_)));
    s.set("class_prior_", StateValue::tensor(Tensor::f64(
                              class_prior_, {static_cast<std::int64_t>(class_prior_.size())})));
    s.set("theta_", StateValue::tensor(Tensor::f64(theta_.a,
                                                   {static_cast<std::int64_t>(theta_.rows),
                                                    static_cast<std::int64_t>(theta_.cols)})));
    s.set("var_", StateValue::tensor(Tensor::f64(var_.a,
                                                 {static_cast<std::int64_t>(var_.rows),
                                                  static_cast<std::int64_t>(var_.cols)})));
    return s;
  }

  static GaussianNB restore(const StateMap& state) {
    GaussianNB m;
    m.var_smoothing = detail::read_real(state, "var_smoothing");
    m.n_features_in_ = detail::read_int(state, "n_features_in_");
    m.classes_ = detail::require_field(state, "classes_").as_labels().labels();
    m.class_prior_ = detail::read_f64_vector(state, "class_prior_");
    const Tensor& theta = detail::read_tensor(state, "theta_");
    const Tensor& var = detail::read_tensor(state, "var_");
    const auto c = static_cast<std::int64_t>(m.classes_.size());
    for (const Tensor* t : {&theta, &var})
      if (t->dtype() != DType::float64 || t->shape().size() != 2 || t->shape()[0] != c ||
          t->shape()[1] != m.n_features_in_)
        raise(Errc::invariant_violation, "theta_/var_ must be [classes, features] float64 tensors");
    if (static_cast<std::int64_t>(m.class_prior_.size()) != c)
      raise(Errc::invariant_violation, "class_prior_ length disagrees with classes_");
    double prior_sum = 0.0;
    for (double q : m.class_prior_) {
      if (!(q >= 0.0)) raise(Errc::invariant_violation, "class_prior_ entries must be non-negative");
      prior_sum += q;
    }
    if (std::abs(prior_sum - 1.0) > 1e-12)
      raise(Errc::invariant_violation, "class_prior_ must sum to 1");
    m.theta_ = Mat(static_cast<std::size_t>(c), static_cast<std::size_t>(m.n_features_in_));
    m.theta_.a = theta.f64_data();
    m.var_ = Mat(static_cast<std::size_t>(c), static_cast<std::size_t>(m.n_features_in_));
    m.var_.a = var.f64_data();
    for (double v : m.var_.a)
      if (!(v > 0.0)) raise(Errc::invariant_violation, "var_ entries must be strictly positive");
    m.fitted_ = true;
    return m;
  }

  bool fitted() const { return fitted_; }

  double var_smoothing = 1e-9;
  std::int64_t n_features_in_ = 0;
  std::vector<std::int64_t> classes_;
  std::vector<double> class_prior_;
  Mat theta_;
  Mat var_;

 private:
  void check_fitted() const {
    if (!fitted_) raise(Errc::not_fitted, "GaussianNB is not fitted");
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
