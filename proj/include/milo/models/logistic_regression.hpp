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

// Binary logistic regression trained by full-batch gradient descent on the
// unregularized logistic loss. Zero initialization and a fixed step make the
// fit a deterministic function of the data — no RNG, no thread effects.
class LogisticRegression {
 public:
  static constexpr std::string_view kModelType = "LogisticRegression";

  LogisticRegression() = default;

  static LogisticRegression fit(const Dataset& ds, std::int64_t max_iter = 1000,
                                double tol = 1e-6, double lr = 0.1) {
    if (max_iter < 1 || lr <= 0.0 || tol < 0.0)
      raise(Errc::invalid_args, "max_iter must be >= 1, lr > 0, tol >= 0");
    const std::size_t n = ds.n_samples(), p = ds.n_features();
    const Mat X = ds.X_mat();
    const std::vector<std::int64_t> labels = ds.y_labels();

    std::vector<std::int64_t> classes = labels;
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    if (classes.size() != 2)
      raise(Errc::not_binary,
            "logistic regression needs exactly 2 classes, got " + std::to_string(classes.size()));

    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = labels[i] == classes[1] ? 1.0 : 0.0;

    std::vector<double> w(p, 0.0);
    double b = 0.0;
    std::int64_t iters = 0;
    std::vector<double> grad_w(p);
    for (std::int64_t it = 0; it < max_iter; ++it) {
      std::fill(grad_w.begin(), grad_w.end(), 0.0);
      double grad_b = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double s = b;
        for (std::size_t j = 0; j < p; ++j) s += w[j] * X(i, j);
        const double err = sigmoid(s) - t[i];
        for (std::size_t j = 0; j < p; ++j) grad_w[j] += err * X(i, j);
        grad_b += err;
      }
      double g_inf = std::abs(grad_b) / static_cast<double>(n);
      for (std::size_t j = 0; j < p; ++j)
        g_inf = std::max(g_inf, std::abs(grad_w[j]) / static_cast<double>(n));
      if (g_inf < tol) break;
      for (std::size_t j = 0; j < p; ++j) w[j] -= lr * grad_w[j] / static_cast<double>(n);
      b -= lr * grad_b / static_cast<double>(n);
      iters = it + 1;
    }

    LogisticRegression m;
    m.max_iter = max_iter;
    m.tol = tol;
    m.lr = lr;
    m.n_features_in_ = static_cast<std::int64_t>(p);
    m.classes_ = std::move(classes);
    m.coef_ = std::move(w);
    m.intercept_ = b;
    m.n_iter_ = iters;
    m.fitted_ = true;
    return m;
  }

  // Signed pre-threshold score w·x + b; positive means the higher class.
  Tensor decision_function(const Tensor& X) const {
    check_fitted();
    check_features(X);
    const auto m = static_cast<std::size_t>(X.shape()[0]);
    const auto p = static_cast<std::size_t>(X.shape()[1]);
    const std::vector<double>& x = X.f64_data();
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) {
      double s = intercept_;
      for (std::size_t j = 0; j < p; ++j) s += x[i * p + j] * coef_[j];
      out[i] = s;
    }
    return Tensor::f64(std::move(out), {static_cast<std::int64_t>(m)});
  }

  Tensor predict(const Tensor& X) const {
    const Tensor scores = decision_function(X);
    std::vector<std::int64_t> out;
    out.reserve(scores.size());
    for (double s : scores.f64_data()) out.push_back(classes_[s > 0.0 ? 1 : 0]);
    return Tensor::i64(std::move(out), {static_cast<std::int64_t>(out.size())});
  }

  StateMap extract_state() const {
    check_fitted();
    StateMap s;
    s.set("max_iter", StateValue::integer(max_iter));
    s.set("tol", StateValue::real(tol));
    s.set("lr", StateValue::real(lr));
    s.set("n_features_in_", StateValue::integer(n_features_in_));
    s.set("classes_", StateValue::tensor(Tensor::i64(
                          classes_, {static_cast<std::int64_t>(classes_.size())})));
    s.set("coef_", StateValue::tensor(Tensor::f64(
                       coef_, {1, static_cast<std::int64_t>(coef_.size())})));
    s.set("intercept_", StateValue::tensor(Tensor::f64({intercept_}, {1})));
    s.set("n_iter_", StateValue::integer(n_iter_));
    return s;
  }

  static LogisticRegression restore(const StateMap& state) {
    LogisticRegression m;
    m.max_iter = detail::read_int(state, "max_iter");
    m.tol = detail::read_real(state, "tol");
    m.lr = detail::read_real(state, "lr");
    m.n_features_in_ = detail::read_int(state, "n_features_in_");
    m.classes_ = detail::read_i64_vector(state, "classes_");
    const Tensor& coef = detail::read_tensor(state, "coef_");
    if (coef.dtype() != DType::float64 || coef.shape().size() != 2 || coef.shape()[0] != 1 ||
        coef.shape()[1] != m.n_features_in_)
      raise(Errc::invariant_violation, "coef_ must be a [1, n_features_in_] float64 tensor");
    m.coef_ = coef.f64_data();
    const std::vector<double> b = detail::read_f64_vector(state, "intercept_");
    if (b.size() != 1) raise(Errc::invariant_violation, "intercept_ must have length 1");
    m.intercept_ = b[0];
    m.n_iter_ = detail::read_int(state, "n_iter_");
    if (m.classes_.size() != 2 || m.classes_[0] >= m.classes_[1])
      raise(Errc::invariant_violation, "classes_ must be 2 labels sorted ascending");
    if (m.n_iter_ < 0 || m.n_iter_ > m.max_iter)
      raise(Errc::invariant_violation, "n_iter_ must lie in [0, max_iter]");
    m.fitted_ = true;
    return m;
  }

  bool fitted() const { return fitted_; }

  // Learning parameters.
  std::int64_t max_iter = 1000;
  double tol = 1e-6;
  double lr = 0.1;

  // Learned.
  std::int64_t n_features_in_ = 0;
  std::vector<std::int64_t> classes_;
  std::vector<double> coef_;
  double intercept_ = 0.0;
  std::int64_t n_iter_ = 0;

 private:
  static double sigmoid(double s) { return 1.0 / (1.0 + std::exp(-s)); }

  bool fitted_ = false;

  void check_fitted() const {
    if (!fitted_) raise(Errc::not_fitted, "LogisticRegression is not fitted");
  }

  void check_features(const Tensor& X) const {
    if (X.dtype() != DType::float64 || X.shape().size() != 2)
      raise(Errc::feature_count_mismatch, "X must be a 2-d float64 tensor");
    if (X.shape()[1] != n_features_in_)
      raise(Errc::feature_count_mismatch,
            "model expects " + std::to_string(n_features_in_) + " features, got " +
                std::to_string(X.shape()[1]));
  }
};

}  // namespace milo
