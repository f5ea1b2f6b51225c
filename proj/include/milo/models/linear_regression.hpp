#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "milo/error.hpp"
#include "milo/models/dataset.hpp"
#include "milo/models/linalg.hpp"
#include "milo/models/state_io.hpp"
#include "milo/state.hpp"

namespace milo {

// Ordinary least squares via SVD on the centered design matrix. The SVD route
// is what makes rank_ and singular_ part of the learned state rather than
// incidental internals.
class LinearRegression {
 public:
  static constexpr std::string_view kModelType = "LinearRegression";

  LinearRegression() = default;

  static LinearRegression fit(const Dataset& ds, bool fit_intercept = true) {
    const std::size_t n = ds.n_samples(), p = ds.n_features();
    if (p == 0) raise(Errc::dimension_mismatch, "X must have at least one feature");
    Mat X = ds.X_mat();
    std::vector<double> y = ds.y_f64();

    std::vector<double> x_mean(p, 0.0);
    double y_mean = 0.0;
    if (fit_intercept) {
      for (std::size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += X(i, j);
        x_mean[j] = s / static_cast<double>(n);
      }
      double s = 0.0;
      for (double v : y) s += v;
      y_mean = s / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) X(i, j) -= x_mean[j];
        y[i] -= y_mean;
      }
    }

    const SvdResult svd = jacobi_svd(X);
    LinearRegression m;
    m.fit_intercept = fit_intercept;
    m.n_features_in_ = static_cast<std::int64_t>(p);
    m.coef_ = svd_lstsq(svd, y);
    m.singular_.assign(svd.singular.begin(),
                       svd.singular.begin() + static_cast<std::ptrdiff_t>(std::min(n, p)));
    const double s_max = m.singular_.empty() ? 0.0 : m.singular_[0];
    const double cutoff =
        s_max * std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(n, p));
    m.rank_ = static_cast<std::int64_t>(
        std::count_if(m.singular_.begin(), m.singular_.end(),
                      [&](double s) { return s > cutoff; }));
    double xm_dot_coef = 0.0;
    for (std::size_t j = 0; j < p; ++j) xm_dot_coef += x_mean[j] * m.coef_[j];
    m.intercept_ = fit_intercept ? y_mean - xm_dot_coef : 0.0;
    m.fitted_ = true;
    return m;
  }

  Tensor predict(const Tensor& X) const {
    check_fitted();
    if (X.dtype() != DType::float64 || X.shape().size() != 2)
      raise(Errc::feature_count_mismatch, "X must be a 2-d float64 tensor");
    const auto m = static_cast<std::size_t>(X.shape()[0]);
    const auto p = static_cast<std::size_t>(X.shape()[1]);
    if (static_cast<std::int64_t>(p) != n_features_in_)
      raise(Errc::feature_count_mismatch,
            "model expects " + std::to_string(n_features_in_) + " features, got " +
                std::to_string(p));
    std::vector<double> out(m, 0.0);
    const std::vector<double>& x = X.f64_data();
    for (std::size_t i = 0; i < m; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < p; ++j) s += x[i * p + j] * coef_[j];
      out[i] = s + intercept_;
    }
    return Tensor::f64(std::move(out), {static_cast<std::int64_t>(m)});
  }

  StateMap extract_state() const {
    check_fitted();
    StateMap s;
    s.set("fit_intercept", StateValue::boolean(fit_intercept));
    s.set("copy_X", StateValue::boolean(copy_X));
    s.set("n_jobs", StateValue::null());
    s.set("positive", StateValue::boolean(positive));
    s.set("n_features_in_", StateValue::integer(n_features_in_));
    s.set("coef_", StateValue::tensor(Tensor::f64(
                       coef_, {static_cast<std::int64_t>(coef_.size())})));
    s.set("rank_", StateValue::integer(rank_));
    s.set("singular_", StateValue::tensor(Tensor::f64(
                           singular_, {static_cast<std::int64_t>(singular_.size())})));
    s.set("intercept_", StateValue::scalar(TypedScalar::f64(intercept_)));
    return s;
  }

  static LinearRegression restore(const StateMap& state) {
    LinearRegression m;
    m.fit_intercept = detail::read_bool(state, "fit_intercept");
    m.copy_X = detail::read_bool(state, "copy_X");
    detail::require_field(state, "n_jobs");
    m.positive = detail::read_bool(state, "positive");
    m.n_features_in_ = detail::read_int(state, "n_features_in_");
    m.coef_ = detail::read_f64_vector(state, "coef_");
    m.rank_ = detail::read_int(state, "rank_");
    m.singular_ = detail::read_f64_vector(state, "singular_");
    m.intercept_ = detail::read_f64_scalar(state, "intercept_");
    if (static_cast<std::int64_t>(m.coef_.size()) != m.n_features_in_)
      raise(Errc::invariant_violation, "coef_ length disagrees with n_features_in_");
    for (std::size_t i = 0; i < m.singular_.size(); ++i) {
      if (m.singular_[i] < 0.0)
        raise(Errc::invariant_violation, "singular_ values must be non-negative");
      if (i > 0 && m.singular_[i] > m.singular_[i - 1])
        raise(Errc::invariant_violation, "singular_ values must be non-increasing");
    }
    if (m.rank_ < 0 || m.rank_ > static_cast<std::int64_t>(m.singular_.size()))
      raise(Errc::invariant_violation, "rank_ out of range");
    m.fitted_ = true;
    return m;
  }

  bool fitted() const { return fitted_; }

  // Config (format-compat flags mirror the exported key set).
  bool fit_intercept = true;
  bool copy_X = true;
  bool positive = false;

  // Learned.
  std::int64_t n_features_in_ = 0;
  std::vector<double> coef_;
  double intercept_ = 0.0;
  std::int64_t rank_ = 0;
  std::vector<double> singular_;

 private:
  void check_fitted() const {
    if (!fitted_) raise(Errc::not_fitted, "LinearRegression is not fitted");
  }

  bool fitted_ = false;
};

}  // namespace milo
