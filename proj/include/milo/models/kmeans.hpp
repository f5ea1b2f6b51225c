#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "milo/error.hpp"
#include "milo/models/dataset.hpp"
#include "milo/models/linalg.hpp"
#include "milo/models/rng.hpp"
#include "milo/models/state_io.hpp"
#include "milo/state.hpp"

namespace milo {

// Lloyd's algorithm with k-means++ seeding. Fully deterministic given
// random_state (see Rng); ties in assignment go to the lowest center index.
class KMeans {
 public:
  static constexpr std::string_view kModelType = "KMeans";

  KMeans() = default;

  static KMeans fit(const Dataset& ds, std::int64_t k, std::int64_t random_state = 0,
                    std::int64_t max_iter = 300) {
    const std::size_t n = ds.n_samples(), p = ds.n_features();
    if (k < 1) raise(Errc::invalid_args, "n_clusters must be >= 1");
    if (static_cast<std::int64_t>(n) < k)
      raise(Errc::too_few_samples, "need at least n_clusters samples, got " + std::to_string(n));
    if (max_iter < 1) raise(Errc::invalid_args, "max_iter must be >= 1");
    const Mat X = ds.X_mat();
    const auto kk = static_cast<std::size_t>(k);

    Rng rng(static_cast<std::uint64_t>(random_state));
    Mat centers = plus_plus_init(X, kk, rng);

    std::vector<std::int64_t> labels = assign(X, centers);
    std::int64_t iters = 0;
    for (std::int64_t it = 0; it < max_iter; ++it) {
      centers = update_centers(X, labels, kk);
      std::vector<std::int64_t> next = assign(X, centers);
      iters = it + 1;
      const bool stable = next == labels;
      labels = std::move(next);
      if (stable) break;
    }

    double inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      inertia += squared_distance(X.row(i), centers.row(static_cast<std::size_t>(labels[i])), p);

    KMeans m;
    m.n_clusters = k;
    m.random_state = random_state;
    m.cluster_centers_ = std::move(centers);
    m.labels_ = std::move(labels);
    m.inertia_ = inertia;
    m.n_iter_ = iters;
    m.fitted_ = true;
    return m;
  }

  Tensor predict(const Tensor& X) const {
    check_fitted();
    if (X.dtype() != DType::float64 || X.shape().size() != 2)
      raise(Errc::feature_count_mismatch, "X must be a 2-d float64 tensor");
    const auto p = static_cast<std::size_t>(X.shape()[1]);
    if (p != cluster_centers_.cols)
      raise(Errc::feature_count_mismatch,
            "model expects " + std::to_string(cluster_centers_.cols) + " features, got " +
                std::to_string(p));
    const auto m = static_cast<std::size_t>(X.shape()[0]);
    const std::vector<double>& x = X.f64_data();
    std::vector<std::int64_t> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.push_back(nearest(x.data() + i * p));
    return Tensor::i64(std::move(out), {static_cast<std::int64_t>(m)});
  }

  StateMap extract_state() const {
    check_fitted();
    StateMap s;
    s.set("n_clusters", StateValue::integer(n_clusters));
    s.set("random_state", StateValue::integer(random_state));
    s.set("cluster_centers_",
          StateValue::tensor(Tensor::f64(cluster_centers_.a,
                                         {static_cast<std::int64_t>(cluster_centers_.rows),
                                          static_cast<std::int64_t>(cluster_centers_.cols)})));
    s.set("labels_", StateValue::tensor(Tensor::i64(
                         labels_, {static_cast<std::int64_t>(labels_.size())})));
    s.set("inertia_", StateValue::scalar(TypedScalar::f64(inertia_)));
    s.set("n_iter_", StateValue::integer(n_iter_));
    return s;
  }

  static KMeans restore(const StateMap& state) {
    KMeans m;
    m.n_clusters = detail::read_int(state, "n_clusters");
    m.random_state = detail::read_int(state, "random_state");
    const Tensor& centers = detail::read_tensor(state, "cluster_centers_");
    if (centers.dtype() != DType::float64 || centers.shape().size() != 2)
      raise(Errc::invariant_violation, "cluster_centers_ must be a 2-d float64 tensor");
    if (centers.shape()[0] != m.n_clusters)
      raise(Errc::invariant_violation, "cluster_centers_ row count disagrees with n_clusters");
    m.cluster_centers_ = Mat(static_cast<std::size_t>(centers.shape()[0]),
                             static_cast<std::size_t>(centers.shape()[1]));
    m.cluster_centers_.a = centers.f64_data();
    m.labels_ = detail::read_i64_vector(state, "labels_");
    for (std::int64_t l : m.labels_)
      if (l < 0 || l >= m.n_clusters)
        raise(Errc::invariant_violation, "labels_ entry out of [0, n_clusters)");
    m.inertia_ = detail::read_f64_scalar(state, "inertia_");
    if (!(m.inertia_ >= 0.0)) raise(Errc::invariant_violation, "inertia_ must be non-negative");
    m.n_iter_ = detail::read_int(state, "n_iter_");
    m.fitted_ = true;
    return m;
  }

  bool fitted() const { return fitted_; }

  std::int64_t n_clusters = 0;
  std::int64_t random_state = 0;
  Mat cluster_centers_;
  std::vector<std::int64_t> labels_;
  double inertia_ = 0.0;
  std::int64_t n_iter_ = 0;

 private:
  static Mat plus_plus_init(const Mat& X, std::size_t k, Rng& rng) {
    const std::size_t n = X.rows, p = X.cols;
    Mat centers(k, p);
    std::vector<std::size_t> chosen;
    chosen.push_back(rng.index(n));
    std::vector<double> d2(n);
    for (std::size_t c = 1; c < k; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        double best = squared_distance(X.row(i), X.row(chosen[0]), p);
        for (std::size_t j = 1; j < chosen.size(); ++j)
          best = std::min(best, squared_distance(X.row(i), X.row(chosen[j]), p));
        d2[i] = best;
      }
      chosen.push_back(rng.weighted_index(d2));
    }
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t j = 0; j < p; ++j) centers(c, j) = X(chosen[c], j);
    return centers;
  }

  static std::vector<std::int64_t> assign(const Mat& X, const Mat& centers) {
    std::vector<std::int64_t> labels(X.rows);
    for (std::size_t i = 0; i < X.rows; ++i) {
      std::size_t best = 0;
      double best_d = squared_distance(X.row(i), centers.row(0), X.cols);
      for (std::size_t c = 1; c < centers.rows; ++c) {
        const double d = squared_distance(X.row(i), centers.row(c), X.cols);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      labels[i] = static_cast<std::int64_t>(best);
    }
    return labels;
  }

  // Means per cluster. An empty cluster is re-seeded with the point farthest
  // from its assigned center (distinct point per reseed, lowest cluster index
  // first); the robbed cluster's mean catches up on the next iteration.
  static Mat update_centers(const Mat& X, std::vector<std::int64_t>& labels, std::size_t k) {
    const std::size_t n = X.rows, p = X.cols;
    Mat centers(k, p);
    std::vector<double> count(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto c = static_cast<std::size_t>(labels[i]);
      for (std::size_t j = 0; j < p; ++j) centers(c, j) += X(i, j);
      count[c] += 1.0;
    }
    for (std::size_t c = 0; c < k; ++c)
      if (count[c] > 0.0)
        for (std::size_t j = 0; j < p; ++j) centers(c, j) /= count[c];

    std::vector<char> reseeded(n, 0);
    for (std::size_t c = 0; c < k; ++c) {
      if (count[c] > 0.0) continue;
      std::size_t farthest = 0;
      double far_d = -1.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (reseeded[i]) continue;
        const auto owner = static_cast<std::size_t>(labels[i]);
        if (count[owner] == 0.0) continue;
        const double d = squared_distance(X.row(i), centers.row(owner), p);
        if (d > far_d) {
          far_d = d;
          farthest = i;
        }
      }
      reseeded[farthest] = 1;
      labels[farthest] = static_cast<std::int64_t>(c);
      for (std::size_t j = 0; j < p; ++j) centers(c, j) = X(farthest, j);
      count[c] = 1.0;
    }
    return centers;
  }

  std::int64_t nearest(const double* x) const {
    std::size_t best = 0;
    double best_d = squared_distance(x, cluster_centers_.row(0), cluster_centers_.cols);
    for (std::size_t c = 1; c < cluster_centers_.rows; ++c) {
      const double d = squared_distance(x, cluster_centers_.row(c), cluster_centers_.cols);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    return static_cast<std::int64_t>(best);
  }

  void check_fitted() const {
    if (!fitted_) raise(Errc::not_fitted, "KMeans is not fitted");
  }

  bool fitted_ = false;
};

}  // namespace milo
