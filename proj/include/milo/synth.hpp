#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "milo/models/dataset.hpp"
#include "milo/models/rng.hpp"

namespace milo {

// Seeded synthetic datasets for the QC pipeline and tests: linear-plus-noise
// for regression, separated Gaussian blobs for classification/clustering.

inline Dataset make_regression(std::uint64_t seed, std::size_t n = 200, std::size_t p = 3,
                               double noise = 0.05) {
  Rng rng(seed);
  std::vector<double> coef(p);
  for (double& c : coef) c = rng.uniform01() * 4.0 - 2.0;
  const double intercept = rng.uniform01() * 2.0 - 1.0;

  std::vector<double> X;
  X.reserve(n * p);
  std::vector<double> y;
  y.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    double dot = intercept;
    for (std::size_t j = 0; j < p; ++j) {
      const double x = rng.uniform01() * 10.0 - 5.0;
      X.push_back(x);
      dot += coef[j] * x;
    }
    y.push_back(dot + noise * rng.normal());
  }
  return Dataset(Tensor::f64(std::move(X), {static_cast<std::int64_t>(n),
                                            static_cast<std::int64_t>(p)}),
                 vector_tensor(std::move(y)));
}

// k well-separated Gaussian blobs with integer labels 0..k-1; blob centers on
// a coarse grid so classes stay linearly separable enough for the QC models.
inline Dataset make_blobs(std::uint64_t seed, std::size_t n = 200, std::size_t p = 2,
                          std::size_t k = 2, double spread = 0.6) {
  Rng rng(seed);
  std::vector<std::vector<double>> centers(k, std::vector<double>(p));
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t j = 0; j < p; ++j)
      centers[c][j] = static_cast<double>(c) * 6.0 + rng.uniform01() * 2.0 - 1.0;

  std::vector<double> X;
  X.reserve(n * p);
  std::vector<std::int64_t> y;
  y.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % k;  // balanced classes, deterministic order
    for (std::size_t j = 0; j < p; ++j)
      X.push_back(centers[c][j] + spread * rng.normal());
    y.push_back(static_cast<std::int64_t>(c));
  }
  return Dataset(Tensor::f64(std::move(X), {static_cast<std::int64_t>(n),
                                            static_cast<std::int64_t>(p)}),
                 label_tensor(std::move(y)));
}

}  // namespace milo
