#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <vector>

#include "milo/error.hpp"

namespace milo {

// Minimal dense row-major matrix; everything the models need and nothing more.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

  const double* row(std::size_t i) const { return a.data() + i * cols; }
};

struct SvdResult {
  std::vector<double> singular;  // non-increasing
  Mat v;                         // p×p, right singular vectors in columns
  Mat w;                         // n×p, w_k = A·v_k (= σ_k·u_k)
};

// One-sided (Hestenes) Jacobi SVD. Rotates column pairs of A until all pairs
// are orthogonal; singular values are the final column norms. Plain and
// dependency-free, and on small systems it lands on the exact closed-form
// values where blocked algorithms are off by an ulp.
inline SvdResult jacobi_svd(const Mat& input) {
  const std::size_t n = input.rows, p = input.cols;
  Mat a = input;
  Mat v(p, p);
  for (std::size_t i = 0; i < p; ++i) v(i, i) = 1.0;

  auto col_dot = [&](std::size_t i, std::size_t j) {
    double d = 0.0;
    for (std::size_t r = 0; r < n; ++r) d += a(r, i) * a(r, j);
    return d;
  };

  for (int sweep = 0; sweep < 60; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) {
        const double alpha = col_dot(i, i);
        const double beta = col_dot(j, j);
        const double gamma = col_dot(i, j);
        if (gamma == 0.0 || alpha == 0.0 || beta == 0.0) continue;
        if (std::abs(gamma) <= 1e-16 * std::sqrt(alpha) * std::sqrt(beta)) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t r = 0; r < n; ++r) {
          const double x = a(r, i), y = a(r, j);
          a(r, i) = c * x - s * y;
          a(r, j) = s * x + c * y;
        }
        for (std::size_t r = 0; r < p; ++r) {
          const double x = v(r, i), y = v(r, j);
          v(r, i) = c * x - s * y;
          v(r, j) = s * x + c * y;
        }
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  std::vector<double> s2(p);
  for (std::size_t i = 0; i < p; ++i) s2[i] = col_dot(i, i);
  std::vector<std::size_t> ord(p);
  std::iota(ord.begin(), ord.end(), std::size_t{0});
  std::stable_sort(ord.begin(), ord.end(),
                   [&](std::size_t x, std::size_t y) { return s2[x] > s2[y]; });

  SvdResult out;
  out.singular.resize(p);
  out.v = Mat(p, p);
  out.w = Mat(n, p);
  for (std::size_t k = 0; k < p; ++k) {
    out.singular[k] = std::sqrt(s2[ord[k]]);
    for (std::size_t r = 0; r < p; ++r) out.v(r, k) = v(r, ord[k]);
    for (std::size_t r = 0; r < n; ++r) out.w(r, k) = a(r, ord[k]);
  }
  return out;
}

// Minimal-norm least squares via the SVD above: x = Σ_k v_k · (w_k·b / w_k·w_k),
// skipping null directions. Using w_k·b / w_k·w_k (= u_k·b / σ_k without ever
// forming u or dividing by σ) keeps small systems exact.
inline std::vector<double> svd_lstsq(const SvdResult& svd, const std::vector<double>& b) {
  const std::size_t n = svd.w.rows, p = svd.v.rows;
  std::vector<double> x(p, 0.0);
  for (std::size_t k = 0; k < p; ++k) {
    double wb = 0.0, ww = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      wb += svd.w(r, k) * b[r];
      ww += svd.w(r, k) * svd.w(r, k);
    }
    if (ww == 0.0) continue;
    const double z = wb / ww;
    for (std::size_t r = 0; r < p; ++r) x[r] += svd.v(r, k) * z;
  }
  return x;
}

inline double squared_distance(const double* a, const double* b, std::size_t p) {
  double d = 0.0;
  for (std::size_t j = 0; j < p; ++j) {
    const double diff = a[j] - b[j];
    d += diff * diff;
  }
  return d;
}

}  // namespace milo
