#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "milo/error.hpp"
#include "milo/models/linalg.hpp"
#include "milo/tensor.hpp"

namespace milo {

// Training input: an [n, p] float64 design matrix and an optional target
// vector (float64 for regression, int64 labels for classification).
class Dataset {
 public:
  Dataset(Tensor X, std::optional<Tensor> y = std::nullopt)
      : X_(std::move(X)), y_(std::move(y)) {
    if (X_.dtype() != DType::float64 || X_.shape().size() != 2)
      raise(Errc::dimension_mismatch, "X must be a 2-d float64 tensor");
    if (X_.shape()[0] < 1) raise(Errc::empty_dataset, "dataset has no samples");
    if (y_ && y_->shape() != std::vector<std::int64_t>{X_.shape()[0]})
      raise(Errc::dimension_mismatch, "y length must equal the number of samples");
  }

  const Tensor& X() const { return X_; }

  const Tensor& y() const {
    if (!y_) raise(Errc::invalid_args, "dataset has no target column");
    return *y_;
  }

  bool has_y() const { return y_.has_value(); }
  std::size_t n_samples() const { return static_cast<std::size_t>(X_.shape()[0]); }
  std::size_t n_features() const { return static_cast<std::size_t>(X_.shape()[1]); }

  Mat X_mat() const {
    Mat m(n_samples(), n_features());
    m.a = X_.f64_data();
    return m;
  }

  std::vector<double> y_f64() const {
    const Tensor& t = y();
    if (t.dtype() == DType::float64) return t.f64_data();
    if (t.dtype() == DType::int64) {
      std::vector<double> out;
      out.reserve(t.size());
      for (std::int64_t v : t.i64_data()) out.push_back(static_cast<double>(v));
      return out;
    }
    raise(Errc::invalid_args, "target must be float64 or int64");
  }

  // Integer labels; a float64 target is accepted when every entry is an
  // exact integer (the CSV path reads everything as float64).
  std::vector<std::int64_t> y_labels() const {
    const Tensor& t = y();
    if (t.dtype() == DType::int64) return t.i64_data();
    if (t.dtype() == DType::float64) {
      std::vector<std::int64_t> out;
      out.reserve(t.size());
      for (double v : t.f64_data()) {
        if (!std::isfinite(v) || v != std::floor(v))
          raise(Errc::invalid_args, "class labels must be integers");
        out.push_back(static_cast<std::int64_t>(v));
      }
      return out;
    }
    raise(Errc::invalid_args, "target must be float64 or int64");
  }

 private:
  Tensor X_;
  std::optional<Tensor> y_;
};

// Convenience builders used all over the tests and the CLI.
inline Tensor matrix_tensor(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<std::int64_t>(rows.size());
  const std::int64_t p = rows.empty() ? 0 : static_cast<std::int64_t>(rows[0].size());
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(n * p));
  for (const auto& r : rows) {
    if (static_cast<std::int64_t>(r.size()) != p)
      raise(Errc::dimension_mismatch, "ragged matrix rows");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Tensor::f64(std::move(flat), {n, p});
}

inline Tensor vector_tensor(std::vector<double> values) {
  const auto n = static_cast<std::int64_t>(values.size());
  return Tensor::f64(std::move(values), {n});
}

inline Tensor label_tensor(std::vector<std::int64_t> values) {
  const auto n = static_cast<std::int64_t>(values.size());
  return Tensor::i64(std::move(values), {n});
}

}  // namespace milo
