#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "milo/error.hpp"

namespace milo {

enum class MetricKind { mse, r2, accuracy, hinge, cluster_match };

constexpr std::string_view metric_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::mse: return "mse";
    case MetricKind::r2: return "r2";
    case MetricKind::accuracy: return "accuracy";
    case MetricKind::hinge: return "hinge";
    case MetricKind::cluster_match: return "cluster_match";
  }
  return "unknown";
}

inline MetricKind metric_from_name(std::string_view name) {
  if (name == "mse") return MetricKind::mse;
  if (name == "r2") return MetricKind::r2;
  if (name == "accuracy") return MetricKind::accuracy;
  if (name == "hinge") return MetricKind::hinge;
  if (name == "cluster_match") return MetricKind::cluster_match;
  raise(Errc::invalid_args, "unknown metric '" + std::string(name) + "'");
}

namespace detail {

// Hinge wants targets in {-1,+1}; accept {0,1} and map 0 -> -1.
inline double hinge_sign(double label) {
  if (label == 1.0) return 1.0;
  if (label == -1.0 || label == 0.0) return -1.0;
  raise(Errc::invalid_args, "hinge labels must be in {0,1} or {-1,+1}");
}

}  // namespace detail

// y_pred carries predictions for mse/r2/accuracy/cluster_match and signed
// decision scores for hinge.
inline double compute_metric(MetricKind kind, const std::vector<double>& y_true,
                             const std::vector<double>& y_pred) {
  if (y_true.size() != y_pred.size())
    raise(Errc::length_mismatch, "y_true has " + std::to_string(y_true.size()) +
                                     " entries, y_pred has " + std::to_string(y_pred.size()));
  if (y_true.empty()) raise(Errc::length_mismatch, "metric inputs are empty");
  const auto n = static_cast<double>(y_true.size());

  switch (kind) {
    case MetricKind::mse: {
      double acc = 0.0;
      for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double d = y_true[i] - y_pred[i];
        acc += d * d;
      }
      return acc / n;
    }
    case MetricKind::r2: {
      double mean = 0.0;
      for (double v : y_true) mean += v;
      mean /= n;
      double ss_res = 0.0;
      double ss_tot = 0.0;
      for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double r = y_true[i] - y_pred[i];
        const double t = y_true[i] - mean;
        ss_res += r * r;
        ss_tot += t * t;
      }
      if (ss_tot == 0.0)
        raise(Errc::constant_target, "r2 is undefined for a constant target");
      return 1.0 - ss_res / ss_tot;
    }
    case MetricKind::accuracy:
    case MetricKind::cluster_match: {
      std::size_t hits = 0;
      for (std::size_t i = 0; i < y_true.size(); ++i)
        if (y_true[i] == y_pred[i]) ++hits;
      return static_cast<double>(hits) / n;
    }
    case MetricKind::hinge: {
      double acc = 0.0;
      for (std::size_t i = 0; i < y_true.size(); ++i)
        acc += std::max(0.0, 1.0 - detail::hinge_sign(y_true[i]) * y_pred[i]);
      return acc / n;
    }
  }
  raise(Errc::invalid_args, "unknown metric kind");
}

}  // namespace milo
