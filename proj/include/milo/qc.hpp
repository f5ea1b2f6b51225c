#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "milo/json.hpp"
#include "milo/metrics.hpp"
#include "milo/models/model.hpp"
#include "milo/synth.hpp"
#include "milo/transport.hpp"

namespace milo {

// One metric comparison across an export/import round trip.
struct QcCase {
  std::string model_type;
  std::string metric;
  double pre = 0.0;
  double post = 0.0;
  double abs_diff = 0.0;
  std::string error;  // non-empty when the case never produced both values
};

struct QcReport {
  std::uint64_t seed = 0;
  std::vector<QcCase> cases;
  double cumulative_difference = 0.0;
  bool clustering_identical = true;
  bool passed = false;
};

inline constexpr double kQcThreshold = 1e-8;

// Called after each model file is written and before it is re-imported; tests
// use it to corrupt the artifact and watch the report fail.
using QcFileHook = std::function<void(const std::string& path, const std::string& model_type)>;

namespace detail {

struct QcContext {
  QcReport* report;
  std::filesystem::path dir;
  const QcFileHook* hook;
};

inline Model qc_round_trip(const QcContext& ctx, const Model& model) {
  const std::string type(model_type(model));
  const std::filesystem::path path = ctx.dir / (type + ".json");
  save_document(export_model(model), path.string());
  if (*ctx.hook) (*ctx.hook)(path.string(), type);
  return import_model(load_document(path.string()));
}

inline void qc_record(QcReport& report, std::string_view type, MetricKind kind, double pre,
                      double post) {
  QcCase c;
  c.model_type = std::string(type);
  c.metric = std::string(metric_name(kind));
  c.pre = pre;
  c.post = post;
  c.abs_diff = std::abs(pre - post);
  report.cumulative_difference += c.abs_diff;
  report.cases.push_back(std::move(c));
}

inline void qc_record_error(QcReport& report, std::string_view type, const std::string& what) {
  QcCase c;
  c.model_type = std::string(type);
  c.metric = "(pipeline)";
  c.error = what;
  report.cases.push_back(std::move(c));
}

template <class Fn>
void qc_case(QcReport& report, std::string_view type, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    qc_record_error(report, type, e.what());
  }
}

inline std::vector<double> labels_f64(const Tensor& t) {
  std::vector<double> out;
  out.reserve(t.size());
  for (std::int64_t v : t.i64_data()) out.push_back(static_cast<double>(v));
  return out;
}

// Deterministic hold-out split: first 3/4 train, last 1/4 test. The synthetic
// generators interleave classes, so contiguous slices stay balanced.
inline std::pair<Dataset, Dataset> qc_split(const Dataset& ds) {
  const std::size_t n = ds.n_samples();
  const std::size_t p = ds.n_features();
  const std::size_t n_train = n - n / 4;
  const std::vector<double>& X = ds.X().f64_data();

  const auto slice = [&](std::size_t begin, std::size_t count) {
    std::vector<double> Xs(X.begin() + static_cast<std::ptrdiff_t>(begin * p),
                           X.begin() + static_cast<std::ptrdiff_t>((begin + count) * p));
    Tensor Xt = Tensor::f64(std::move(Xs), {static_cast<std::int64_t>(count),
                                            static_cast<std::int64_t>(p)});
    if (!ds.has_y()) return Dataset(std::move(Xt));
    if (ds.y().dtype() == DType::int64) {
      const std::vector<std::int64_t>& y = ds.y().i64_data();
      std::vector<std::int64_t> ys(y.begin() + static_cast<std::ptrdiff_t>(begin),
                                   y.begin() + static_cast<std::ptrdiff_t>(begin + count));
      return Dataset(std::move(Xt), label_tensor(std::move(ys)));
    }
    const std::vector<double>& y = ds.y().f64_data();
    std::vector<double> ys(y.begin() + static_cast<std::ptrdiff_t>(begin),
                           y.begin() + static_cast<std::ptrdiff_t>(begin + count));
    return Dataset(std::move(Xt), vector_tensor(std::move(ys)));
  };
  return {slice(0, n_train), slice(n_train, n - n_train)};
}

template <class M>
void qc_regression_case(const QcContext& ctx, const M& fitted, const Dataset& test) {
  const std::string type(M::kModelType);
  const std::vector<double> y_true = test.y_f64();
  const std::vector<double> pre = fitted.predict(test.X()).f64_data();
  const Model back = qc_round_trip(ctx, Model(fitted));
  const std::vector<double> post = predict(back, test.X()).f64_data();
  qc_record(*ctx.report, type, MetricKind::mse,
            compute_metric(MetricKind::mse, y_true, pre),
            compute_metric(MetricKind::mse, y_true, post));
  qc_record(*ctx.report, type, MetricKind::r2,
            compute_metric(MetricKind::r2, y_true, pre),
            compute_metric(MetricKind::r2, y_true, post));
}

template <class M>
void qc_classification_case(const QcContext& ctx, const M& fitted, const Dataset& test) {
  const std::string type(M::kModelType);
  std::vector<double> y_true;
  for (std::int64_t v : test.y_labels()) y_true.push_back(static_cast<double>(v));

  const std::vector<double> pre_scores = fitted.decision_function(test.X()).f64_data();
  const std::vector<double> pre_labels = labels_f64(fitted.predict(test.X()));

  const Model back = qc_round_trip(ctx, Model(fitted));
  const M& restored = std::get<M>(back);
  const std::vector<double> post_scores = restored.decision_function(test.X()).f64_data();
  const std::vector<double> post_labels = labels_f64(restored.predict(test.X()));

  qc_record(*ctx.report, type, MetricKind::hinge,
            compute_metric(MetricKind::hinge, y_true, pre_scores),
            compute_metric(MetricKind::hinge, y_true, post_scores));
  qc_record(*ctx.report, type, MetricKind::accuracy,
            compute_metric(MetricKind::accuracy, y_true, pre_labels),
            compute_metric(MetricKind::accuracy, y_true, post_labels));
}

}  // namespace detail

// Fit, score, export to disk, import, rescore, and compare — for all five
// model types on seeded synthetic data. Failures are recorded per case, never
// thrown. Deterministic given the seed.
inline QcReport run_qc_pipeline(std::uint64_t seed, const std::string& work_dir = "",
                                const QcFileHook& after_save = {}) {
  QcReport report;
  report.seed = seed;

  namespace fs = std::filesystem;
  fs::path dir;
  bool own_dir = false;
  if (work_dir.empty()) {
    dir = fs::temp_directory_path() / ("milo-qc-" + std::to_string(seed));
    fs::create_directories(dir);
    own_dir = true;
  } else {
    dir = work_dir;
    fs::create_directories(dir);
  }
  const detail::QcContext ctx{&report, dir, &after_save};

  detail::qc_case(report, LinearRegression::kModelType, [&] {
    const auto [train, test] = detail::qc_split(make_regression(seed));
    detail::qc_regression_case(ctx, LinearRegression::fit(train), test);
  });
  // Classification blobs overlap a little (spread 1.5 against a 6.0 grid) so
  // hinge and accuracy take non-degenerate values that would register any
  // round-trip drift; fully separable data would pin them at 0 and 1.
  detail::qc_case(report, LogisticRegression::kModelType, [&] {
    const auto [train, test] = detail::qc_split(make_blobs(seed + 1, 200, 2, 2, 1.5));
    detail::qc_classification_case(ctx, LogisticRegression::fit(train), test);
  });
  detail::qc_case(report, DecisionTreeClassifier::kModelType, [&] {
    const auto [train, test] = detail::qc_split(make_blobs(seed + 2, 200, 2, 2, 1.5));
    detail::qc_classification_case(ctx, DecisionTreeClassifier::fit(train), test);
  });
  detail::qc_case(report, GaussianNB::kModelType, [&] {
    const auto [train, test] = detail::qc_split(make_blobs(seed + 3, 200, 2, 2, 1.5));
    detail::qc_classification_case(ctx, GaussianNB::fit(train), test);
  });
  detail::qc_case(report, KMeans::kModelType, [&] {
    const Dataset blobs = make_blobs(seed + 4, 200, 2, 3);
    const auto [train, test] = detail::qc_split(Dataset(blobs.X()));  // unsupervised
    const KMeans fitted = KMeans::fit(train, 3, static_cast<std::int64_t>(seed));
    const std::vector<double> pre = detail::labels_f64(fitted.predict(test.X()));
    const Model back = detail::qc_round_trip(ctx, Model(fitted));
    const std::vector<double> post = detail::labels_f64(predict(back, test.X()));
    const double match = compute_metric(MetricKind::cluster_match, pre, post);
    detail::qc_record(report, KMeans::kModelType, MetricKind::cluster_match, 1.0, match);
    if (match != 1.0) report.clustering_identical = false;
  });

  bool any_error = false;
  for (const QcCase& c : report.cases)
    if (!c.error.empty()) any_error = true;
  report.passed = !any_error && report.clustering_identical &&
                  report.cumulative_difference < kQcThreshold;

  if (own_dir) {
    std::error_code ec;
    fs::remove_all(dir, ec);  // best effort; report already holds everything
  }
  return report;
}

// Fixed-width deterministic rendering; identical seeds give identical bytes.
inline std::string format_qc_report(const QcReport& report) {
  const auto pad = [](std::string s, std::size_t width) {
    while (s.size() < width) s += ' ';
    return s;
  };
  std::string out = "QC round-trip report (seed " + std::to_string(report.seed) + ")\n";
  out += pad("model", 24) + pad("metric", 15) + pad("pre", 24) + pad("post", 24) + "|diff|\n";
  for (const QcCase& c : report.cases) {
    if (!c.error.empty()) {
      out += pad(c.model_type, 24) + pad(c.metric, 15) + "ERROR: " + c.error + "\n";
      continue;
    }
    out += pad(c.model_type, 24) + pad(c.metric, 15) + pad(format_double(c.pre), 24) +
           pad(format_double(c.post), 24) + format_double(c.abs_diff) + "\n";
  }
  out += "cumulative |pre - post|: " + format_double(report.cumulative_difference) +
         " (threshold " + format_double(kQcThreshold) + ")\n";
  out += std::string("clustering assignments identical: ") +
         (report.clustering_identical ? "yes" : "no") + "\n";
  out += std::string("result: ") + (report.passed ? "PASS" : "FAIL") + "\n";
  return out;
}

}  // namespace milo
