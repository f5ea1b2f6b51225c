#include "support/helpers.hpp"

using namespace milo;
using Catch::Matchers::WithinAbs;

#ifndef MILO_TEST_DATA_DIR
#error "MILO_TEST_DATA_DIR must point at the tests/data directory"
#endif

namespace {

ModelDocument figure_document() {
  return export_model(Model(LinearRegression::fit(testutil::figure_dataset())));
}

std::vector<std::string> top_level_keys(const Node& n) {
  std::vector<std::string> keys;
  for (const auto& [k, v] : n.as_map().entries()) {
    (void)v;
    keys.push_back(k);
  }
  return keys;
}

}  // namespace

TEST_CASE("exported documents follow the envelope layout") {
  const ModelDocument doc = figure_document();
  CHECK(doc.model_type == "LinearRegression");
  CHECK(doc.pymilo_version == "1.1");
  CHECK(doc.sklearn_version == std::string(kModelingVersion));

  const Node n = document_node(doc);
  CHECK(top_level_keys(n) ==
        std::vector<std::string>{"data", "sklearn_version", "pymilo_version", "model_type"});
  CHECK(top_level_keys(n.as_map().at("data")) ==
        std::vector<std::string>{"fit_intercept", "copy_X", "n_jobs", "positive",
                                 "n_features_in_", "coef_", "rank_", "singular_", "intercept_"});

  // The intercept is a typed scalar with the interop tag spelled exactly.
  const NodeMap& intercept = n.as_map().at("data").as_map().at("intercept_").as_map();
  CHECK(intercept.at("np-type").as_string() == "numpy.float64");
  REQUIRE(intercept.contains("value"));
}

TEST_CASE("save/load is a bitwise fixed point of the pretty rendering") {
  testutil::TempDir dir;
  const ModelDocument doc = figure_document();
  const std::string path = dir.file("model.json");
  save_document(doc, path);

  const std::string first = read_file(path);
  CHECK(first.back() == '\n');
  CHECK(first == render_pretty(document_node(doc)) + "\n");

  const ModelDocument loaded = load_document(path);
  CHECK(loaded == doc);
  save_document(loaded, path);
  CHECK(read_file(path) == first);
}

TEST_CASE("documents round-trip for every model type with identical predictions") {
  testutil::TempDir dir;
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Model m = testutil::random_model(seed);
    const std::string path = dir.file("m" + std::to_string(seed) + ".json");
    save_document(export_model(m), path);

    const Model back = import_model(load_document(path));
    const Tensor X = seed % 5 == 0 ? make_regression(seed + 50, 6, 3).X()
                                   : make_blobs(seed + 50, 6, 2, 2).X();
    CHECK(predict(back, X) == predict(m, X));
  }
}

TEST_CASE("the stored figure document validates clean and predicts 16") {
  const ModelDocument doc =
      load_document(std::string(MILO_TEST_DATA_DIR) + "/model_inside.json");
  CHECK(doc.sklearn_version == "1.5.2");
  CHECK(doc.pymilo_version == "1.1");

  const ValidationReport report = validate_document(doc);
  INFO(format_report(report));
  CHECK(report.ok);
  // The producing library's version differs from ours, so import warns but
  // must not error.
  std::vector<std::string> warnings;
  const Model m = import_model(doc, &warnings);
  CHECK(warnings.size() == 1);
  const Tensor pred = predict(m, matrix_tensor({{3, 5}}));
  CHECK_THAT(pred.f64_data()[0], WithinAbs(16.0, 1e-9));
}

TEST_CASE("strict import refuses version mismatches that lax import warns about") {
  ModelDocument doc = figure_document();
  doc.pymilo_version = "9.9";
  std::vector<std::string> warnings;
  (void)import_model(doc, &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("9.9") != std::string::npos);
  REQUIRE_ERRC(import_model(doc, nullptr, /*strict=*/true), Errc::unsupported_version);
}

TEST_CASE("envelope completeness and unknown keys are enforced on load") {
  const Node good = document_node(figure_document());

  NodeMap missing = good.as_map();
  missing.erase("model_type");
  REQUIRE_ERRC(document_from_node(Node::map(std::move(missing))), Errc::missing_envelope_key);

  NodeMap extra = good.as_map();
  extra.set("plugins", Node::str("</script>"));
  try {
    document_from_node(Node::map(std::move(extra)));
    FAIL("expected malformed_envelope");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::malformed_envelope);
    CHECK(std::string(e.what()).find("plugins") != std::string::npos);
  }

  REQUIRE_ERRC(document_from_node(Node::integer(3)), Errc::malformed_envelope);
}

TEST_CASE("validation findings carry the offending field path") {
  ModelDocument doc = figure_document();

  // Corrupt one tensor's shape so only that field fails.
  NodeMap data = doc.data.as_map();
  NodeMap coef = data.at("coef_").as_map();
  NodeList shape;
  shape.push_back(Node::integer(3));
  coef.set("pymiloed-ndarray-shape", Node::list(std::move(shape)));
  data.set("coef_", Node::map(std::move(coef)));
  doc.data = Node::map(std::move(data));

  const ValidationReport report = validate_document(doc);
  REQUIRE_FALSE(report.ok);
  REQUIRE(report.findings.size() == 1);
  CHECK(report.findings[0].severity == Severity::error);
  CHECK(report.findings[0].path == "data.coef_");

  const std::string text = format_report(report);
  CHECK(text.find("invalid (1 finding)") == 0);
  CHECK(text.find("data.coef_") != std::string::npos);
}

TEST_CASE("validation reports missing fields and unknown model types") {
  ModelDocument doc = figure_document();
  NodeMap data = doc.data.as_map();
  data.erase("coef_");
  doc.data = Node::map(std::move(data));
  const ValidationReport missing = validate_document(doc);
  REQUIRE_FALSE(missing.ok);
  bool found = false;
  for (const Finding& f : missing.findings)
    if (f.path == "data.coef_" && f.severity == Severity::error) found = true;
  CHECK(found);

  ModelDocument unknown = figure_document();
  unknown.model_type = "GradientBooster";
  const ValidationReport bad_type = validate_document(unknown);
  REQUIRE_FALSE(bad_type.ok);
  CHECK(bad_type.findings[0].path == "model_type");
}

TEST_CASE("unknown extra fields warn but do not fail validation") {
  ModelDocument doc = figure_document();
  NodeMap data = doc.data.as_map();
  data.set("future_field_", Node::str("kept"));
  doc.data = Node::map(std::move(data));

  const ValidationReport report = validate_document(doc);
  CHECK(report.ok);
  REQUIRE(report.findings.size() == 1);
  CHECK(report.findings[0].severity == Severity::warning);
  CHECK(report.findings[0].path == "data.future_field_");

  // ok with findings renders as "ok (1 finding)".
  CHECK(format_report(report).find("ok (1 finding)") == 0);
}

TEST_CASE("validation catches invariant violations across fields") {
  // Fields restore individually but the assembled state is inconsistent:
  // labels_ refers to a cluster that does not exist.
  const Model m(KMeans::fit(Dataset(matrix_tensor({{0, 0}, {0, 1}, {9, 9}, {9, 8}})), 2, 3));
  ModelDocument doc = export_model(m);
  NodeMap data = doc.data.as_map();
  data.set("n_clusters", Node::integer(1));
  doc.data = Node::map(std::move(data));

  const ValidationReport report = validate_document(doc);
  REQUIRE_FALSE(report.ok);
  bool has_data_error = false;
  for (const Finding& f : report.findings)
    if (f.severity == Severity::error) has_data_error = true;
  CHECK(has_data_error);
}

TEST_CASE("io failures surface as io_failure") {
  REQUIRE_ERRC(load_document("/nonexistent/nowhere.json"), Errc::io_failure);
  testutil::TempDir dir;
  REQUIRE_ERRC(save_document(figure_document(), dir.file("no/such/dir/x.json")),
               Errc::io_failure);
}

TEST_CASE("a text editor edit of coefficients changes the imported model") {
  testutil::TempDir dir;
  const std::string path = dir.file("model.json");
  save_document(figure_document(), path);

  // Simulate the hand edit: swap the coefficient list inside the raw text.
  std::string text = read_file(path);
  const std::string needle = "\"coef_\"";
  REQUIRE(text.find(needle) != std::string::npos);
  // Parse, edit through the tree (robust against formatting), re-save.
  ModelDocument doc = document_from_node(parse_json(text));
  NodeMap data = doc.data.as_map();
  NodeMap coef = data.at("coef_").as_map();
  NodeList values;
  values.push_back(Node::real(2.0));
  values.push_back(Node::real(2.0));
  coef.set("pymiloed-ndarray-list", Node::list(std::move(values)));
  data.set("coef_", Node::map(std::move(coef)));
  NodeMap intercept = data.at("intercept_").as_map();
  intercept.set("value", Node::real(3.0));
  data.set("intercept_", Node::map(std::move(intercept)));
  doc.data = Node::map(std::move(data));
  save_document(doc, path);

  const Model edited = import_model(load_document(path));
  CHECK(predict(edited, matrix_tensor({{3, 5}})).f64_data()[0] == 19.0);
}
