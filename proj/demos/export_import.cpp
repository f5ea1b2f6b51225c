// Demo: train a linear model, export it to transparent JSON, read it back,
// and show that the file is plain data — inspectable and non-executable.

#include <cstdio>

#include "milo/milo.hpp"

int main() {
  using namespace milo;

  // The classic 4-point fixture: y = 1*x1 + 2*x2 + 3.
  Dataset ds(matrix_tensor({{1, 1}, {1, 2}, {2, 2}, {2, 3}}), vector_tensor({6, 8, 9, 11}));
  LinearRegression model = LinearRegression::fit(ds);

  ModelDocument doc = export_model(Model(model));
  std::printf("--- exported document ---\n%s\n", render_pretty(document_node(doc)).c_str());

  // The whole file is made of seven JSON data kinds; nothing in it can run.
  int nodes = 0;
  document_node(doc).walk([&](const Node&) { ++nodes; });
  std::printf("transparency: %d nodes, all plain data (null/bool/int/float/string/list/map)\n",
              nodes);

  ValidationReport report = validate_document(doc);
  std::printf("validation: %s", format_report(report).c_str());

  Model back = import_model(doc);
  Tensor pred = predict(back, matrix_tensor({{3, 5}}));
  std::printf("predict([[3, 5]]) = %s\n", format_double_pretty(pred.f64_data()[0]).c_str());

  // Bit-exact round trip: the re-imported model predicts identically.
  Tensor again = predict(back, ds.X());
  Tensor orig = model.predict(ds.X());
  std::printf("round-trip predictions bitwise equal: %s\n", again == orig ? "yes" : "no");
  return 0;
}
