#include "support/helpers.hpp"

using namespace milo;

namespace {

std::vector<std::string> chain_names(const TransporterChain& chain) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < chain.size(); ++i) names.emplace_back(chain.at(i).name());
  return names;
}

}  // namespace

TEST_CASE("each category builds its documented chain, in order") {
  CHECK(chain_names(build_chain(ModelCategory::LinearModel)) ==
        std::vector<std::string>{"primitive", "scalar", "ndarray", "container"});
  CHECK(chain_names(build_chain(ModelCategory::Clustering)) ==
        std::vector<std::string>{"primitive", "scalar", "ndarray", "container"});
  CHECK(chain_names(build_chain(ModelCategory::DecisionTree)) ==
        std::vector<std::string>{"primitive", "scalar", "ndarray", "tree", "label-index",
                                 "container"});
  CHECK(chain_names(build_chain(ModelCategory::NaiveBayes)) ==
        std::vector<std::string>{"primitive", "scalar", "ndarray", "label-index", "container"});
}

TEST_CASE("primitives round-trip through any chain") {
  const TransporterChain chain = build_chain(ModelCategory::LinearModel);
  const StateValue cases[] = {
      StateValue::null(),          StateValue::boolean(true), StateValue::integer(-42),
      StateValue::real(0.015625),  StateValue::str("gini"),
  };
  for (const StateValue& v : cases) {
    const Node n = chain.serialize_value(v, "field");
    CHECK(chain.restore_value(n, "field") == v);
  }
}

TEST_CASE("plain non-finite floats are rejected at serialization") {
  // Only tensors and typed scalars may carry nan/inf (as sentinels); a bare
  // config float must stay finite or the file would be ambiguous.
  const TransporterChain chain = build_chain(ModelCategory::LinearModel);
  REQUIRE_ERRC(chain.serialize_value(StateValue::real(std::nan("")), "x"),
               Errc::unsupported_structure);
  REQUIRE_ERRC(
      chain.serialize_value(StateValue::real(std::numeric_limits<double>::infinity()), "x"),
      Errc::unsupported_structure);
}

TEST_CASE("first matching transporter wins") {
  // A tensor is claimed by ndarray before container ever sees it; the encoded
  // node carries the ndarray structure tag.
  const TransporterChain chain = build_chain(ModelCategory::LinearModel);
  const Node n = chain.serialize_value(StateValue::tensor(Tensor::f64({1.0}, {1})), "t");
  CHECK(n.as_map().at("pymiloed-data-structure").as_string() == "numpy.ndarray");

  // A typed scalar is claimed by scalar (np-type key), not primitive.
  const Node s = chain.serialize_value(StateValue::scalar(TypedScalar::f64(2.0)), "s");
  CHECK(s.as_map().contains("np-type"));
}

TEST_CASE("unsupported structures fall off the chain with a path") {
  // LinearModel's chain has no tree transporter.
  const TransporterChain chain = build_chain(ModelCategory::LinearModel);
  TreeNodes tree;
  tree.children_left = {-1};
  tree.children_right = {-1};
  tree.feature = {-2};
  tree.threshold = {-2.0};
  tree.value = {{1.0}};
  try {
    chain.serialize_value(StateValue::tree(std::move(tree)), "data.tree_");
    FAIL("expected unsupported_structure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_structure);
    CHECK(std::string(e.what()).find("data.tree_") != std::string::npos);
  }
}

TEST_CASE("container handles nested lists and maps, extending the path") {
  const TransporterChain chain = build_chain(ModelCategory::LinearModel);
  StateList inner;
  inner.push_back(StateValue::integer(1));
  inner.push_back(StateValue::real(2.5));
  StateMap mapped;
  mapped.set("xs", StateValue::list(std::move(inner)));
  mapped.set("tag", StateValue::str("ok"));
  const StateValue original = StateValue::map(std::move(mapped));
  const Node n = chain.serialize_value(original, "root");
  CHECK(chain.restore_value(n, "root") == original);
}

TEST_CASE("nested failure paths name the offending element") {
  const TransporterChain chain = build_chain(ModelCategory::LinearModel);
  StateList items;
  items.push_back(StateValue::integer(1));
  items.push_back(StateValue::real(std::nan("")));  // fails inside the list
  try {
    chain.serialize_value(StateValue::list(std::move(items)), "field");
    FAIL("expected unsupported_structure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::unsupported_structure);
    CHECK(std::string(e.what()).find("field[1]") != std::string::npos);
  }
}

TEST_CASE("tree state round-trips through the DecisionTree chain") {
  const TransporterChain chain = build_chain(ModelCategory::DecisionTree);
  TreeNodes tree;
  tree.children_left = {1, -1, -1};
  tree.children_right = {2, -1, -1};
  tree.feature = {0, -2, -2};
  tree.threshold = {1.5, -2.0, -2.0};
  tree.value = {{2.0, 2.0}, {2.0, 0.0}, {0.0, 2.0}};
  const StateValue original = StateValue::tree(tree);

  const Node n = chain.serialize_value(original, "tree_");
  CHECK(n.as_map().at("pymiloed-data-structure").as_string() == "decision-tree");
  const StateValue back = chain.restore_value(n, "tree_");
  CHECK(back == original);
  CHECK(back.as_tree().node_count() == 3);
}

TEST_CASE("label index round-trips and validates its position map") {
  const TransporterChain chain = build_chain(ModelCategory::NaiveBayes);
  const StateValue original = StateValue::labels(LabelIndex({-3, 0, 7}));
  const Node n = chain.serialize_value(original, "classes_");
  CHECK(n.as_map().at("pymiloed-data-structure").as_string() == "label-index");
  CHECK(n.as_map().contains("pymiloed-class-labels"));
  CHECK(n.as_map().contains("pymiloed-label-index"));
  CHECK(chain.restore_value(n, "classes_") == original);

  // Corrupt the index: position points at the wrong label.
  NodeMap m = n.as_map();
  NodeMap idx;
  idx.set("-3", Node::integer(1));
  idx.set("0", Node::integer(0));
  idx.set("7", Node::integer(2));
  m.set("pymiloed-label-index", Node::map(std::move(idx)));
  REQUIRE_ERRC(chain.restore_value(Node::map(std::move(m)), "classes_"),
               Errc::invariant_violation);
}

TEST_CASE("duplicate labels are rejected when building a label index") {
  const std::vector<std::int64_t> duplicated{1, 1};
  REQUIRE_ERRC(LabelIndex(duplicated), Errc::invariant_violation);
}

TEST_CASE("restore rejects maps with unknown structure tags loudly") {
  const TransporterChain chain = build_chain(ModelCategory::LinearModel);
  NodeMap m;
  m.set("pymiloed-data-structure", Node::str("future.sparse-matrix"));
  m.set("payload", Node::integer(1));
  // Container refuses tagged maps, so this falls off the end of the chain
  // instead of silently restoring as a plain map.
  REQUIRE_ERRC(chain.restore_value(Node::map(std::move(m)), "field"),
               Errc::unsupported_structure);

  NodeMap scalarish;
  scalarish.set("np-type", Node::str("numpy.float128"));
  scalarish.set("value", Node::real(1.0));
  REQUIRE_ERRC(chain.restore_value(Node::map(std::move(scalarish)), "field"),
               Errc::unknown_type_tag);
}

TEST_CASE("tree nodes outside the DecisionTree chain cannot be restored either") {
  const TransporterChain dt = build_chain(ModelCategory::DecisionTree);
  TreeNodes tree;
  tree.children_left = {-1};
  tree.children_right = {-1};
  tree.feature = {-2};
  tree.threshold = {-2.0};
  tree.value = {{1.0}};
  const Node n = dt.serialize_value(StateValue::tree(std::move(tree)), "t");

  const TransporterChain lm = build_chain(ModelCategory::LinearModel);
  REQUIRE_ERRC(lm.restore_value(n, "t"), Errc::unsupported_structure);
}

TEST_CASE("chain_serialize preserves field order; chain_deserialize inverts it") {
  const TransporterChain chain = build_chain(ModelCategory::LinearModel);
  StateMap state;
  state.set("zebra", StateValue::integer(1));
  state.set("apple", StateValue::boolean(false));
  state.set("mango", StateValue::tensor(Tensor::f64({1.5, 2.5}, {2})));

  const Node n = chain_serialize(chain, state);
  std::vector<std::string> keys;
  for (const auto& [k, v] : n.as_map().entries()) {
    (void)v;
    keys.push_back(k);
  }
  CHECK(keys == std::vector<std::string>{"zebra", "apple", "mango"});

  const StateMap back = chain_deserialize(chain, n);
  CHECK(back == state);
}

TEST_CASE("chain_deserialize rejects non-map documents") {
  const TransporterChain chain = build_chain(ModelCategory::LinearModel);
  REQUIRE_ERRC(chain_deserialize(chain, Node::integer(7)), Errc::malformed_node);
}

TEST_CASE("category names round-trip") {
  for (ModelCategory c : {ModelCategory::LinearModel, ModelCategory::DecisionTree,
                          ModelCategory::Clustering, ModelCategory::NaiveBayes})
    CHECK(category_from_name(category_name(c)) == c);
  REQUIRE_ERRC(category_from_name("Quantum"), Errc::unknown_category);
}
