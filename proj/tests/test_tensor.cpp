#include "support/helpers.hpp"

using namespace milo;

TEST_CASE("tensor construction validates shape against buffer size") {
  CHECK(Tensor::f64({1, 2, 3, 4, 5, 6}, {2, 3}).size() == 6);
  CHECK(Tensor::i64({1, 2, 3}, {3}).size() == 3);
  REQUIRE_ERRC(Tensor::f64({1, 2, 3}, {2, 2}), Errc::shape_mismatch);
  REQUIRE_ERRC(Tensor::f64({1}, {-1}), Errc::shape_mismatch);
}

TEST_CASE("zero-dimensional tensors hold exactly one element") {
  const Tensor t = Tensor::f64({2.5}, {});
  CHECK(t.shape().empty());
  CHECK(t.size() == 1);
  const Node n = encode_tensor(t);
  CHECK(n.as_map().at("pymiloed-ndarray-shape").as_list().empty());
  CHECK(decode_tensor(n) == t);
}

TEST_CASE("encode_tensor emits the four keys in interop order") {
  const Tensor t = Tensor::f64({1.0, 2.0}, {2});
  const Node encoded = encode_tensor(t);
  const NodeMap& m = encoded.as_map();
  std::vector<std::string> keys;
  for (const auto& [k, v] : m.entries()) {
    (void)v;
    keys.push_back(k);
  }
  CHECK(keys == std::vector<std::string>{"pymiloed-ndarray-list", "pymiloed-ndarray-dtype",
                                         "pymiloed-ndarray-shape", "pymiloed-data-structure"});
  CHECK(m.at("pymiloed-data-structure").as_string() == "numpy.ndarray");
  CHECK(m.at("pymiloed-ndarray-dtype").as_string() == "float64");
}

TEST_CASE("dtype strings are exact") {
  CHECK(dtype_name(DType::float64) == "float64");
  CHECK(dtype_name(DType::int64) == "int64");
  CHECK(dtype_name(DType::bool_) == "bool_");
  CHECK(dtype_from_name("float64") == DType::float64);
  REQUIRE_ERRC(dtype_from_name("float32"), Errc::dtype_unknown);
  REQUIRE_ERRC(dtype_from_name(""), Errc::dtype_unknown);
}

TEST_CASE("tensor encode/decode round-trips all dtypes bitwise") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> real_dist(-1e9, 1e9);

  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> f64;
    for (int i = 0; i < 12; ++i) f64.push_back(real_dist(rng));
    const Tensor tf = Tensor::f64(std::move(f64), {3, 4});
    CHECK(decode_tensor(encode_tensor(tf)) == tf);
  }

  // int64 beyond 2^53 must not lose precision.
  const Tensor ti =
      Tensor::i64({9007199254740993, -9007199254740995, 0, std::numeric_limits<std::int64_t>::max()},
                  {4});
  const Tensor ti_back = decode_tensor(encode_tensor(ti));
  CHECK(ti_back == ti);
  CHECK(ti_back.i64_data()[0] == 9007199254740993);

  const Tensor tb = Tensor::boolean({1, 0, 1}, {3});
  CHECK(decode_tensor(encode_tensor(tb)) == tb);
}

TEST_CASE("non-finite floats ride as string sentinels inside tensor lists") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  const Tensor t = Tensor::f64({nan, inf, -inf, 1.5}, {4});
  const Node n = encode_tensor(t);
  const NodeList& values = n.as_map().at("pymiloed-ndarray-list").as_list();
  CHECK(values[0].as_string() == "nan");
  CHECK(values[1].as_string() == "inf");
  CHECK(values[2].as_string() == "-inf");
  CHECK(values[3].as_real() == 1.5);

  const Tensor back = decode_tensor(n);
  CHECK(std::isnan(back.f64_data()[0]));
  CHECK(back.f64_data()[1] == inf);
  CHECK(back.f64_data()[2] == -inf);
  CHECK(back == t);  // bitwise comparison treats equal NaN bits as equal
}

TEST_CASE("unknown sentinel strings are rejected") {
  Node n = encode_tensor(Tensor::f64({1.0}, {1}));
  NodeMap m = n.as_map();
  NodeList values;
  values.push_back(Node::str("infinity"));  // not a recognized sentinel
  m.set("pymiloed-ndarray-list", Node::list(std::move(values)));
  REQUIRE_ERRC(decode_tensor(Node::map(std::move(m))), Errc::malformed_node);
}

TEST_CASE("decode_tensor validates the structure tag") {
  Node good = encode_tensor(Tensor::f64({1.0}, {1}));
  NodeMap tagless = good.as_map();
  tagless.set("pymiloed-data-structure", Node::str("something.else"));
  REQUIRE_ERRC(decode_tensor(Node::map(std::move(tagless))), Errc::unknown_type_tag);
  REQUIRE_ERRC(decode_tensor(Node::integer(1)), Errc::malformed_node);
}

TEST_CASE("decode_tensor validates shape consistency") {
  Node n = encode_tensor(Tensor::f64({1.0, 2.0}, {2}));
  NodeMap m = n.as_map();
  NodeList shape;
  shape.push_back(Node::integer(3));  // claims 3 elements, list has 2
  m.set("pymiloed-ndarray-shape", Node::list(std::move(shape)));
  REQUIRE_ERRC(decode_tensor(Node::map(std::move(m))), Errc::shape_mismatch);

  NodeMap neg = n.as_map();
  NodeList negshape;
  negshape.push_back(Node::integer(-2));
  neg.set("pymiloed-ndarray-shape", Node::list(std::move(negshape)));
  REQUIRE_ERRC(decode_tensor(Node::map(std::move(neg))), Errc::malformed_node);
}

TEST_CASE("decode_tensor reports missing keys") {
  Node n = encode_tensor(Tensor::f64({1.0}, {1}));
  NodeMap m = n.as_map();
  m.erase("pymiloed-ndarray-dtype");
  REQUIRE_ERRC(decode_tensor(Node::map(std::move(m))), Errc::missing_key);
}

TEST_CASE("int elements coerce to double under float64 dtype") {
  // A hand-written file may say 1 instead of 1.0; dtype wins.
  const Node n = parse_json(R"({
    "pymiloed-ndarray-list": [1, 2.5],
    "pymiloed-ndarray-dtype": "float64",
    "pymiloed-ndarray-shape": [2],
    "pymiloed-data-structure": "numpy.ndarray"
  })");
  const Tensor t = decode_tensor(n);
  CHECK(t.dtype() == DType::float64);
  CHECK(t.f64_data()[0] == 1.0);
  CHECK(t.f64_data()[1] == 2.5);
}

TEST_CASE("typed scalars carry their np-type tag") {
  const Node f = encode_scalar(TypedScalar::f64(3.0000000000000018));
  CHECK(f.as_map().at("np-type").as_string() == "numpy.float64");
  CHECK(f.as_map().at("value").as_real() == 3.0000000000000018);
  CHECK(decode_scalar(f) == TypedScalar::f64(3.0000000000000018));

  const Node i = encode_scalar(TypedScalar::i64(-5));
  CHECK(i.as_map().at("np-type").as_string() == "numpy.int64");
  CHECK(decode_scalar(i) == TypedScalar::i64(-5));

  const Node b = encode_scalar(TypedScalar::boolean(true));
  CHECK(b.as_map().at("np-type").as_string() == "numpy.bool_");
  CHECK(decode_scalar(b) == TypedScalar::boolean(true));
}

TEST_CASE("scalar decode rejects unknown np-type tags") {
  NodeMap m;
  m.set("value", Node::real(1.0));
  m.set("np-type", Node::str("numpy.float32"));
  REQUIRE_ERRC(decode_scalar(Node::map(std::move(m))), Errc::unknown_type_tag);
}

TEST_CASE("scalar float64 accepts non-finite sentinels and integer spellings") {
  NodeMap m;
  m.set("value", Node::str("inf"));
  m.set("np-type", Node::str("numpy.float64"));
  CHECK(decode_scalar(Node::map(std::move(m))).as_f64() ==
        std::numeric_limits<double>::infinity());

  NodeMap k;
  k.set("value", Node::integer(3));
  k.set("np-type", Node::str("numpy.float64"));
  CHECK(decode_scalar(Node::map(std::move(k))).as_f64() == 3.0);
}

TEST_CASE("tensor equality is bitwise") {
  CHECK(Tensor::f64({0.0}, {1}) != Tensor::f64({-0.0}, {1}));
  CHECK(Tensor::f64({1.0}, {1}) != Tensor::f64({1.0}, {1, 1}));  // shape matters
  CHECK(Tensor::f64({1.0}, {1}) != Tensor::i64({1}, {1}));       // dtype matters
}
