#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "milo/error.hpp"
#include "milo/json.hpp"
#include "milo/node.hpp"

namespace milo {

// Format tags kept verbatim for interop with files produced by the original
// ecosystem; this library has no dependency on the libraries they name.
inline constexpr std::string_view kNdArrayListKey = "pymiloed-ndarray-list";
inline constexpr std::string_view kNdArrayDTypeKey = "pymiloed-ndarray-dtype";
inline constexpr std::string_view kNdArrayShapeKey = "pymiloed-ndarray-shape";
inline constexpr std::string_view kDataStructureKey = "pymiloed-data-structure";
inline constexpr std::string_view kNdArrayTag = "numpy.ndarray";
inline constexpr std::string_view kScalarValueKey = "value";
inline constexpr std::string_view kScalarTypeKey = "np-type";

enum class DType { float64, int64, bool_ };

constexpr std::string_view dtype_name(DType d) {
  switch (d) {
    case DType::float64: return "float64";
    case DType::int64: return "int64";
    case DType::bool_: return "bool_";
  }
  return "?";
}

inline DType dtype_from_name(std::string_view s) {
  if (s == "float64") return DType::float64;
  if (s == "int64") return DType::int64;
  if (s == "bool_") return DType::bool_;
  raise(Errc::dtype_unknown, "unknown dtype \"" + std::string(s) + "\"");
}

constexpr std::string_view scalar_type_tag(DType d) {
  switch (d) {
    case DType::float64: return "numpy.float64";
    case DType::int64: return "numpy.int64";
    case DType::bool_: return "numpy.bool_";
  }
  return "?";
}

inline DType dtype_from_scalar_tag(std::string_view s) {
  if (s == "numpy.float64") return DType::float64;
  if (s == "numpy.int64") return DType::int64;
  if (s == "numpy.bool_") return DType::bool_;
  raise(Errc::unknown_type_tag, "unknown np-type \"" + std::string(s) + "\"");
}

namespace detail {

inline bool f64_bits_equal(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b);
}

// JSON has no literals for NaN or the infinities, so tensor payloads carry
// them as string sentinels and decode maps the sentinels back.
inline Node encode_f64_element(double d) {
  if (std::isnan(d)) return Node::str("nan");
  if (std::isinf(d)) return Node::str(d > 0 ? "inf" : "-inf");
  return Node::real(d);
}

inline double decode_f64_element(const Node& n) {
  if (n.is_string()) {
    const std::string& s = n.as_string();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    raise(Errc::malformed_node, "unrecognized float sentinel \"" + s + "\"");
  }
  if (n.is_int()) return static_cast<double>(n.as_int());
  return n.as_real();
}

}  // namespace detail

// Dense n-dimensional array: flat row-major payload, explicit dtype, explicit
// shape. The payload buffer matches the dtype exactly so round trips are
// lossless for the full int64 range, not just the double-representable part.
class Tensor {
 public:
  using F64Buf = std::vector<double>;
  using I64Buf = std::vector<std::int64_t>;
  using BoolBuf = std::vector<unsigned char>;

  Tensor() : data_(F64Buf{}), shape_{0} {}

  static Tensor f64(F64Buf data, std::vector<std::int64_t> shape) {
    return Tensor(std::move(data), std::move(shape));
  }
  static Tensor i64(I64Buf data, std::vector<std::int64_t> shape) {
    return Tensor(std::move(data), std::move(shape));
  }
  static Tensor boolean(BoolBuf data, std::vector<std::int64_t> shape) {
    return Tensor(std::move(data), std::move(shape));
  }

  DType dtype() const {
    switch (data_.index()) {
      case 0: return DType::float64;
      case 1: return DType::int64;
      default: return DType::bool_;
    }
  }

  const std::vector<std::int64_t>& shape() const { return shape_; }

  std::size_t size() const {
    std::size_t n = 1;
    for (std::int64_t d : shape_) n *= static_cast<std::size_t>(d);
    return n;
  }

  const F64Buf& f64_data() const { return buf<F64Buf>(); }
  const I64Buf& i64_data() const { return buf<I64Buf>(); }
  const BoolBuf& bool_data() const { return buf<BoolBuf>(); }

  bool operator==(const Tensor& other) const {
    if (shape_ != other.shape_ || data_.index() != other.data_.index()) return false;
    if (dtype() == DType::float64) {
      const F64Buf& a = f64_data();
      const F64Buf& b = other.f64_data();
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (!detail::f64_bits_equal(a[i], b[i])) return false;
      return true;
    }
    return data_ == other.data_;
  }

 private:
  template <class Buf>
  Tensor(Buf data, std::vector<std::int64_t> shape)
      : data_(std::move(data)), shape_(std::move(shape)) {
    for (std::int64_t d : shape_)
      if (d < 0) raise(Errc::shape_mismatch, "negative dimension in tensor shape");
    std::size_t len = std::visit([](const auto& b) { return b.size(); }, data_);
    if (len != size())
      raise(Errc::shape_mismatch,
            "tensor payload of length " + std::to_string(len) + " does not match shape");
  }

  template <class Buf>
  const Buf& buf() const {
    if (!std::holds_alternative<Buf>(data_))
      raise(Errc::malformed_node,
            "tensor dtype is " + std::string(dtype_name(dtype())) + ", wrong accessor used");
    return std::get<Buf>(data_);
  }

  std::variant<F64Buf, I64Buf, BoolBuf> data_;
  std::vector<std::int64_t> shape_;
};

// A single typed number kept distinct from 0-d tensors; the wrapped form
// ({"value", "np-type"}) is what model files use for scalar learned fields.
class TypedScalar {
 public:
  static TypedScalar f64(double v) { return TypedScalar(Value(v)); }
  static TypedScalar i64(std::int64_t v) { return TypedScalar(Value(v)); }
  static TypedScalar boolean(bool v) { return TypedScalar(Value(v)); }

  DType dtype() const {
    switch (value_.index()) {
      case 0: return DType::float64;
      case 1: return DType::int64;
      default: return DType::bool_;
    }
  }

  std::string_view type_tag() const { return scalar_type_tag(dtype()); }

  double as_f64() const {
    if (!std::holds_alternative<double>(value_))
      raise(Errc::malformed_node, "scalar is not float64");
    return std::get<double>(value_);
  }
  std::int64_t as_i64() const {
    if (!std::holds_alternative<std::int64_t>(value_))
      raise(Errc::malformed_node, "scalar is not int64");
    return std::get<std::int64_t>(value_);
  }
  bool as_bool() const {
    if (!std::holds_alternative<bool>(value_))
      raise(Errc::malformed_node, "scalar is not bool");
    return std::get<bool>(value_);
  }

  bool operator==(const TypedScalar& other) const {
    if (value_.index() != other.value_.index()) return false;
    if (dtype() == DType::float64)
      return detail::f64_bits_equal(as_f64(), other.as_f64());
    return value_ == other.value_;
  }

 private:
  using Value = std::variant<double, std::int64_t, bool>;
  explicit TypedScalar(Value v) : value_(v) {}
  Value value_;
};

inline Node encode_tensor(const Tensor& t) {
  NodeList flat;
  flat.reserve(t.size());
  switch (t.dtype()) {
    case DType::float64:
      for (double d : t.f64_data()) flat.push_back(detail::encode_f64_element(d));
      break;
    case DType::int64:
      for (std::int64_t i : t.i64_data()) flat.push_back(Node::integer(i));
      break;
    case DType::bool_:
      for (unsigned char b : t.bool_data()) flat.push_back(Node::boolean(b != 0));
      break;
  }
  NodeList shape;
  shape.reserve(t.shape().size());
  for (std::int64_t d : t.shape()) shape.push_back(Node::integer(d));

  NodeMap m;
  m.set(std::string(kNdArrayListKey), Node::list(std::move(flat)));
  m.set(std::string(kNdArrayDTypeKey), Node::str(dtype_name(t.dtype())));
  m.set(std::string(kNdArrayShapeKey), Node::list(std::move(shape)));
  m.set(std::string(kDataStructureKey), Node::str(kNdArrayTag));
  return Node::map(std::move(m));
}

inline Tensor decode_tensor(const Node& node) {
  const NodeMap& m = node.as_map();
  const Node& tag = m.at(std::string(kDataStructureKey));
  if (!tag.is_string() || tag.as_string() != kNdArrayTag)
    raise(Errc::unknown_type_tag, "node is not tagged as " + std::string(kNdArrayTag));
  DType dtype = dtype_from_name(m.at(std::string(kNdArrayDTypeKey)).as_string());

  std::vector<std::int64_t> shape;
  for (const Node& d : m.at(std::string(kNdArrayShapeKey)).as_list()) {
    if (!d.is_int() || d.as_int() < 0)
      raise(Errc::malformed_node, "tensor shape entries must be non-negative integers");
    shape.push_back(d.as_int());
  }

  const NodeList& flat = m.at(std::string(kNdArrayListKey)).as_list();
  std::size_t expected = 1;
  for (std::int64_t d : shape) expected *= static_cast<std::size_t>(d);
  if (flat.size() != expected)
    raise(Errc::shape_mismatch, "tensor list has " + std::to_string(flat.size()) +
                                    " elements, shape wants " + std::to_string(expected));

  switch (dtype) {
    case DType::float64: {
      Tensor::F64Buf data;
      data.reserve(flat.size());
      for (const Node& n : flat) data.push_back(detail::decode_f64_element(n));
      return Tensor::f64(std::move(data), std::move(shape));
    }
    case DType::int64: {
      Tensor::I64Buf data;
      data.reserve(flat.size());
      for (const Node& n : flat) data.push_back(n.as_int());
      return Tensor::i64(std::move(data), std::move(shape));
    }
    case DType::bool_: {
      Tensor::BoolBuf data;
      data.reserve(flat.size());
      for (const Node& n : flat) data.push_back(n.as_bool() ? 1 : 0);
      return Tensor::boolean(std::move(data), std::move(shape));
    }
  }
  raise(Errc::dtype_unknown, "unreachable dtype");
}

inline Node encode_scalar(const TypedScalar& s) {
  NodeMap m;
  switch (s.dtype()) {
    case DType::float64:
      m.set(std::string(kScalarValueKey), detail::encode_f64_element(s.as_f64()));
      break;
    case DType::int64:
      m.set(std::string(kScalarValueKey), Node::integer(s.as_i64()));
      break;
    case DType::bool_:
      m.set(std::string(kScalarValueKey), Node::boolean(s.as_bool()));
      break;
  }
  m.set(std::string(kScalarTypeKey), Node::str(s.type_tag()));
  return Node::map(std::move(m));
}

inline TypedScalar decode_scalar(const Node& node) {
  const NodeMap& m = node.as_map();
  DType dtype = dtype_from_scalar_tag(m.at(std::string(kScalarTypeKey)).as_string());
  const Node& v = m.at(std::string(kScalarValueKey));
  switch (dtype) {
    case DType::float64: return TypedScalar::f64(detail::decode_f64_element(v));
    case DType::int64: return TypedScalar::i64(v.as_int());
    case DType::bool_: return TypedScalar::boolean(v.as_bool());
  }
  raise(Errc::unknown_type_tag, "unreachable np-type");
}

// Canonical byte form for signing and hashing; see render_canonical.
inline std::string canonical_bytes(const Node& node) { return render_canonical(node); }

// Structure-tag probes used by the transporter chain for first-match
// dispatch. A map carrying the structure-tag key with an unrecognized value
// matches none of these and is rejected by the chain, never passed through.
inline bool has_structure_tag(const Node& n, std::string_view tag) {
  if (!n.is_map()) return false;
  const Node* t = n.as_map().find(std::string(kDataStructureKey));
  return t && t->is_string() && t->as_string() == tag;
}

inline bool is_tensor_node(const Node& n) { return has_structure_tag(n, kNdArrayTag); }

inline bool is_scalar_node(const Node& n) {
  return n.is_map() && n.as_map().contains(std::string(kScalarTypeKey));
}

}  // namespace milo
