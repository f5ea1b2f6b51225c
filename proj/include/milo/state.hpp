#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "milo/error.hpp"
#include "milo/ordered_dict.hpp"
#include "milo/tensor.hpp"

namespace milo {

// Flat-array form of a fitted CART tree: five parallel arrays indexed by node
// id. Leaves carry children == -1 and feature == -2 / threshold == -2.0;
// value holds per-class sample counts for every node.
struct TreeNodes {
  std::vector<std::int64_t> children_left;
  std::vector<std::int64_t> children_right;
  std::vector<std::int64_t> feature;
  std::vector<double> threshold;
  std::vector<std::vector<double>> value;

  std::size_t node_count() const { return children_left.size(); }

  bool operator==(const TreeNodes&) const = default;
};

// Class labels plus their positional index. The index is redundant with the
// label order, which is exactly why it is carried: a hand-edited file with an
// inconsistent index is detectable instead of silently misclassifying.
class LabelIndex {
 public:
  LabelIndex() = default;

  explicit LabelIndex(std::vector<std::int64_t> labels) : labels_(std::move(labels)) {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      for (std::size_t j = i + 1; j < labels_.size(); ++j)
        if (labels_[i] == labels_[j])
          raise(Errc::invariant_violation, "duplicate class label " + std::to_string(labels_[i]));
  }

  const std::vector<std::int64_t>& labels() const { return labels_; }
  std::size_t size() const { return labels_.size(); }

  std::int64_t label_at(std::size_t pos) const {
    if (pos >= labels_.size())
      raise(Errc::invariant_violation, "class position out of range");
    return labels_[pos];
  }

  std::size_t position_of(std::int64_t label) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
      if (labels_[i] == label) return i;
    raise(Errc::invariant_violation, "label " + std::to_string(label) + " not in class set");
  }

  bool operator==(const LabelIndex&) const = default;

 private:
  std::vector<std::int64_t> labels_;
};

class StateValue;
using StateList = std::vector<StateValue>;
using StateMap = OrderedDict<StateValue>;

enum class StateKind {
  null_,
  boolean,
  integer,
  real,
  string,
  tensor,
  scalar,
  tree_nodes,
  label_index,
  list,
  map
};

constexpr std::string_view state_kind_name(StateKind k) {
  switch (k) {
    case StateKind::null_: return "null";
    case StateKind::boolean: return "bool";
    case StateKind::integer: return "int";
    case StateKind::real: return "float";
    case StateKind::string: return "string";
    case StateKind::tensor: return "tensor";
    case StateKind::scalar: return "typed-scalar";
    case StateKind::tree_nodes: return "tree-nodes";
    case StateKind::label_index: return "label-index";
    case StateKind::list: return "list";
    case StateKind::map: return "map";
  }
  return "?";
}

// One field value in a model-state map: the closed universe the transporter
// chains operate over.
class StateValue {
 public:
  StateValue() : v_(nullptr) {}

  static StateValue null() { return StateValue(); }
  static StateValue boolean(bool b) { return StateValue(Value(b)); }
  static StateValue integer(std::int64_t i) { return StateValue(Value(i)); }
  static StateValue real(double d) { return StateValue(Value(d)); }
  static StateValue str(std::string s) { return StateValue(Value(std::move(s))); }
  static StateValue str(std::string_view s) { return str(std::string(s)); }
  static StateValue str(const char* s) { return str(std::string(s)); }
  static StateValue tensor(Tensor t) { return StateValue(Value(std::move(t))); }
  static StateValue scalar(TypedScalar s) { return StateValue(Value(std::move(s))); }
  static StateValue tree(TreeNodes t) { return StateValue(Value(std::move(t))); }
  static StateValue labels(LabelIndex l) { return StateValue(Value(std::move(l))); }
  static StateValue list(StateList items) { return StateValue(Value(std::move(items))); }
  static StateValue map(StateMap entries) { return StateValue(Value(std::move(entries))); }

  StateKind kind() const { return static_cast<StateKind>(v_.index()); }

  bool is_null() const { return kind() == StateKind::null_; }

  bool as_bool() const { return get<bool>(StateKind::boolean); }
  std::int64_t as_int() const { return get<std::int64_t>(StateKind::integer); }
  double as_real() const { return get<double>(StateKind::real); }
  const std::string& as_string() const { return get<std::string>(StateKind::string); }
  const Tensor& as_tensor() const { return get<Tensor>(StateKind::tensor); }
  const TypedScalar& as_scalar() const { return get<TypedScalar>(StateKind::scalar); }
  const TreeNodes& as_tree() const { return get<TreeNodes>(StateKind::tree_nodes); }
  const LabelIndex& as_labels() const { return get<LabelIndex>(StateKind::label_index); }
  const StateList& as_list() const { return get<StateList>(StateKind::list); }
  const StateMap& as_map() const { return get<StateMap>(StateKind::map); }

  bool operator==(const StateValue& other) const {
    if (v_.index() != other.v_.index()) return false;
    if (kind() == StateKind::real)
      return detail::f64_bits_equal(as_real(), other.as_real());
    return v_ == other.v_;
  }

 private:
  using Value = std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, Tensor,
                             TypedScalar, TreeNodes, LabelIndex, StateList, StateMap>;

  explicit StateValue(Value v) : v_(std::move(v)) {}

  template <class T>
  const T& get(StateKind want) const {
    if (kind() != want)
      raise(Errc::malformed_node, "expected " + std::string(state_kind_name(want)) +
                                      " state value, got " +
                                      std::string(state_kind_name(kind())));
    return std::get<T>(v_);
  }

  Value v_;
};

}  // namespace milo
