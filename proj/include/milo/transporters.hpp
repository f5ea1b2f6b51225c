#pragma once

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "milo/error.hpp"
#include "milo/node.hpp"
#include "milo/state.hpp"
#include "milo/tensor.hpp"

namespace milo {

// Structure tags for the non-ndarray composites. These are this format's own
// tags (the figure only shows the ndarray one); they live under the same
// "pymiloed-data-structure" key so every composite is self-describing.
inline constexpr std::string_view kTreeTag = "decision-tree";
inline constexpr std::string_view kLabelIndexTag = "label-index";
inline constexpr std::string_view kClassLabelsKey = "pymiloed-class-labels";
inline constexpr std::string_view kLabelIndexKey = "pymiloed-label-index";

enum class ModelCategory { LinearModel, DecisionTree, Clustering, NaiveBayes };

constexpr std::string_view category_name(ModelCategory c) {
  switch (c) {
    case ModelCategory::LinearModel: return "LinearModel";
    case ModelCategory::DecisionTree: return "DecisionTree";
    case ModelCategory::Clustering: return "Clustering";
    case ModelCategory::NaiveBayes: return "NaiveBayes";
  }
  return "?";
}

inline ModelCategory category_from_name(std::string_view s) {
  if (s == "LinearModel") return ModelCategory::LinearModel;
  if (s == "DecisionTree") return ModelCategory::DecisionTree;
  if (s == "Clustering") return ModelCategory::Clustering;
  if (s == "NaiveBayes") return ModelCategory::NaiveBayes;
  raise(Errc::unknown_category, "unknown model category \"" + std::string(s) + "\"");
}

class TransporterChain;

// One handler in the chain. can_handle/can_restore decide the claim,
// serialize/deserialize do the work; containers recurse through the chain
// they were called from so nesting reuses the same dispatch.
class Transporter {
 public:
  virtual ~Transporter() = default;
  virtual std::string_view name() const = 0;
  virtual bool can_handle(const StateValue& v) const = 0;
  virtual Node serialize(const StateValue& v, const TransporterChain& chain,
                         const std::string& path) const = 0;
  virtual bool can_restore(const Node& n) const = 0;
  virtual StateValue deserialize(const Node& n, const TransporterChain& chain,
                                 const std::string& path) const = 0;
};

class TransporterChain {
 public:
  TransporterChain(ModelCategory category,
                   std::vector<std::shared_ptr<const Transporter>> transporters)
      : category_(category), transporters_(std::move(transporters)) {}

  ModelCategory category() const { return category_; }
  std::size_t size() const { return transporters_.size(); }
  const Transporter& at(std::size_t i) const { return *transporters_[i]; }

  // First transporter whose can_handle fires wins; falling off the end is an
  // UnsupportedStructure error naming the offending path — never a silent drop.
  Node serialize_value(const StateValue& v, const std::string& path) const {
    for (const auto& t : transporters_)
      if (t->can_handle(v)) return t->serialize(v, *this, path);
    raise(Errc::unsupported_structure,
          "no transporter in the " + std::string(category_name(category_)) +
              " chain handles " + std::string(state_kind_name(v.kind())) + " at '" + path + "'");
  }

  StateValue restore_value(const Node& n, const std::string& path) const {
    for (const auto& t : transporters_)
      if (t->can_restore(n)) return t->deserialize(n, *this, path);
    raise(Errc::unsupported_structure,
          "no transporter in the " + std::string(category_name(category_)) +
              " chain restores the node at '" + path + "'");
  }

 private:
  ModelCategory category_;
  std::vector<std::shared_ptr<const Transporter>> transporters_;
};

// --- concrete transporters ---------------------------------------------------

class PrimitiveTransporter final : public Transporter {
 public:
  std::string_view name() const override { return "primitive"; }

  bool can_handle(const StateValue& v) const override {
    switch (v.kind()) {
      case StateKind::null_:
      case StateKind::boolean:
      case StateKind::integer:
      case StateKind::real:
      case StateKind::string: return true;
      default: return false;
    }
  }

  Node serialize(const StateValue& v, const TransporterChain&,
                 const std::string& path) const override {
    switch (v.kind()) {
      case StateKind::null_: return Node::null();
      case StateKind::boolean: return Node::boolean(v.as_bool());
      case StateKind::integer: return Node::integer(v.as_int());
      case StateKind::real:
        if (!std::isfinite(v.as_real()))
          raise(Errc::unsupported_structure,
                "non-finite plain float at '" + path + "' (only tensors and typed scalars carry sentinels)");
        return Node::real(v.as_real());
      case StateKind::string: return Node::str(v.as_string());
      default: raise(Errc::unsupported_structure, "primitive transporter misdispatched");
    }
  }

  bool can_restore(const Node& n) const override {
    switch (n.kind()) {
      case NodeKind::null_:
      case NodeKind::boolean:
      case NodeKind::integer:
      case NodeKind::real:
      case NodeKind::string: return true;
      default: return false;
    }
  }

  StateValue deserialize(const Node& n, const TransporterChain&,
                         const std::string&) const override {
    switch (n.kind()) {
      case NodeKind::null_: return StateValue::null();
      case NodeKind::boolean: return StateValue::boolean(n.as_bool());
      case NodeKind::integer: return StateValue::integer(n.as_int());
      case NodeKind::real: return StateValue::real(n.as_real());
      case NodeKind::string: return StateValue::str(n.as_string());
      default: raise(Errc::unsupported_structure, "primitive transporter misdispatched");
    }
  }
};

class ScalarTransporter final : public Transporter {
 public:
  std::string_view name() const override { return "scalar"; }

  bool can_handle(const StateValue& v) const override { return v.kind() == StateKind::scalar; }

  Node serialize(const StateValue& v, const TransporterChain&,
                 const std::string&) const override {
    return encode_scalar(v.as_scalar());
  }

  bool can_restore(const Node& n) const override { return is_scalar_node(n); }

  StateValue deserialize(const Node& n, const TransporterChain&,
                         const std::string&) const override {
    return StateValue::scalar(decode_scalar(n));
  }
};

class NdArrayTransporter final : public Transporter {
 public:
  std::string_view name() const override { return "ndarray"; }

  bool can_handle(const StateValue& v) const override { return v.kind() == StateKind::tensor; }

  Node serialize(const StateValue& v, const TransporterChain&,
                 const std::string&) const override {
    return encode_tensor(v.as_tensor());
  }

  bool can_restore(const Node& n) const override { return is_tensor_node(n); }

  StateValue deserialize(const Node& n, const TransporterChain&,
                         const std::string&) const override {
    return StateValue::tensor(decode_tensor(n));
  }
};

// Decision-tree node arrays, stored as five parallel tensors. Flat arrays
// diff cleanly and keep the node-id indexing explicit in the file.
class TreeTransporter final : public Transporter {
 public:
  std::string_view name() const override { return "tree"; }

  bool can_handle(const StateValue& v) const override {
    return v.kind() == StateKind::tree_nodes;
  }

  Node serialize(const StateValue& v, const TransporterChain&,
                 const std::string& path) const override {
    const TreeNodes& t = v.as_tree();
    const auto n = static_cast<std::int64_t>(t.node_count());
    if (t.children_right.size() != t.node_count() || t.feature.size() != t.node_count() ||
        t.threshold.size() != t.node_count() || t.value.size() != t.node_count())
      raise(Errc::invariant_violation, "tree arrays disagree on node count at '" + path + "'");
    const auto classes =
        t.value.empty() ? std::int64_t{0} : static_cast<std::int64_t>(t.value[0].size());
    std::vector<double> flat_value;
    flat_value.reserve(t.node_count() * static_cast<std::size_t>(classes));
    for (const auto& row : t.value) {
      if (static_cast<std::int64_t>(row.size()) != classes)
        raise(Errc::invariant_violation, "ragged value rows at '" + path + "'");
      flat_value.insert(flat_value.end(), row.begin(), row.end());
    }
    NodeMap m;
    m.set("children_left", encode_tensor(Tensor::i64(t.children_left, {n})));
    m.set("children_right", encode_tensor(Tensor::i64(t.children_right, {n})));
    m.set("feature", encode_tensor(Tensor::i64(t.feature, {n})));
    m.set("threshold", encode_tensor(Tensor::f64(t.threshold, {n})));
    m.set("value", encode_tensor(Tensor::f64(std::move(flat_value), {n, classes})));
    m.set(std::string(kDataStructureKey), Node::str(kTreeTag));
    return Node::map(std::move(m));
  }

  bool can_restore(const Node& n) const override { return has_structure_tag(n, kTreeTag); }

  StateValue deserialize(const Node& n, const TransporterChain&,
                         const std::string& path) const override {
    const NodeMap& m = n.as_map();
    Tensor left = decode_tensor(m.at("children_left"));
    Tensor right = decode_tensor(m.at("children_right"));
    Tensor feature = decode_tensor(m.at("feature"));
    Tensor threshold = decode_tensor(m.at("threshold"));
    Tensor value = decode_tensor(m.at("value"));
    const std::size_t count = left.size();
    if (right.size() != count || feature.size() != count || threshold.size() != count)
      raise(Errc::invariant_violation, "tree arrays disagree on node count at '" + path + "'");
    if (value.shape().size() != 2 || static_cast<std::size_t>(value.shape()[0]) != count)
      raise(Errc::invariant_violation, "tree value tensor must be [nodes, classes] at '" + path + "'");
    TreeNodes t;
    t.children_left = left.i64_data();
    t.children_right = right.i64_data();
    t.feature = feature.i64_data();
    t.threshold = threshold.f64_data();
    const auto classes = static_cast<std::size_t>(value.shape()[1]);
    t.value.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      const double* row = value.f64_data().data() + i * classes;
      t.value[i].assign(row, row + classes);
    }
    return StateValue::tree(std::move(t));
  }
};

// Class labels plus their redundant positional index; the index is checked
// against the labels on restore so inconsistent hand edits are caught here.
class LabelIndexTransporter final : public Transporter {
 public:
  std::string_view name() const override { return "label-index"; }

  bool can_handle(const StateValue& v) const override {
    return v.kind() == StateKind::label_index;
  }

  Node serialize(const StateValue& v, const TransporterChain&,
                 const std::string&) const override {
    const LabelIndex& li = v.as_labels();
    NodeList labels;
    labels.reserve(li.size());
    NodeMap index;
    for (std::size_t i = 0; i < li.size(); ++i) {
      labels.push_back(Node::integer(li.label_at(i)));
      index.set(std::to_string(li.label_at(i)), Node::integer(static_cast<std::int64_t>(i)));
    }
    NodeMap m;
    m.set(std::string(kClassLabelsKey), Node::list(std::move(labels)));
    m.set(std::string(kLabelIndexKey), Node::map(std::move(index)));
    m.set(std::string(kDataStructureKey), Node::str(kLabelIndexTag));
    return Node::map(std::move(m));
  }

  bool can_restore(const Node& n) const override { return has_structure_tag(n, kLabelIndexTag); }

  StateValue deserialize(const Node& n, const TransporterChain&,
                         const std::string& path) const override {
    const NodeMap& m = n.as_map();
    std::vector<std::int64_t> labels;
    for (const Node& l : m.at(std::string(kClassLabelsKey)).as_list())
      labels.push_back(l.as_int());
    const NodeMap& index = m.at(std::string(kLabelIndexKey)).as_map();
    if (index.size() != labels.size())
      raise(Errc::invariant_violation,
            "label index size disagrees with label list at '" + path + "'");
    LabelIndex li(std::move(labels));
    for (const auto& [key, pos] : index) {
      errno = 0;
      char* end = nullptr;
      const long long parsed = std::strtoll(key.c_str(), &end, 10);
      if (errno != 0 || end == key.c_str() || *end != '\0')
        raise(Errc::invariant_violation, "non-integer label key '" + key + "' at '" + path + "'");
      if (li.label_at(static_cast<std::size_t>(pos.as_int())) != parsed)
        raise(Errc::invariant_violation,
              "label index inconsistent with label order at '" + path + "'");
    }
    return StateValue::labels(std::move(li));
  }
};

// Generic lists and maps, recursing through the owning chain. Refuses any map
// carrying a structure tag or scalar type tag: those belong to specialized
// transporters, and an unrecognized tag must fail loudly rather than pass
// through as an anonymous container.
class ContainerTransporter final : public Transporter {
 public:
  std::string_view name() const override { return "container"; }

  bool can_handle(const StateValue& v) const override {
    return v.kind() == StateKind::list || v.kind() == StateKind::map;
  }

  Node serialize(const StateValue& v, const TransporterChain& chain,
                 const std::string& path) const override {
    if (v.kind() == StateKind::list) {
      NodeList out;
      const StateList& items = v.as_list();
      out.reserve(items.size());
      for (std::size_t i = 0; i < items.size(); ++i)
        out.push_back(chain.serialize_value(items[i], path + "[" + std::to_string(i) + "]"));
      return Node::list(std::move(out));
    }
    NodeMap out;
    for (const auto& [k, item] : v.as_map())
      out.set(k, chain.serialize_value(item, path.empty() ? k : path + "." + k));
    return Node::map(std::move(out));
  }

  bool can_restore(const Node& n) const override {
    if (n.is_list()) return true;
    if (!n.is_map()) return false;
    const NodeMap& m = n.as_map();
    return !m.contains(std::string(kDataStructureKey)) &&
           !m.contains(std::string(kScalarTypeKey));
  }

  StateValue deserialize(const Node& n, const TransporterChain& chain,
                         const std::string& path) const override {
    if (n.is_list()) {
      StateList out;
      const NodeList& items = n.as_list();
      out.reserve(items.size());
      for (std::size_t i = 0; i < items.size(); ++i)
        out.push_back(chain.restore_value(items[i], path + "[" + std::to_string(i) + "]"));
      return StateValue::list(std::move(out));
    }
    StateMap out;
    for (const auto& [k, item] : n.as_map())
      out.set(k, chain.restore_value(item, path.empty() ? k : path + "." + k));
    return StateValue::map(std::move(out));
  }
};

// --- chain registry ----------------------------------------------------------

inline TransporterChain build_chain(ModelCategory category) {
  static const auto primitive = std::make_shared<const PrimitiveTransporter>();
  static const auto scalar = std::make_shared<const ScalarTransporter>();
  static const auto ndarray = std::make_shared<const NdArrayTransporter>();
  static const auto tree = std::make_shared<const TreeTransporter>();
  static const auto label_index = std::make_shared<const LabelIndexTransporter>();
  static const auto container = std::make_shared<const ContainerTransporter>();

  switch (category) {
    case ModelCategory::LinearModel:
    case ModelCategory::Clustering:
      return TransporterChain(category, {primitive, scalar, ndarray, container});
    case ModelCategory::DecisionTree:
      return TransporterChain(category, {primitive, scalar, ndarray, tree, label_index, container});
    case ModelCategory::NaiveBayes:
      return TransporterChain(category, {primitive, scalar, ndarray, label_index, container});
  }
  raise(Errc::unknown_category, "unknown model category");
}

// Serialize a whole state map field by field, preserving field order.
inline Node chain_serialize(const TransporterChain& chain, const StateMap& state) {
  NodeMap out;
  for (const auto& [field, value] : state) out.set(field, chain.serialize_value(value, field));
  return Node::map(std::move(out));
}

inline StateMap chain_deserialize(const TransporterChain& chain, const Node& node) {
  if (!node.is_map())
    raise(Errc::malformed_node, "model data must be a JSON object");
  StateMap out;
  for (const auto& [field, value] : node.as_map())
    out.set(field, chain.restore_value(value, field));
  return out;
}

}  // namespace milo
