#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "milo/error.hpp"
#include "milo/ordered_dict.hpp"

namespace milo {

class Node;
using NodeList = std::vector<Node>;
using NodeMap = OrderedDict<Node>;

enum class NodeKind { null_, boolean, integer, real, string, list, map };

constexpr std::string_view node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::null_: return "null";
    case NodeKind::boolean: return "bool";
    case NodeKind::integer: return "int";
    case NodeKind::real: return "float";
    case NodeKind::string: return "string";
    case NodeKind::list: return "list";
    case NodeKind::map: return "map";
  }
  return "?";
}

// The document tree. These data variants are the only things that ever reach
// disk or wire; a Node cannot name code, a callable, or an external resource,
// which is what makes exported files safe to open and hand-edit.
class Node {
 public:
  Node() : v_(nullptr) {}

  static Node null() { return Node(); }
  static Node boolean(bool b) { return Node(Value(b)); }
  static Node integer(std::int64_t i) { return Node(Value(i)); }
  static Node real(double d) { return Node(Value(d)); }
  static Node str(std::string s) { return Node(Value(std::move(s))); }
  static Node str(std::string_view s) { return str(std::string(s)); }
  static Node str(const char* s) { return str(std::string(s)); }
  static Node list(NodeList items = {}) { return Node(Value(std::move(items))); }
  static Node map(NodeMap entries = {}) { return Node(Value(std::move(entries))); }

  NodeKind kind() const { return static_cast<NodeKind>(v_.index()); }

  bool is_null() const { return kind() == NodeKind::null_; }
  bool is_bool() const { return kind() == NodeKind::boolean; }
  bool is_int() const { return kind() == NodeKind::integer; }
  bool is_real() const { return kind() == NodeKind::real; }
  bool is_string() const { return kind() == NodeKind::string; }
  bool is_list() const { return kind() == NodeKind::list; }
  bool is_map() const { return kind() == NodeKind::map; }

  bool as_bool() const { return get<bool>(NodeKind::boolean); }
  std::int64_t as_int() const { return get<std::int64_t>(NodeKind::integer); }
  double as_real() const { return get<double>(NodeKind::real); }
  const std::string& as_string() const { return get<std::string>(NodeKind::string); }
  const NodeList& as_list() const { return get<NodeList>(NodeKind::list); }
  const NodeMap& as_map() const { return get<NodeMap>(NodeKind::map); }
  NodeList& as_list() {
    return const_cast<NodeList&>(std::as_const(*this).as_list());
  }
  NodeMap& as_map() {
    return const_cast<NodeMap&>(std::as_const(*this).as_map());
  }

  // Numeric read that accepts either int or float nodes.
  double as_number() const {
    if (is_int()) return static_cast<double>(as_int());
    return as_real();
  }

  // Structural equality; floats compare bitwise so that 0.0 and -0.0 differ.
  bool operator==(const Node& other) const {
    if (kind() != other.kind()) return false;
    if (is_real())
      return std::bit_cast<std::uint64_t>(as_real()) ==
             std::bit_cast<std::uint64_t>(other.as_real());
    return v_ == other.v_;
  }

  // Preorder visit of every node in the tree.
  template <class F>
  void walk(F&& fn) const {
    fn(*this);
    if (is_list()) {
      for (const Node& n : as_list()) n.walk(fn);
    } else if (is_map()) {
      for (const auto& [k, n] : as_map()) n.walk(fn);
    }
  }

 private:
  using Value =
      std::variant<std::nullptr_t, bool, std::int64_t, double, std::string, NodeList, NodeMap>;

  explicit Node(Value v) : v_(std::move(v)) {}

  template <class T>
  const T& get(NodeKind want) const {
    if (kind() != want)
      raise(Errc::malformed_node, std::string("expected ") + std::string(node_kind_name(want)) +
                                      " node, got " + std::string(node_kind_name(kind())));
    return std::get<T>(v_);
  }

  Value v_;
};

}  // namespace milo
