#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "milo/error.hpp"

namespace milo {

// Insertion-ordered string-keyed map. Key order is part of the on-disk
// format, and documents are small, so lookups are linear scans.
template <class V>
class OrderedDict {
 public:
  using Entry = std::pair<std::string, V>;
  using const_iterator = typename std::vector<Entry>::const_iterator;
  using iterator = typename std::vector<Entry>::iterator;

  OrderedDict() = default;
  OrderedDict(std::initializer_list<Entry> init) {
    for (auto& e : init) set(e.first, e.second);
  }

  const V* find(std::string_view key) const {
    for (const auto& [k, v] : entries_)
      if (k == key) return &v;
    return nullptr;
  }

  V* find(std::string_view key) {
    for (auto& [k, v] : entries_)
      if (k == key) return &v;
    return nullptr;
  }

  bool contains(std::string_view key) const { return find(key) != nullptr; }

  const V& at(std::string_view key) const {
    if (const V* v = find(key)) return *v;
    raise(Errc::missing_key, "key '" + std::string(key) + "' not found");
  }

  // Replaces in place if the key exists, otherwise appends.
  void set(std::string_view key, V value) {
    if (V* v = find(key)) {
      *v = std::move(value);
      return;
    }
    entries_.emplace_back(std::string(key), std::move(value));
  }

  bool erase(std::string_view key) {
    for (auto it = entries_.begin(); it != entries_.end(); ++it) {
      if (it->first == key) {
        entries_.erase(it);
        return true;
      }
    }
    return false;
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }
  iterator begin() { return entries_.begin(); }
  iterator end() { return entries_.end(); }

  const std::vector<Entry>& entries() const { return entries_; }

  bool operator==(const OrderedDict& other) const { return entries_ == other.entries_; }

 private:
  std::vector<Entry> entries_;
};

}  // namespace milo
