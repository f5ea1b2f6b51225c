#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "milo/error.hpp"
#include "milo/node.hpp"

namespace milo {

// Shortest decimal form that round-trips the exact double.
inline std::string format_double(double d) {
  if (!std::isfinite(d))
    raise(Errc::malformed_node, "non-finite float reached the JSON layer");
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), d);
  (void)ec;
  return std::string(buf, ptr);
}

// Same, but integral values keep a trailing ".0" so a float field stays
// visibly a float in the pretty output (5.0 rather than 5).
inline std::string format_double_pretty(double d) {
  std::string s = format_double(d);
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

namespace detail {

inline void append_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          static const char* hex = "0123456789abcdef";
          out += "\\u00";
          out += hex[c >> 4];
          out += hex[c & 0xf];
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

inline void render_pretty_rec(const Node& n, std::string& out, int depth) {
  const std::string pad(static_cast<std::size_t>(depth) * 2, ' ');
  const std::string pad_in(static_cast<std::size_t>(depth + 1) * 2, ' ');
  switch (n.kind()) {
    case NodeKind::null_: out += "null"; break;
    case NodeKind::boolean: out += n.as_bool() ? "true" : "false"; break;
    case NodeKind::integer: out += std::to_string(n.as_int()); break;
    case NodeKind::real: out += format_double_pretty(n.as_real()); break;
    case NodeKind::string: append_escaped(out, n.as_string()); break;
    case NodeKind::list: {
      const NodeList& items = n.as_list();
      if (items.empty()) { out += "[]"; break; }
      out += "[\n";
      for (std::size_t i = 0; i < items.size(); ++i) {
        out += pad_in;
        render_pretty_rec(items[i], out, depth + 1);
        if (i + 1 < items.size()) out += ',';
        out += '\n';
      }
      out += pad;
      out += ']';
      break;
    }
    case NodeKind::map: {
      const NodeMap& entries = n.as_map();
      if (entries.empty()) { out += "{}"; break; }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [k, v] : entries) {
        out += pad_in;
        append_escaped(out, k);
        out += ": ";
        render_pretty_rec(v, out, depth + 1);
        if (++i < entries.size()) out += ',';
        out += '\n';
      }
      out += pad;
      out += '}';
      break;
    }
  }
}

inline void render_canonical_rec(const Node& n, std::string& out) {
  switch (n.kind()) {
    case NodeKind::null_: out += "null"; break;
    case NodeKind::boolean: out += n.as_bool() ? "true" : "false"; break;
    case NodeKind::integer: out += std::to_string(n.as_int()); break;
    case NodeKind::real: out += format_double(n.as_real()); break;
    case NodeKind::string: append_escaped(out, n.as_string()); break;
    case NodeKind::list: {
      out += '[';
      const NodeList& items = n.as_list();
      for (std::size_t i = 0; i < items.size(); ++i) {
        if (i) out += ',';
        render_canonical_rec(items[i], out);
      }
      out += ']';
      break;
    }
    case NodeKind::map: {
      const NodeMap& entries = n.as_map();
      std::vector<const std::pair<std::string, Node>*> sorted;
      sorted.reserve(entries.size());
      for (const auto& e : entries) sorted.push_back(&e);
      std::sort(sorted.begin(), sorted.end(),
                [](const auto* a, const auto* b) { return a->first < b->first; });
      out += '{';
      for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (i) out += ',';
        append_escaped(out, sorted[i]->first);
        out += ':';
        render_canonical_rec(sorted[i]->second, out);
      }
      out += '}';
      break;
    }
  }
}

}  // namespace detail

// Human-facing rendering: two-space indent, insertion order preserved.
inline std::string render_pretty(const Node& n) {
  std::string out;
  detail::render_pretty_rec(n, out, 0);
  return out;
}

// Canonical bytes: compact separators, keys sorted bytewise. Two documents
// with equal trees always produce identical bytes, so hashes and signatures
// over this form are stable.
inline std::string render_canonical(const Node& n) {
  std::string out;
  detail::render_canonical_rec(n, out);
  return out;
}

namespace detail {

class JsonParser {
 public:
  explicit JsonParser(std::string_view text) : text_(text) {}

  Node run() {
    skip_ws();
    Node n = parse_value(0);
    skip_ws();
    if (pos_ != text_.size()) fail("trailing content after JSON value");
    return n;
  }

 private:
  static constexpr int kMaxDepth = 256;

  std::string_view text_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    raise(Errc::parse_failure, what + " at byte " + std::to_string(pos_));
  }

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char next() {
    if (done()) fail("unexpected end of input");
    return text_[pos_++];
  }

  void skip_ws() {
    while (!done()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') ++pos_;
      else break;
    }
  }

  void expect_literal(std::string_view lit) {
    if (text_.substr(pos_, lit.size()) != lit) fail("invalid literal");
    pos_ += lit.size();
  }

  Node parse_value(int depth) {
    if (depth > kMaxDepth) fail("nesting too deep");
    if (done()) fail("unexpected end of input");
    char c = peek();
    switch (c) {
      case '{': return parse_map(depth);
      case '[': return parse_list(depth);
      case '"': return Node::str(parse_string());
      case 't': expect_literal("true"); return Node::boolean(true);
      case 'f': expect_literal("false"); return Node::boolean(false);
      case 'n': expect_literal("null"); return Node::null();
      default:
        if (c == '-' || (c >= '0' && c <= '9')) return parse_number();
        fail("unexpected character");
    }
  }

  Node parse_map(int depth) {
    ++pos_;  // '{'
    NodeMap entries;
    skip_ws();
    if (!done() && peek() == '}') { ++pos_; return Node::map(std::move(entries)); }
    while (true) {
      skip_ws();
      if (done() || peek() != '"') fail("expected object key");
      std::string key = parse_string();
      if (entries.contains(key)) fail("duplicate key \"" + key + "\"");
      skip_ws();
      if (next() != ':') fail("expected ':'");
      skip_ws();
      entries.set(std::move(key), parse_value(depth + 1));
      skip_ws();
      char c = next();
      if (c == '}') break;
      if (c != ',') fail("expected ',' or '}'");
    }
    return Node::map(std::move(entries));
  }

  Node parse_list(int depth) {
    ++pos_;  // '['
    NodeList items;
    skip_ws();
    if (!done() && peek() == ']') { ++pos_; return Node::list(std::move(items)); }
    while (true) {
      skip_ws();
      items.push_back(parse_value(depth + 1));
      skip_ws();
      char c = next();
      if (c == ']') break;
      if (c != ',') fail("expected ',' or ']'");
    }
    return Node::list(std::move(items));
  }

  unsigned parse_hex4() {
    unsigned v = 0;
    for (int i = 0; i < 4; ++i) {
      char c = next();
      v <<= 4;
      if (c >= '0' && c <= '9') v |= static_cast<unsigned>(c - '0');
      else if (c >= 'a' && c <= 'f') v |= static_cast<unsigned>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v |= static_cast<unsigned>(c - 'A' + 10);
      else fail("invalid \\u escape");
    }
    return v;
  }

  static void append_utf8(std::string& out, unsigned cp) {
    if (cp < 0x80) {
      out += static_cast<char>(cp);
    } else if (cp < 0x800) {
      out += static_cast<char>(0xC0 | (cp >> 6));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
      out += static_cast<char>(0xE0 | (cp >> 12));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
      out += static_cast<char>(0xF0 | (cp >> 18));
      out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
      out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
      out += static_cast<char>(0x80 | (cp & 0x3F));
    }
  }

  std::string parse_string() {
    ++pos_;  // '"'
    std::string out;
    while (true) {
      char c = next();
      if (c == '"') return out;
      if (c == '\\') {
        char e = next();
        switch (e) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case '/': out += '/'; break;
          case 'b': out += '\b'; break;
          case 'f': out += '\f'; break;
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 't': out += '\t'; break;
          case 'u': {
            unsigned cp = parse_hex4();
            if (cp >= 0xD800 && cp <= 0xDBFF) {
              if (next() != '\\' || next() != 'u') fail("unpaired surrogate");
              unsigned lo = parse_hex4();
              if (lo < 0xDC00 || lo > 0xDFFF) fail("invalid low surrogate");
              cp = 0x10000 + ((cp - 0xD800) << 10) + (lo - 0xDC00);
            } else if (cp >= 0xDC00 && cp <= 0xDFFF) {
              fail("unpaired surrogate");
            }
            append_utf8(out, cp);
            break;
          }
          default: fail("invalid escape");
        }
      } else if (static_cast<unsigned char>(c) < 0x20) {
        fail("raw control character in string");
      } else {
        out += c;
      }
    }
  }

  Node parse_number() {
    const std::size_t start = pos_;
    if (!done() && peek() == '-') ++pos_;
    if (done()) fail("invalid number");
    // Integer part: single 0, or nonzero digit followed by digits.
    if (peek() == '0') {
      ++pos_;
    } else if (peek() >= '1' && peek() <= '9') {
      while (!done() && peek() >= '0' && peek() <= '9') ++pos_;
    } else {
      fail("invalid number");
    }
    bool is_float = false;
    if (!done() && peek() == '.') {
      is_float = true;
      ++pos_;
      if (done() || peek() < '0' || peek() > '9') fail("invalid number");
      while (!done() && peek() >= '0' && peek() <= '9') ++pos_;
    }
    if (!done() && (peek() == 'e' || peek() == 'E')) {
      is_float = true;
      ++pos_;
      if (!done() && (peek() == '+' || peek() == '-')) ++pos_;
      if (done() || peek() < '0' || peek() > '9') fail("invalid number");
      while (!done() && peek() >= '0' && peek() <= '9') ++pos_;
    }
    std::string_view tok = text_.substr(start, pos_ - start);
    if (!is_float) {
      std::int64_t i = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), i);
      if (ec == std::errc() && p == tok.data() + tok.size()) return Node::integer(i);
      // Out of int64 range: fall through and read it as a double.
    }
    double d = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), d);
    if (ec == std::errc::result_out_of_range) {
      // JSON allows magnitudes beyond double; clamp to the IEEE behaviour of
      // strtod (huge -> inf) but reject, since the format never emits these.
      fail("number out of range");
    }
    if (ec != std::errc() || p != tok.data() + tok.size()) fail("invalid number");
    return Node::real(d);
  }
};

}  // namespace detail

// Strict JSON parse. Rejects duplicate keys, raw control characters, invalid
// escapes, lone surrogates, trailing content, and nesting beyond 256 levels.
inline Node parse_json(std::string_view text) {
  return detail::JsonParser(text).run();
}

}  // namespace milo
