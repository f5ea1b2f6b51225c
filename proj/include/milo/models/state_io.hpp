#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "milo/error.hpp"
#include "milo/state.hpp"

namespace milo::detail {

// Field readers shared by the restore paths. Missing keys are reported as
// MissingField with the field name, the error §restore callers promise.
inline const StateValue& require_field(const StateMap& state, std::string_view name) {
  if (const StateValue* v = state.find(name)) return *v;
  raise(Errc::missing_field, "missing field '" + std::string(name) + "'");
}

inline bool read_bool(const StateMap& state, std::string_view name) {
  return require_field(state, name).as_bool();
}

inline std::int64_t read_int(const StateMap& state, std::string_view name) {
  return require_field(state, name).as_int();
}

inline double read_real(const StateMap& state, std::string_view name) {
  // JSON writes 1.0 as "1" in canonical form, so an integer here is a float
  // that lost its decimal point — coerce, as tensor elements do.
  const StateValue& v = require_field(state, name);
  if (v.kind() == StateKind::integer) return static_cast<double>(v.as_int());
  return v.as_real();
}

inline const std::string& read_string(const StateMap& state, std::string_view name) {
  return require_field(state, name).as_string();
}

inline const Tensor& read_tensor(const StateMap& state, std::string_view name) {
  return require_field(state, name).as_tensor();
}

inline double read_f64_scalar(const StateMap& state, std::string_view name) {
  return require_field(state, name).as_scalar().as_f64();
}

inline std::vector<double> read_f64_vector(const StateMap& state, std::string_view name) {
  const Tensor& t = read_tensor(state, name);
  if (t.dtype() != DType::float64 || t.shape().size() != 1)
    raise(Errc::invariant_violation, "field '" + std::string(name) + "' must be a 1-d float64 tensor");
  return t.f64_data();
}

inline std::vector<std::int64_t> read_i64_vector(const StateMap& state, std::string_view name) {
  const Tensor& t = read_tensor(state, name);
  if (t.dtype() != DType::int64 || t.shape().size() != 1)
    raise(Errc::invariant_violation, "field '" + std::string(name) + "' must be a 1-d int64 tensor");
  return t.i64_data();
}

}  // namespace milo::detail
