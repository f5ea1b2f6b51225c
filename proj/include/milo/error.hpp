#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace milo {

// Closed set of failure codes. Every exception the library throws carries one
// of these; callers and tests dispatch on the code, not the message text.
enum class Errc {
  // document tree / json
  parse_failure,
  missing_key,
  dtype_unknown,
  shape_mismatch,
  unknown_type_tag,
  malformed_node,
  // transporter chains
  unknown_category,
  unsupported_structure,
  // models
  not_fitted,
  dimension_mismatch,
  empty_dataset,
  not_binary,
  too_few_samples,
  empty_class,
  feature_count_mismatch,
  unknown_model_type,
  missing_field,
  invariant_violation,
  invalid_args,
  // documents / files
  io_failure,
  missing_envelope_key,
  invalid_key,
  malformed_envelope,
  // streaming
  payload_too_large,
  authentication_failure,
  decompression_failure,
  unsupported_version,
  bind_failure,
  model_load_failure,
  transport_failure,
  unknown_attribute,
  remote_error,
  validation_rejected,
  no_hosted_model,
  // metrics / csv
  length_mismatch,
  constant_target,
};

constexpr std::string_view errc_name(Errc c) {
  switch (c) {
    case Errc::parse_failure: return "parse_failure";
    case Errc::missing_key: return "missing_key";
    case Errc::dtype_unknown: return "dtype_unknown";
    case Errc::shape_mismatch: return "shape_mismatch";
    case Errc::unknown_type_tag: return "unknown_type_tag";
    case Errc::malformed_node: return "malformed_node";
    case Errc::unknown_category: return "unknown_category";
    case Errc::unsupported_structure: return "unsupported_structure";
    case Errc::not_fitted: return "not_fitted";
    case Errc::dimension_mismatch: return "dimension_mismatch";
    case Errc::empty_dataset: return "empty_dataset";
    case Errc::not_binary: return "not_binary";
    case Errc::too_few_samples: return "too_few_samples";
    case Errc::empty_class: return "empty_class";
    case Errc::feature_count_mismatch: return "feature_count_mismatch";
    case Errc::unknown_model_type: return "unknown_model_type";
    case Errc::missing_field: return "missing_field";
    case Errc::invariant_violation: return "invariant_violation";
    case Errc::invalid_args: return "invalid_args";
    case Errc::io_failure: return "io_failure";
    case Errc::missing_envelope_key: return "missing_envelope_key";
    case Errc::invalid_key: return "invalid_key";
    case Errc::malformed_envelope: return "malformed_envelope";
    case Errc::payload_too_large: return "payload_too_large";
    case Errc::authentication_failure: return "authentication_failure";
    case Errc::decompression_failure: return "decompression_failure";
    case Errc::unsupported_version: return "unsupported_version";
    case Errc::bind_failure: return "bind_failure";
    case Errc::model_load_failure: return "model_load_failure";
    case Errc::transport_failure: return "transport_failure";
    case Errc::unknown_attribute: return "unknown_attribute";
    case Errc::remote_error: return "remote_error";
    case Errc::validation_rejected: return "validation_rejected";
    case Errc::no_hosted_model: return "no_hosted_model";
    case Errc::length_mismatch: return "length_mismatch";
    case Errc::constant_target: return "constant_target";
  }
  return "unknown_error";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace milo
