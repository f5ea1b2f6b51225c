#pragma once

#include <string_view>

namespace milo {

// Format version carried in the "pymilo_version" envelope key. This is the
// version of the file layout itself, kept verbatim for interop.
inline constexpr std::string_view kFormatVersion = "1.1";

// This library's modeling-layer version, carried in the "sklearn_version"
// envelope key. The key name is an interop constant from the format; the
// value describes the library that produced the learned state.
inline constexpr std::string_view kModelingVersion = "0.1.0";

// Wire protocol version for the streaming envelopes.
inline constexpr int kStreamProtocolVersion = 1;

}  // namespace milo
