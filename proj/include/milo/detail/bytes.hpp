#pragma once

#include <sodium.h>

#include <string>
#include <vector>

#include "milo/error.hpp"

namespace milo {

using Bytes = std::vector<unsigned char>;

namespace detail {

inline void init_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) raise(Errc::invalid_key, "crypto library failed to initialize");
}

inline std::string to_hex(const Bytes& data) {
  std::string out(data.size() * 2 + 1, '\0');
  sodium_bin2hex(out.data(), out.size(), data.data(), data.size());
  out.resize(data.size() * 2);
  return out;
}

inline Bytes from_hex(const std::string& hex) {
  Bytes out(hex.size() / 2 + 1);
  std::size_t written = 0;
  if (sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr, &written,
                     nullptr) != 0)
    raise(Errc::invalid_key, "invalid hex string");
  out.resize(written);
  return out;
}

inline std::string to_base64(const Bytes& data) {
  const std::size_t cap = sodium_base64_encoded_len(data.size(), sodium_base64_VARIANT_ORIGINAL);
  std::string out(cap, '\0');
  sodium_bin2base64(out.data(), out.size(), data.data(), data.size(),
                    sodium_base64_VARIANT_ORIGINAL);
  out.resize(std::string::traits_type::length(out.data()));
  return out;
}

inline Bytes from_base64(const std::string& text) {
  Bytes out(text.size());
  std::size_t written = 0;
  if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &written,
                        nullptr, sodium_base64_VARIANT_ORIGINAL) != 0)
    raise(Errc::malformed_envelope, "invalid base64 payload");
  out.resize(written);
  return out;
}

inline std::string sha256_hex(const Bytes& data) {
  Bytes digest(crypto_hash_sha256_BYTES);
  crypto_hash_sha256(digest.data(), data.data(), data.size());
  return to_hex(digest);
}

inline Bytes str_bytes(const std::string& s) { return Bytes(s.begin(), s.end()); }

inline std::string bytes_str(const Bytes& b) { return std::string(b.begin(), b.end()); }

}  // namespace detail
}  // namespace milo
