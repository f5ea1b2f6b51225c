#pragma once

#include <sodium.h>
#include <zlib.h>

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>

#include "milo/detail/bytes.hpp"
#include "milo/error.hpp"
#include "milo/json.hpp"
#include "milo/node.hpp"
#include "milo/version.hpp"

namespace milo {

enum class Compression { none, gzip };
enum class Encryption { none, aead };

constexpr std::string_view compression_name(Compression c) {
  return c == Compression::gzip ? "gzip" : "none";
}

constexpr std::string_view encryption_name(Encryption e) {
  return e == Encryption::aead ? "aead" : "none";
}

inline Compression compression_from_name(std::string_view s) {
  if (s == "none") return Compression::none;
  if (s == "gzip") return Compression::gzip;
  raise(Errc::malformed_envelope, "unknown compression tag \"" + std::string(s) + "\"");
}

inline Encryption encryption_from_name(std::string_view s) {
  if (s == "none") return Encryption::none;
  if (s == "aead") return Encryption::aead;
  raise(Errc::malformed_envelope, "unknown encryption tag \"" + std::string(s) + "\"");
}

using StreamKey = std::array<unsigned char, crypto_aead_chacha20poly1305_ietf_KEYBYTES>;

// Shared configuration for both ends of the stream. AEAD is on exactly when a
// key is present; an end that holds a key refuses plaintext envelopes rather
// than silently downgrading.
struct StreamConfig {
  std::string host = "127.0.0.1";
  int port = 0;
  std::optional<StreamKey> key;
  bool compression = true;
  std::size_t max_payload_bytes = 16 * 1024 * 1024;
};

inline StreamKey parse_key_hex(const std::string& hex) {
  detail::init_sodium();
  const Bytes raw = detail::from_hex(hex);
  StreamKey key{};
  if (raw.size() != key.size())
    raise(Errc::invalid_key, "stream key must be " + std::to_string(key.size()) +
                                 " bytes of hex, got " + std::to_string(raw.size()));
  std::copy(raw.begin(), raw.end(), key.begin());
  return key;
}

// The wire frame: {version, compression, encryption, nonce?, payload}.
// Transform order is compress THEN encrypt on send, inverted on receive.
struct SealedEnvelope {
  int version = kStreamProtocolVersion;
  Compression compression = Compression::none;
  Encryption encryption = Encryption::none;
  Bytes nonce;  // 12 bytes, present iff encryption == aead
  Bytes payload;
};

namespace detail {

inline Bytes gzip_compress(const Bytes& input) {
  z_stream strm{};
  if (deflateInit2(&strm, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) !=
      Z_OK)
    raise(Errc::decompression_failure, "deflate init failed");
  Bytes out(deflateBound(&strm, static_cast<uLong>(input.size())));
  strm.next_in = const_cast<Bytef*>(input.data());
  strm.avail_in = static_cast<uInt>(input.size());
  strm.next_out = out.data();
  strm.avail_out = static_cast<uInt>(out.size());
  const int rc = deflate(&strm, Z_FINISH);
  deflateEnd(&strm);
  if (rc != Z_STREAM_END) raise(Errc::decompression_failure, "deflate failed");
  out.resize(out.size() - strm.avail_out);
  return out;
}

inline Bytes gzip_decompress(const Bytes& input, std::size_t max_bytes) {
  z_stream strm{};
  if (inflateInit2(&strm, 15 + 16) != Z_OK)
    raise(Errc::decompression_failure, "inflate init failed");
  Bytes out;
  Bytes chunk(64 * 1024);
  strm.next_in = const_cast<Bytef*>(input.data());
  strm.avail_in = static_cast<uInt>(input.size());
  int rc = Z_OK;
  do {
    strm.next_out = chunk.data();
    strm.avail_out = static_cast<uInt>(chunk.size());
    rc = inflate(&strm, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&strm);
      raise(Errc::decompression_failure, "corrupt gzip stream");
    }
    out.insert(out.end(), chunk.data(), chunk.data() + (chunk.size() - strm.avail_out));
    if (out.size() > max_bytes) {
      inflateEnd(&strm);
      raise(Errc::payload_too_large, "decompressed body exceeds the payload limit");
    }
  } while (rc != Z_STREAM_END);
  inflateEnd(&strm);
  return out;
}

// Associated data binds the frame headers to the ciphertext: protocol
// version byte plus compression tag byte.
inline std::array<unsigned char, 2> envelope_ad(int version, Compression compression) {
  return {static_cast<unsigned char>(version),
          static_cast<unsigned char>(compression == Compression::gzip ? 1 : 0)};
}

}  // namespace detail

inline SealedEnvelope seal_payload(const Bytes& body, const StreamConfig& cfg) {
  if (body.size() > cfg.max_payload_bytes)
    raise(Errc::payload_too_large, "body of " + std::to_string(body.size()) +
                                       " bytes exceeds limit of " +
                                       std::to_string(cfg.max_payload_bytes));
  SealedEnvelope env;
  Bytes bytes = body;
  if (cfg.compression) {
    bytes = detail::gzip_compress(bytes);
    env.compression = Compression::gzip;
  }
  if (cfg.key) {
    detail::init_sodium();
    env.encryption = Encryption::aead;
    env.nonce.resize(crypto_aead_chacha20poly1305_ietf_NPUBBYTES);
    randombytes_buf(env.nonce.data(), env.nonce.size());
    const auto ad = detail::envelope_ad(env.version, env.compression);
    Bytes cipher(bytes.size() + crypto_aead_chacha20poly1305_ietf_ABYTES);
    unsigned long long cipher_len = 0;
    crypto_aead_chacha20poly1305_ietf_encrypt(cipher.data(), &cipher_len, bytes.data(),
                                              bytes.size(), ad.data(), ad.size(), nullptr,
                                              env.nonce.data(), cfg.key->data());
    cipher.resize(static_cast<std::size_t>(cipher_len));
    env.payload = std::move(cipher);
  } else {
    env.payload = std::move(bytes);
  }
  return env;
}

// Authentication strictly precedes decompression: no attacker-controlled
// plaintext byte is interpreted before the AEAD tag checks out.
inline Bytes open_payload(const SealedEnvelope& env, const StreamConfig& cfg) {
  if (env.version != kStreamProtocolVersion)
    raise(Errc::unsupported_version,
          "unsupported wire protocol version " + std::to_string(env.version));
  Bytes bytes;
  if (env.encryption == Encryption::aead) {
    if (!cfg.key)
      raise(Errc::authentication_failure, "encrypted envelope received but no key is configured");
    detail::init_sodium();
    if (env.nonce.size() != crypto_aead_chacha20poly1305_ietf_NPUBBYTES)
      raise(Errc::authentication_failure, "bad nonce length");
    const auto ad = detail::envelope_ad(env.version, env.compression);
    bytes.resize(env.payload.size());
    unsigned long long plain_len = 0;
    if (crypto_aead_chacha20poly1305_ietf_decrypt(bytes.data(), &plain_len, nullptr,
                                                  env.payload.data(), env.payload.size(),
                                                  ad.data(), ad.size(), env.nonce.data(),
                                                  cfg.key->data()) != 0)
      raise(Errc::authentication_failure, "payload failed authentication");
    bytes.resize(static_cast<std::size_t>(plain_len));
  } else {
    if (cfg.key)
      raise(Errc::authentication_failure,
            "plaintext envelope rejected: this endpoint requires encryption");
    bytes = env.payload;
  }
  if (env.compression == Compression::gzip)
    bytes = detail::gzip_decompress(bytes, cfg.max_payload_bytes);
  if (bytes.size() > cfg.max_payload_bytes)
    raise(Errc::payload_too_large, "body exceeds the payload limit");
  return bytes;
}

inline Node envelope_node(const SealedEnvelope& env) {
  NodeMap m;
  m.set("version", Node::integer(env.version));
  m.set("compression", Node::str(compression_name(env.compression)));
  m.set("encryption", Node::str(encryption_name(env.encryption)));
  if (env.encryption == Encryption::aead)
    m.set("nonce", Node::str(detail::to_base64(env.nonce)));
  m.set("payload", Node::str(detail::to_base64(env.payload)));
  return Node::map(std::move(m));
}

inline SealedEnvelope envelope_from_node(const Node& node) {
  if (!node.is_map()) raise(Errc::malformed_envelope, "sealed envelope must be a JSON object");
  const NodeMap& m = node.as_map();
  for (const char* key : {"version", "compression", "encryption", "payload"})
    if (!m.contains(key))
      raise(Errc::malformed_envelope, "missing envelope key \"" + std::string(key) + "\"");
  SealedEnvelope env;
  if (!m.at("version").is_int())
    raise(Errc::malformed_envelope, "version must be an integer");
  env.version = static_cast<int>(m.at("version").as_int());
  env.compression = compression_from_name(m.at("compression").as_string());
  env.encryption = encryption_from_name(m.at("encryption").as_string());
  if (env.encryption == Encryption::aead) {
    if (!m.contains("nonce")) raise(Errc::malformed_envelope, "encrypted envelope lacks a nonce");
    env.nonce = detail::from_base64(m.at("nonce").as_string());
  } else if (m.contains("nonce")) {
    raise(Errc::malformed_envelope, "plaintext envelope carries a nonce");
  }
  env.payload = detail::from_base64(m.at("payload").as_string());
  return env;
}

inline std::string render_envelope(const SealedEnvelope& env) {
  return render_canonical(envelope_node(env));
}

inline SealedEnvelope parse_envelope(const std::string& text) {
  try {
    return envelope_from_node(parse_json(text));
  } catch (const Error& e) {
    if (e.code() == Errc::parse_failure)
      raise(Errc::malformed_envelope, "envelope is not valid JSON");
    throw;
  }
}

}  // namespace milo
