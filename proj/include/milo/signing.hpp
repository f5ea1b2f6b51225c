#pragma once

#include <sodium.h>

#include <string>
#include <utility>

#include "milo/detail/bytes.hpp"
#include "milo/tensor.hpp"
#include "milo/transport.hpp"

namespace milo {

inline constexpr std::string_view kSignatureScheme = "ed25519";

// The signature and the transparent format answer two different questions.
// The signature says WHO published the document (and that no value changed
// since); the non-executable format is what makes even an unsigned document
// safe to open. Neither mechanism substitutes for the other.
struct SignedEnvelope {
  std::string scheme;
  std::string public_key_fingerprint;  // hex SHA-256 of the public key
  Bytes signature;
  ModelDocument document;
};

struct SigningKeypair {
  Bytes public_key;  // 32 bytes
  Bytes secret_key;  // 64 bytes
};

inline SigningKeypair generate_keypair() {
  detail::init_sodium();
  SigningKeypair kp;
  kp.public_key.resize(crypto_sign_PUBLICKEYBYTES);
  kp.secret_key.resize(crypto_sign_SECRETKEYBYTES);
  crypto_sign_keypair(kp.public_key.data(), kp.secret_key.data());
  return kp;
}

inline std::string key_fingerprint(const Bytes& public_key) {
  detail::init_sodium();
  return detail::sha256_hex(public_key);
}

// Signature is over the canonical bytes of the whole document tree, so
// re-indenting or reordering keys of the file does not break it, while any
// value change does.
inline SignedEnvelope sign_document(const ModelDocument& doc, const Bytes& secret_key) {
  detail::init_sodium();
  if (secret_key.size() != crypto_sign_SECRETKEYBYTES)
    raise(Errc::invalid_key, "secret key must be " + std::to_string(crypto_sign_SECRETKEYBYTES) +
                                 " bytes, got " + std::to_string(secret_key.size()));
  const std::string bytes = canonical_bytes(document_node(doc));
  SignedEnvelope env;
  env.scheme = std::string(kSignatureScheme);
  env.signature.resize(crypto_sign_BYTES);
  crypto_sign_detached(env.signature.data(), nullptr,
                       reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(),
                       secret_key.data());
  env.public_key_fingerprint =
      key_fingerprint(Bytes(secret_key.end() - crypto_sign_PUBLICKEYBYTES, secret_key.end()));
  env.document = doc;
  return env;
}

inline bool verify_document(const SignedEnvelope& env, const Bytes& public_key) {
  detail::init_sodium();
  if (env.scheme != kSignatureScheme)
    raise(Errc::malformed_envelope, "unknown signature scheme \"" + env.scheme + "\"");
  if (public_key.size() != crypto_sign_PUBLICKEYBYTES)
    raise(Errc::invalid_key, "public key must be " + std::to_string(crypto_sign_PUBLICKEYBYTES) +
                                 " bytes, got " + std::to_string(public_key.size()));
  if (env.signature.size() != crypto_sign_BYTES) return false;
  const std::string bytes = canonical_bytes(document_node(env.document));
  return crypto_sign_verify_detached(env.signature.data(),
                                     reinterpret_cast<const unsigned char*>(bytes.data()),
                                     bytes.size(), public_key.data()) == 0;
}

// Signed file layout: scheme, public_key_fingerprint (hex), signature
// (base64), document (embedded verbatim).
inline Node signed_envelope_node(const SignedEnvelope& env) {
  NodeMap m;
  m.set("scheme", Node::str(env.scheme));
  m.set("public_key_fingerprint", Node::str(env.public_key_fingerprint));
  m.set("signature", Node::str(detail::to_base64(env.signature)));
  m.set("document", document_node(env.document));
  return Node::map(std::move(m));
}

inline SignedEnvelope signed_envelope_from_node(const Node& node) {
  if (!node.is_map()) raise(Errc::malformed_envelope, "signed envelope must be a JSON object");
  const NodeMap& m = node.as_map();
  for (const char* key : {"scheme", "public_key_fingerprint", "signature", "document"})
    if (!m.contains(key))
      raise(Errc::malformed_envelope, "missing signed-envelope key \"" + std::string(key) + "\"");
  SignedEnvelope env;
  env.scheme = m.at("scheme").as_string();
  env.public_key_fingerprint = m.at("public_key_fingerprint").as_string();
  env.signature = detail::from_base64(m.at("signature").as_string());
  env.document = document_from_node(m.at("document"));
  return env;
}

inline void save_signed(const SignedEnvelope& env, const std::string& path) {
  write_file(path, render_pretty(signed_envelope_node(env)) + "\n");
}

inline SignedEnvelope load_signed(const std::string& path) {
  return signed_envelope_from_node(parse_json(read_file(path)));
}

// Key files hold one hex-encoded key per file.
inline void save_key(const Bytes& key, const std::string& path) {
  write_file(path, detail::to_hex(key) + "\n");
}

inline Bytes load_key(const std::string& path, std::size_t expected_len) {
  std::string text = read_file(path);
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' '))
    text.pop_back();
  const Bytes key = detail::from_hex(text);
  if (key.size() != expected_len)
    raise(Errc::invalid_key, "key file '" + path + "' holds " + std::to_string(key.size()) +
                                 " bytes, expected " + std::to_string(expected_len));
  return key;
}

}  // namespace milo
