#include "support/helpers.hpp"

using namespace milo;

namespace {

Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

StreamConfig plain_config() {
  StreamConfig cfg;
  cfg.key.reset();
  cfg.compression = false;
  return cfg;
}

StreamConfig keyed_config() {
  StreamConfig cfg;
  cfg.key = parse_key_hex(std::string(64, 'a'));
  cfg.compression = true;
  return cfg;
}

}  // namespace

TEST_CASE("seal/open round-trips across the whole configuration matrix") {
  const Bytes body = to_bytes("{\"X\": [[3.0, 5.0]]}");
  for (bool compress : {false, true}) {
    for (bool encrypt : {false, true}) {
      StreamConfig cfg;
      cfg.compression = compress;
      if (encrypt)
        cfg.key = parse_key_hex(std::string(64, '7'));
      else
        cfg.key.reset();

      const SealedEnvelope env = seal_payload(body, cfg);
      CHECK(env.version == kStreamProtocolVersion);
      CHECK(env.compression == (compress ? Compression::gzip : Compression::none));
      CHECK(env.encryption == (encrypt ? Encryption::aead : Encryption::none));
      CHECK(env.nonce.size() == (encrypt ? 12u : 0u));

      // Through the JSON wire frame and back.
      const SealedEnvelope wire = parse_envelope(render_envelope(env));
      CHECK(open_payload(wire, cfg) == body);

      if (encrypt) CHECK(env.payload != body);  // ciphertext, not plaintext
    }
  }
}

TEST_CASE("random bodies survive 1000 seal/open round-trips") {
  std::mt19937_64 rng(404);
  const StreamConfig cfg = keyed_config();
  for (int i = 0; i < 1000; ++i) {
    const std::size_t len = rng() % 300;
    Bytes body(len);
    for (unsigned char& b : body) b = static_cast<unsigned char>(rng());
    CHECK(open_payload(parse_envelope(render_envelope(seal_payload(body, cfg))), cfg) == body);
  }
}

TEST_CASE("compression shrinks repetitive payloads") {
  StreamConfig cfg = plain_config();
  cfg.compression = true;
  Bytes body;
  for (int i = 0; i < 10 * 1024; ++i) body.push_back("abcd"[i % 4]);
  const SealedEnvelope env = seal_payload(body, cfg);
  CHECK(env.payload.size() < body.size() / 10);
  CHECK(open_payload(env, cfg) == body);
}

TEST_CASE("every single-byte corruption of the ciphertext is rejected") {
  const StreamConfig cfg = keyed_config();
  const Bytes body = to_bytes("sealed");
  const SealedEnvelope env = seal_payload(body, cfg);
  for (std::size_t i = 0; i < env.payload.size(); ++i) {
    SealedEnvelope corrupt = env;
    corrupt.payload[i] ^= 0x01;
    REQUIRE_ERRC(open_payload(corrupt, cfg), Errc::authentication_failure);
  }
}

TEST_CASE("nonce corruption is an authentication failure too") {
  const StreamConfig cfg = keyed_config();
  SealedEnvelope env = seal_payload(to_bytes("x"), cfg);
  env.nonce[0] ^= 0xff;
  REQUIRE_ERRC(open_payload(env, cfg), Errc::authentication_failure);
  env.nonce.resize(4);
  REQUIRE_ERRC(open_payload(env, cfg), Errc::authentication_failure);
}

TEST_CASE("the associated data binds the compression tag") {
  // Flip the claimed compression without touching the ciphertext: the AEAD
  // must notice, because the tag byte is authenticated as associated data.
  const StreamConfig cfg = keyed_config();
  SealedEnvelope env = seal_payload(to_bytes("bound"), cfg);
  REQUIRE(env.compression == Compression::gzip);
  env.compression = Compression::none;
  REQUIRE_ERRC(open_payload(env, cfg), Errc::authentication_failure);
}

TEST_CASE("wrong key and downgrade attempts are authentication failures") {
  const StreamConfig sender = keyed_config();
  const SealedEnvelope sealed = seal_payload(to_bytes("secret"), sender);

  StreamConfig wrong = sender;
  wrong.key = parse_key_hex(std::string(64, 'b'));
  REQUIRE_ERRC(open_payload(sealed, wrong), Errc::authentication_failure);

  // A keyed receiver refuses plaintext instead of downgrading.
  StreamConfig plaintext_sender = sender;
  plaintext_sender.key.reset();
  const SealedEnvelope plain = seal_payload(to_bytes("hello"), plaintext_sender);
  REQUIRE_ERRC(open_payload(plain, sender), Errc::authentication_failure);

  // And a keyless receiver cannot open ciphertext.
  StreamConfig keyless = sender;
  keyless.key.reset();
  REQUIRE_ERRC(open_payload(sealed, keyless), Errc::authentication_failure);
}

TEST_CASE("nonces never repeat across seals") {
  const StreamConfig cfg = keyed_config();
  std::vector<Bytes> nonces;
  for (int i = 0; i < 200; ++i) nonces.push_back(seal_payload(to_bytes("n"), cfg).nonce);
  std::sort(nonces.begin(), nonces.end());
  CHECK(std::adjacent_find(nonces.begin(), nonces.end()) == nonces.end());
}

TEST_CASE("payload size limits hold on both sides") {
  StreamConfig cfg = plain_config();
  cfg.max_payload_bytes = 64;
  const Bytes big(65, 'x');
  REQUIRE_ERRC(seal_payload(big, cfg), Errc::payload_too_large);

  // A gzip bomb: tiny ciphertext, huge plaintext. The receiver must stop at
  // its limit while inflating, not after.
  StreamConfig zcfg = plain_config();
  zcfg.compression = true;
  const Bytes zeros(1 << 20, 0);
  const SealedEnvelope bomb = seal_payload(zeros, zcfg);
  CHECK(bomb.payload.size() < 4096);
  StreamConfig small = zcfg;
  small.max_payload_bytes = 1024;
  REQUIRE_ERRC(open_payload(bomb, small), Errc::payload_too_large);
}

TEST_CASE("corrupt gzip data is a decompression failure") {
  StreamConfig cfg = plain_config();
  cfg.compression = true;
  SealedEnvelope env = seal_payload(to_bytes("squeeze me"), cfg);
  env.payload[env.payload.size() / 2] ^= 0x5a;
  try {
    (void)open_payload(env, cfg);
    // Some flips only touch the gzip CRC trailer; zlib reports those too, but
    // any exception must be one of the two documented kinds.
    FAIL("expected a decompression failure");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::decompression_failure);
  }
}

TEST_CASE("unsupported wire versions are refused before any processing") {
  const StreamConfig cfg = plain_config();
  SealedEnvelope env = seal_payload(to_bytes("v"), cfg);
  env.version = 2;
  REQUIRE_ERRC(open_payload(env, cfg), Errc::unsupported_version);
}

TEST_CASE("wire frames are strict about their key set") {
  const StreamConfig cfg = keyed_config();
  const Node good = envelope_node(seal_payload(to_bytes("k"), cfg));

  NodeMap missing = good.as_map();
  missing.erase("payload");
  REQUIRE_ERRC(envelope_from_node(Node::map(std::move(missing))), Errc::malformed_envelope);

  NodeMap unencrypted = good.as_map();
  unencrypted.set("encryption", Node::str("none"));
  // Still carries a nonce: contradictory frame.
  REQUIRE_ERRC(envelope_from_node(Node::map(std::move(unencrypted))), Errc::malformed_envelope);

  NodeMap bad_tag = good.as_map();
  bad_tag.set("compression", Node::str("zstd"));
  REQUIRE_ERRC(envelope_from_node(Node::map(std::move(bad_tag))), Errc::malformed_envelope);

  REQUIRE_ERRC(parse_envelope("not json at all"), Errc::malformed_envelope);
  REQUIRE_ERRC(parse_envelope("[1, 2, 3]"), Errc::malformed_envelope);
}

TEST_CASE("stream keys parse from hex strictly") {
  const StreamKey key = parse_key_hex(std::string(64, 'f'));
  CHECK(key.size() == 32);
  for (unsigned char b : key) CHECK(b == 0xff);
  REQUIRE_ERRC(parse_key_hex("deadbeef"), Errc::invalid_key);
  REQUIRE_ERRC(parse_key_hex(std::string(63, 'f') + "g"), Errc::invalid_key);
}
