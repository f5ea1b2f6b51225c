// Demo: host a model over loopback HTTP with compress-then-encrypt envelopes,
// call it remotely, retrain it in place, and watch tampering get rejected.

#include <cstdio>

#include "milo/milo.hpp"

int main() {
  using namespace milo;

  Dataset blobs = make_blobs(/*seed=*/7, /*n=*/60, /*p=*/2, /*k=*/2);
  GaussianNB nb = GaussianNB::fit(blobs);

  StreamConfig cfg;
  cfg.port = 0;  // pick any free port
  cfg.key = parse_key_hex("8899aabbccddeeff00112233445566778899aabbccddeeff0011223344556677");
  Server server(cfg, export_model(Model(nb)));
  server.start();
  std::printf("server on 127.0.0.1:%d (AEAD + gzip)\n", server.port());

  StreamConfig client_cfg = cfg;
  client_cfg.port = server.port();
  Client client(client_cfg);
  std::printf("health: %s\n", client.health().c_str());

  Tensor local = nb.predict(blobs.X());
  Tensor remote = client.predict(blobs.X());
  std::printf("remote == local predictions: %s\n", local == remote ? "yes" : "no");

  // Retrain the hosted model through the allow-listed `fit` call.
  Node ack = client.fit(blobs.X(), blobs.y());
  std::printf("fit ack: %s\n", render_canonical(ack).c_str());

  // A client with the wrong key is turned away before any payload is parsed.
  StreamConfig wrong = client_cfg;
  wrong.key = parse_key_hex("0000000000000000000000000000000000000000000000000000000000000000");
  try {
    Client(wrong).predict(blobs.X());
    std::printf("wrong key: accepted (BUG)\n");
  } catch (const Error& e) {
    std::printf("wrong key: rejected (%s)\n", std::string(errc_name(e.code())).c_str());
  }

  // Bit-flipped ciphertext fails authentication before decompression/parsing.
  SealedEnvelope env = seal_payload(detail::str_bytes("{\"X\": 1}"), client_cfg);
  env.payload[0] ^= 0x01;
  try {
    open_payload(env, client_cfg);
    std::printf("tampered envelope: accepted (BUG)\n");
  } catch (const Error& e) {
    std::printf("tampered envelope: rejected (%s)\n", std::string(errc_name(e.code())).c_str());
  }

  server.stop();
  return 0;
}
