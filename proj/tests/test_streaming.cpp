#include "support/helpers.hpp"

#include <thread>

using namespace milo;

namespace {

StreamKey test_key() { return parse_key_hex(std::string(64, 'c')); }

StreamConfig server_config(bool keyed, bool compress = true) {
  StreamConfig cfg;
  cfg.host = "127.0.0.1";
  cfg.port = 0;  // pick any free port
  if (keyed) cfg.key = test_key();
  cfg.compression = compress;
  return cfg;
}

StreamConfig client_config(int port, std::optional<StreamKey> key, bool compress = true) {
  StreamConfig cfg;
  cfg.host = "127.0.0.1";
  cfg.port = port;
  cfg.key = std::move(key);
  cfg.compression = compress;
  return cfg;
}

}  // namespace

TEST_CASE("remote predictions are bitwise equal to local ones for every model type") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Model local = testutil::random_model(seed);
    Server server(server_config(true), export_model(local));
    server.start();
    Client client(client_config(server.port(), test_key()));

    const Tensor X = seed % 5 == 0 ? make_regression(seed + 60, 12, 3).X()
                                   : make_blobs(seed + 60, 12, 2, 2).X();
    CHECK(client.predict(X) == predict(local, X));
    server.stop();
  }
}

TEST_CASE("health endpoint answers in plaintext without a key") {
  Server server(server_config(true),
                export_model(Model(LinearRegression::fit(testutil::figure_dataset()))));
  server.start();
  // The health client needs no key at all.
  Client keyless(client_config(server.port(), std::nullopt));
  CHECK(keyless.health() == "ok 1");
  server.stop();
}

TEST_CASE("upload replaces the hosted model and download returns it verbatim") {
  const ModelDocument first =
      export_model(Model(LinearRegression::fit(testutil::figure_dataset())));
  Server server(server_config(true), first);
  server.start();
  Client client(client_config(server.port(), test_key()));

  CHECK(client.download() == first);

  const ModelDocument second = export_model(Model(GaussianNB::fit(make_blobs(3, 40, 2, 2))));
  client.upload(second);
  CHECK(client.download() == second);
  CHECK(server.hosted_document() == second);

  // The swapped-in model serves predictions immediately.
  const Tensor X = make_blobs(4, 6, 2, 2).X();
  const Model local = import_model(second);
  CHECK(client.predict(X) == predict(local, X));
  server.stop();
}

TEST_CASE("uploading an invalid document is rejected and changes nothing") {
  const ModelDocument good =
      export_model(Model(LinearRegression::fit(testutil::figure_dataset())));
  Server server(server_config(true), good);
  server.start();
  Client client(client_config(server.port(), test_key()));

  ModelDocument bad = good;
  NodeMap data = bad.data.as_map();
  data.erase("coef_");
  bad.data = Node::map(std::move(data));
  REQUIRE_ERRC(client.upload(bad), Errc::validation_rejected);
  CHECK(server.hosted_document() == good);
  server.stop();
}

TEST_CASE("call fit retrains in place, keeping hyperparameters") {
  const Dataset ds0(matrix_tensor({{0}, {1}, {2}, {3}}), vector_tensor({0, 0, 1, 1}));
  Server server(server_config(true),
                export_model(Model(LogisticRegression::fit(ds0, 250))));
  server.start();
  Client client(client_config(server.port(), test_key()));

  const Dataset ds1(matrix_tensor({{0}, {1}, {2}, {3}}), vector_tensor({1, 1, 0, 0}));
  const Node ack = client.fit(ds1.X(), ds1.y());
  CHECK(ack.as_map().at("ok").as_bool());
  CHECK(ack.as_map().at("model_type").as_string() == "LogisticRegression");
  CHECK(ack.as_map().at("n_samples").as_int() == 4);

  // The server refit with max_iter preserved; a local refit must agree.
  const Model local(LogisticRegression::fit(ds1, 250));
  CHECK(client.predict(ds1.X()) == predict(local, ds1.X()));
  CHECK(client.download().model_type == "LogisticRegression");
  server.stop();
}

TEST_CASE("only allow-listed attributes are callable") {
  Server server(server_config(true),
                export_model(Model(LinearRegression::fit(testutil::figure_dataset()))));
  server.start();
  Client client(client_config(server.port(), test_key()));

  REQUIRE_ERRC(client.call("extract_state", NodeMap{}), Errc::unknown_attribute);
  REQUIRE_ERRC(client.call("__init__", NodeMap{}), Errc::unknown_attribute);
  server.stop();
}

TEST_CASE("a client with the wrong key cannot get anything but a rejection") {
  Server server(server_config(true),
                export_model(Model(LinearRegression::fit(testutil::figure_dataset()))));
  server.start();

  Client wrong(client_config(server.port(), parse_key_hex(std::string(64, 'd'))));
  REQUIRE_ERRC(wrong.predict(matrix_tensor({{3, 5}})), Errc::authentication_failure);

  // A keyless client sends plaintext; the keyed server refuses rather than
  // downgrading, and the sealed error reply is unreadable without the key —
  // still an authentication failure from the client's point of view.
  Client keyless(client_config(server.port(), std::nullopt));
  REQUIRE_ERRC(keyless.predict(matrix_tensor({{3, 5}})), Errc::authentication_failure);
  server.stop();
}

TEST_CASE("plaintext streaming works when both sides agree on no key") {
  const Model local(LinearRegression::fit(testutil::figure_dataset()));
  Server server(server_config(false, /*compress=*/false), export_model(local));
  server.start();
  Client client(client_config(server.port(), std::nullopt, /*compress=*/false));
  const Tensor X = matrix_tensor({{3, 5}});
  CHECK(client.predict(X) == predict(local, X));
  server.stop();
}

TEST_CASE("compression settings may differ per direction") {
  // Each envelope declares its own compression; a non-compressing client can
  // talk to a compressing server and vice versa.
  const Model local(LinearRegression::fit(testutil::figure_dataset()));
  Server server(server_config(true, /*compress=*/true), export_model(local));
  server.start();
  Client client(client_config(server.port(), test_key(), /*compress=*/false));
  const Tensor X = matrix_tensor({{3, 5}});
  CHECK(client.predict(X) == predict(local, X));
  server.stop();
}

TEST_CASE("oversized requests bounce with payload_too_large") {
  StreamConfig cfg = server_config(true);
  cfg.max_payload_bytes = 2048;
  Server server(cfg, export_model(Model(LinearRegression::fit(testutil::figure_dataset()))));
  server.start();
  Client client(client_config(server.port(), test_key()));

  std::vector<std::vector<double>> rows(300, std::vector<double>{1.25, 2.25});
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i][0] += static_cast<double>(i) * 0.001;
  REQUIRE_ERRC(client.predict(matrix_tensor(rows)), Errc::payload_too_large);
  server.stop();
}

TEST_CASE("remote model errors carry their kind across the wire") {
  Server server(server_config(true),
                export_model(Model(LinearRegression::fit(testutil::figure_dataset()))));
  server.start();
  Client client(client_config(server.port(), test_key()));
  // Three features against a two-feature model.
  REQUIRE_ERRC(client.predict(matrix_tensor({{1, 2, 3}})), Errc::feature_count_mismatch);
  server.stop();
}

TEST_CASE("predictions stay coherent while the model is being replaced") {
  const ModelDocument doc_a =
      export_model(Model(LinearRegression::fit(testutil::figure_dataset())));
  // Same shape, different coefficients.
  const Dataset other(matrix_tensor({{1, 1}, {1, 2}, {2, 2}, {2, 3}}),
                      vector_tensor({2, 3, 5, 6}));
  const ModelDocument doc_b = export_model(Model(LinearRegression::fit(other)));

  const Tensor X = matrix_tensor({{3, 5}});
  const Model model_a = import_model(doc_a);
  const Model model_b = import_model(doc_b);
  const double pred_a = predict(model_a, X).f64_data()[0];
  const double pred_b = predict(model_b, X).f64_data()[0];

  Server server(server_config(true), doc_a);
  server.start();
  const int port = server.port();

  std::atomic<bool> go{true};
  std::atomic<int> bad{0};
  std::vector<std::thread> readers;
  for (int t = 0; t < 4; ++t) {
    readers.emplace_back([&, port] {
      Client client(client_config(port, test_key()));
      while (go.load()) {
        try {
          const double y = client.predict(X).f64_data()[0];
          if (y != pred_a && y != pred_b) bad.fetch_add(1);
        } catch (const Error&) {
          bad.fetch_add(1);
        }
      }
    });
  }

  Client writer(client_config(port, test_key()));
  for (int i = 0; i < 10; ++i) {
    writer.upload(i % 2 == 0 ? doc_b : doc_a);
  }
  go.store(false);
  for (std::thread& t : readers) t.join();
  CHECK(bad.load() == 0);
  server.stop();
}

TEST_CASE("from_file wraps missing or broken model files") {
  REQUIRE_ERRC(Server::from_file(server_config(false), "/nonexistent/model.json"),
               Errc::model_load_failure);
  testutil::TempDir dir;
  write_file(dir.file("broken.json"), "{\"data\": 1}");
  REQUIRE_ERRC(Server::from_file(server_config(false), dir.file("broken.json")),
               Errc::model_load_failure);
}

TEST_CASE("a server refuses to host an invalid document at construction") {
  ModelDocument doc = export_model(Model(LinearRegression::fit(testutil::figure_dataset())));
  doc.model_type = "Unknown";
  REQUIRE_ERRC(Server(server_config(false), doc), Errc::validation_rejected);
}
