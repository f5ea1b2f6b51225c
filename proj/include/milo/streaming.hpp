#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>

#include <httplib.h>

#include "milo/envelope.hpp"
#include "milo/error.hpp"
#include "milo/models/dataset.hpp"
#include "milo/models/model.hpp"
#include "milo/transport.hpp"
#include "milo/version.hpp"

namespace milo {

namespace detail {

inline int status_for(Errc code) {
  switch (code) {
    case Errc::authentication_failure: return 401;
    case Errc::unknown_attribute:
    case Errc::no_hosted_model: return 404;
    case Errc::payload_too_large: return 413;
    default: return 400;
  }
}

inline Errc errc_from_name(std::string_view name) {
  if (name == "authentication_failure") return Errc::authentication_failure;
  if (name == "unknown_attribute") return Errc::unknown_attribute;
  if (name == "no_hosted_model") return Errc::no_hosted_model;
  if (name == "validation_rejected") return Errc::validation_rejected;
  if (name == "payload_too_large") return Errc::payload_too_large;
  if (name == "feature_count_mismatch") return Errc::feature_count_mismatch;
  if (name == "invalid_args") return Errc::invalid_args;
  return Errc::remote_error;
}

}  // namespace detail

// Hosts one imported model behind HTTP. Every non-health body, requests and
// responses alike (errors included), is a SealedEnvelope whose inner body is
// a JSON document; /health stays plaintext so liveness probes need no key.
class Server {
 public:
  Server(StreamConfig cfg, ModelDocument doc) : cfg_(std::move(cfg)) {
    replace_model(std::move(doc));
    install_routes();
  }

  static Server from_file(StreamConfig cfg, const std::string& model_path) {
    try {
      return Server(std::move(cfg), load_document(model_path));
    } catch (const Error& e) {
      if (e.code() == Errc::validation_rejected) throw;
      raise(Errc::model_load_failure, "cannot host '" + model_path + "': " + e.what());
    }
  }

  ~Server() { stop(); }

  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds and serves on a background thread; returns once the listener is up.
  void start() {
    if (running_) return;
    if (cfg_.port == 0) {
      const int port = http_.bind_to_any_port(cfg_.host);
      if (port < 0) raise(Errc::bind_failure, "cannot bind to " + cfg_.host);
      bound_port_ = port;
    } else {
      if (!http_.bind_to_port(cfg_.host, cfg_.port))
        raise(Errc::bind_failure,
              "cannot bind to " + cfg_.host + ":" + std::to_string(cfg_.port));
      bound_port_ = cfg_.port;
    }
    thread_ = std::thread([this] { http_.listen_after_bind(); });
    while (!http_.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(1));
    running_ = true;
  }

  void stop() {
    if (!running_) return;
    http_.stop();
    if (thread_.joinable()) thread_.join();
    running_ = false;
  }

  // Blocks the calling thread until the listener exits (i.e. forever, unless
  // another thread calls stop() or the process is signalled).
  void wait() {
    if (thread_.joinable()) thread_.join();
  }

  int port() const { return bound_port_; }

  ModelDocument hosted_document() const { return snapshot()->doc; }

 private:
  struct Hosted {
    ModelDocument doc;
    Model model;
  };

  std::shared_ptr<const Hosted> snapshot() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return hosted_;
  }

  // Validate-then-swap; readers holding the old snapshot are unaffected.
  void replace_model(ModelDocument doc) {
    const ValidationReport report = validate_document(doc);
    if (!report.ok) {
      std::string what = "document failed validation:";
      for (const Finding& f : report.findings)
        if (f.severity == Severity::error) what += " [" + f.path + "] " + f.message + ";";
      raise(Errc::validation_rejected, what);
    }
    auto next = std::make_shared<Hosted>();
    next->model = import_model(doc);
    next->doc = std::move(doc);
    std::lock_guard<std::mutex> lock(mutex_);
    hosted_ = std::move(next);
  }

  void install_routes() {
    http_.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok " + std::to_string(kStreamProtocolVersion), "text/plain");
    });
    http_.Post("/predict", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [this](const Node& inner) { return do_predict(inner); });
    });
    http_.Post("/call", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [this](const Node& inner) { return do_call(inner); });
    });
    http_.Post("/upload", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [this](const Node& inner) { return do_upload(inner); });
    });
    http_.Get("/download", [this](const httplib::Request& req, httplib::Response& res) {
      handle(req, res, [this](const Node&) { return do_download(); }, /*has_body=*/false);
    });
  }

  template <class Fn>
  void handle(const httplib::Request& req, httplib::Response& res, Fn&& fn,
              bool has_body = true) {
    try {
      Node inner = Node::null();
      if (has_body) {
        const Bytes body = open_payload(parse_envelope(req.body), cfg_);
        inner = parse_json(detail::bytes_str(body));
      }
      reply(res, 200, fn(inner));
    } catch (const Error& e) {
      NodeMap err;
      err.set("kind", Node::str(errc_name(e.code())));
      err.set("message", Node::str(e.what()));
      NodeMap outer;
      outer.set("error", Node::map(std::move(err)));
      reply(res, detail::status_for(e.code()), Node::map(std::move(outer)));
    }
  }

  // Inner bodies travel pretty-rendered: pretty + strict parse is a bitwise
  // identity on the node universe (canonical drops ".0" from integral floats).
  void reply(httplib::Response& res, int status, const Node& inner) {
    const SealedEnvelope env = seal_payload(detail::str_bytes(render_pretty(inner)), cfg_);
    res.status = status;
    res.set_content(render_envelope(env), "application/json");
  }

  Node do_predict(const Node& inner) {
    const Tensor X = decode_tensor(inner.as_map().at("X"));
    const std::shared_ptr<const Hosted> hosted = snapshot();
    NodeMap out;
    out.set("y", encode_tensor(predict(hosted->model, X)));
    return Node::map(std::move(out));
  }

  // Allow-listed attribute calls only. "predict" aliases /predict; "fit"
  // retrains with the hosted model's own hyperparameters and swaps the model
  // atomically. Anything else — including introspection names — is rejected.
  Node do_call(const Node& inner) {
    const NodeMap& m = inner.as_map();
    const std::string& attribute = m.at("attribute").as_string();
    const Node& args = m.at("args");
    if (attribute == "predict") return do_predict(args);
    if (attribute == "fit") return do_fit(args);
    raise(Errc::unknown_attribute, "attribute \"" + attribute + "\" is not allow-listed");
  }

  Node do_fit(const Node& args) {
    const NodeMap& m = args.as_map();
    const Tensor X = decode_tensor(m.at("X"));
    std::optional<Tensor> y;
    if (m.contains("y")) y = decode_tensor(m.at("y"));
    Dataset ds(X, std::move(y));

    const std::shared_ptr<const Hosted> hosted = snapshot();
    Model retrained = std::visit(
        [&](const auto& model) -> Model { return refit(model, ds); }, hosted->model);
    ModelDocument doc = export_model(retrained);
    replace_model(std::move(doc));

    NodeMap out;
    out.set("ok", Node::boolean(true));
    out.set("model_type", Node::str(model_type(retrained)));
    out.set("n_samples", Node::integer(static_cast<std::int64_t>(ds.n_samples())));
    return Node::map(std::move(out));
  }

  static Model refit(const LinearRegression& m, const Dataset& ds) {
    return LinearRegression::fit(ds, m.fit_intercept);
  }
  static Model refit(const LogisticRegression& m, const Dataset& ds) {
    return LogisticRegression::fit(ds, m.max_iter, m.tol, m.lr);
  }
  static Model refit(const DecisionTreeClassifier& m, const Dataset& ds) {
    return DecisionTreeClassifier::fit(ds, m.max_depth);
  }
  static Model refit(const KMeans& m, const Dataset& ds) {
    return KMeans::fit(ds, m.n_clusters, m.random_state);
  }
  static Model refit(const GaussianNB& m, const Dataset& ds) {
    return GaussianNB::fit(ds, m.var_smoothing);
  }

  Node do_upload(const Node& inner) {
    replace_model(document_from_node(inner));
    const std::shared_ptr<const Hosted> hosted = snapshot();
    NodeMap out;
    out.set("ok", Node::boolean(true));
    out.set("model_type", Node::str(hosted->doc.model_type));
    return Node::map(std::move(out));
  }

  Node do_download() {
    const std::shared_ptr<const Hosted> hosted = snapshot();
    if (!hosted) raise(Errc::no_hosted_model, "no model is hosted");
    return document_node(hosted->doc);
  }

  StreamConfig cfg_;
  httplib::Server http_;
  std::thread thread_;
  std::atomic<bool> running_{false};
  int bound_port_ = 0;

  mutable std::mutex mutex_;
  std::shared_ptr<const Hosted> hosted_;
};

class Client {
 public:
  explicit Client(StreamConfig cfg)
      : cfg_(std::move(cfg)), http_(cfg_.host, cfg_.port) {
    http_.set_connection_timeout(5);
    http_.set_read_timeout(30);
  }

  std::string health() {
    auto res = http_.Get("/health");
    if (!res) raise(Errc::transport_failure, "GET /health failed");
    return res->body;
  }

  Tensor predict(const Tensor& X) {
    NodeMap inner;
    inner.set("X", encode_tensor(X));
    const Node result = round_trip("POST", "/predict", Node::map(std::move(inner)));
    return decode_tensor(result.as_map().at("y"));
  }

  Node call(const std::string& attribute, NodeMap args) {
    NodeMap inner;
    inner.set("attribute", Node::str(attribute));
    inner.set("args", Node::map(std::move(args)));
    return round_trip("POST", "/call", Node::map(std::move(inner)));
  }

  Node fit(const Tensor& X, const std::optional<Tensor>& y) {
    NodeMap args;
    args.set("X", encode_tensor(X));
    if (y) args.set("y", encode_tensor(*y));
    return call("fit", std::move(args));
  }

  void upload(const ModelDocument& doc) { round_trip("POST", "/upload", document_node(doc)); }

  ModelDocument download() {
    return document_from_node(round_trip("GET", "/download", Node::null()));
  }

 private:
  Node round_trip(const std::string& method, const std::string& path, const Node& inner) {
    httplib::Result res = [&] {
      if (method == "GET") return http_.Get(path);
      // Pretty form survives the wire bitwise; canonical would turn 1.0 into 1.
      const SealedEnvelope env = seal_payload(detail::str_bytes(render_pretty(inner)), cfg_);
      return http_.Post(path, render_envelope(env), "application/json");
    }();
    if (!res)
      raise(Errc::transport_failure, method + " " + path + " failed: unreachable server");
    const Bytes body = open_payload(parse_envelope(res->body), cfg_);
    const Node result = parse_json(detail::bytes_str(body));
    if (res->status != 200) {
      std::string kind = "remote_error";
      std::string message = "server returned status " + std::to_string(res->status);
      if (result.is_map()) {
        if (const Node* err = result.as_map().find("error"); err && err->is_map()) {
          if (const Node* k = err->as_map().find("kind"); k && k->is_string())
            kind = k->as_string();
          if (const Node* msg = err->as_map().find("message"); msg && msg->is_string())
            message = msg->as_string();
        }
      }
      raise(detail::errc_from_name(kind), message);
    }
    return result;
  }

  StreamConfig cfg_;
  httplib::Client http_;
};

}  // namespace milo
