// milo — train, inspect, validate, sign, serve, and round-trip-check models
// stored in the transparent JSON model format.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "milo/milo.hpp"

namespace {

using namespace milo;

std::string resolve_model_name(const std::string& name) {
  if (name == "linear-regression") return std::string(LinearRegression::kModelType);
  if (name == "logistic-regression") return std::string(LogisticRegression::kModelType);
  if (name == "decision-tree") return std::string(DecisionTreeClassifier::kModelType);
  if (name == "kmeans") return std::string(KMeans::kModelType);
  if (name == "gaussian-nb") return std::string(GaussianNB::kModelType);
  if (find_model_type(name)) return name;
  raise(Errc::unknown_model_type, "unknown model '" + name +
                                      "' (try linear-regression, logistic-regression, "
                                      "decision-tree, kmeans, or gaussian-nb)");
}

// Pre-shared stream key: explicit flag wins, MILO_STREAM_KEY fills in.
std::optional<StreamKey> resolve_stream_key(const std::string& key_hex) {
  if (!key_hex.empty()) return parse_key_hex(key_hex);
  if (const char* env = std::getenv("MILO_STREAM_KEY"); env && *env)
    return parse_key_hex(env);
  return std::nullopt;
}

struct ParsedUrl {
  std::string host;
  int port = 0;
};

ParsedUrl parse_url(std::string url) {
  const std::string prefix = "http://";
  if (url.rfind(prefix, 0) == 0) url = url.substr(prefix.size());
  if (!url.empty() && url.back() == '/') url.pop_back();
  const std::size_t colon = url.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == url.size())
    raise(Errc::invalid_args, "URL must look like http://host:port");
  ParsedUrl out;
  out.host = url.substr(0, colon);
  try {
    out.port = std::stoi(url.substr(colon + 1));
  } catch (const std::exception&) {
    raise(Errc::invalid_args, "URL port is not a number");
  }
  if (out.port <= 0 || out.port > 65535) raise(Errc::invalid_args, "URL port out of range");
  return out;
}

std::string shape_text(const std::vector<std::int64_t>& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

std::string describe_state(const StateValue& v) {
  switch (v.kind()) {
    case StateKind::null_: return "null";
    case StateKind::boolean: return std::string("bool = ") + (v.as_bool() ? "true" : "false");
    case StateKind::integer: return "int = " + std::to_string(v.as_int());
    case StateKind::real: return "float = " + format_double(v.as_real());
    case StateKind::string: return "string = \"" + v.as_string() + "\"";
    case StateKind::tensor: {
      const Tensor& t = v.as_tensor();
      return "tensor " + std::string(dtype_name(t.dtype())) + " " + shape_text(t.shape());
    }
    case StateKind::scalar: {
      const TypedScalar& s = v.as_scalar();
      return "typed-scalar " + std::string(scalar_type_tag(s.dtype()));
    }
    case StateKind::tree_nodes:
      return "tree-nodes (" + std::to_string(v.as_tree().node_count()) + " nodes)";
    case StateKind::label_index: {
      std::string out = "label-index [";
      const auto& labels = v.as_labels().labels();
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(labels[i]);
      }
      return out + "]";
    }
    case StateKind::list: return "list (" + std::to_string(v.as_list().size()) + " items)";
    case StateKind::map: return "map (" + std::to_string(v.as_map().size()) + " entries)";
  }
  return "?";
}

int cmd_train(const std::string& model_name, const std::string& data_path,
              const std::string& target, const std::string& out_path, bool no_intercept,
              std::int64_t max_iter, double tol, double lr, std::int64_t max_depth,
              std::int64_t clusters, std::int64_t random_state, double var_smoothing) {
  const std::string type = resolve_model_name(model_name);
  const std::optional<std::string> target_col =
      target.empty() ? std::nullopt : std::optional<std::string>(target);
  const Dataset ds = dataset_from_csv(read_csv(data_path), target_col);

  Model model = [&]() -> Model {
    if (type == LinearRegression::kModelType)
      return LinearRegression::fit(ds, !no_intercept);
    if (type == LogisticRegression::kModelType)
      return LogisticRegression::fit(ds, max_iter, tol, lr);
    if (type == DecisionTreeClassifier::kModelType)
      return DecisionTreeClassifier::fit(ds, max_depth);
    if (type == KMeans::kModelType) return KMeans::fit(ds, clusters, random_state);
    return GaussianNB::fit(ds, var_smoothing);
  }();

  save_document(export_model(model), out_path);
  std::cout << "trained " << type << " on " << ds.n_samples() << " samples ("
            << ds.n_features() << " features) -> " << out_path << "\n";
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path) {
  std::vector<std::string> warnings;
  const Model model = import_model(load_document(model_path), &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

  const Dataset ds = dataset_from_csv(read_csv(data_path));
  const Tensor y = predict(model, ds.X());

  CsvTable out;
  out.header = {"y"};
  if (y.dtype() == DType::int64)
    for (std::int64_t v : y.i64_data()) out.rows.push_back({static_cast<double>(v)});
  else
    for (double v : y.f64_data()) out.rows.push_back({v});
  write_csv(out_path, out);
  std::cout << "wrote " << out.rows.size() << " predictions -> " << out_path << "\n";
  return 0;
}

int cmd_inspect(const std::string& path) {
  const ModelDocument doc = load_document(path);
  std::cout << "model_type: " << doc.model_type << "\n";
  std::cout << "pymilo_version: " << doc.pymilo_version << "\n";
  std::cout << "sklearn_version: " << doc.sklearn_version << "\n";
  const ModelTypeInfo& info = model_type_info(doc.model_type);
  std::cout << "category: " << category_name(info.category) << "\n";
  const StateMap state = chain_deserialize(build_chain(info.category), doc.data);
  std::cout << "fields:\n";
  for (const auto& [name, value] : state.entries())
    std::cout << "  " << name << ": " << describe_state(value) << "\n";
  return 0;
}

int cmd_validate(const std::string& path) {
  ValidationReport report;
  try {
    report = validate_document(load_document(path));
  } catch (const Error& e) {
    // Unreadable or structurally broken before validation could start.
    std::cout << "error [" << path << "] " << e.what() << "\n";
    std::cout << "invalid: 1 error\n";
    return 1;
  }
  std::cout << format_report(report);
  return report.ok ? 0 : 1;
}

int cmd_keygen(const std::string& prefix) {
  const SigningKeypair kp = generate_keypair();
  save_key(kp.public_key, prefix + ".pub");
  save_key(kp.secret_key, prefix + ".key");
  std::cout << "wrote " << prefix << ".pub (public) and " << prefix
            << ".key (secret), fingerprint " << key_fingerprint(kp.public_key) << "\n";
  return 0;
}

int cmd_sign(const std::string& model_path, const std::string& key_path,
             const std::string& out_path) {
  const ModelDocument doc = load_document(model_path);
  const Bytes secret = load_key(key_path, 64);
  const SignedEnvelope env = sign_document(doc, secret);
  save_signed(env, out_path);
  std::cout << "signed " << model_path << " -> " << out_path << " (fingerprint "
            << env.public_key_fingerprint << ")\n";
  return 0;
}

int cmd_verify(const std::string& signed_path, const std::string& key_path) {
  const SignedEnvelope env = load_signed(signed_path);
  const Bytes public_key = load_key(key_path, 32);
  if (!verify_document(env, public_key)) {
    std::cout << "signature INVALID\n";
    return 1;
  }
  std::cout << "signature valid (" << env.document.model_type << ", fingerprint "
            << env.public_key_fingerprint << ")\n";
  return 0;
}

int cmd_serve(const std::string& model_path, const std::string& host, int port,
              const std::string& key_hex, bool no_compress) {
  StreamConfig cfg;
  cfg.host = host;
  cfg.port = port;
  cfg.key = resolve_stream_key(key_hex);
  cfg.compression = !no_compress;

  Server server = Server::from_file(cfg, model_path);
  server.start();
  std::cout << "serving " << model_path << " on " << host << ":" << server.port()
            << " (encryption " << (cfg.key ? "on" : "off") << ", compression "
            << (cfg.compression ? "on" : "off") << ")\n"
            << std::flush;
  server.wait();
  return 0;
}

Client make_client(const std::string& url, const std::string& key_hex, bool no_compress) {
  const ParsedUrl parsed = parse_url(url);
  StreamConfig cfg;
  cfg.host = parsed.host;
  cfg.port = parsed.port;
  cfg.key = resolve_stream_key(key_hex);
  cfg.compression = !no_compress;
  return Client(cfg);
}

int cmd_call_predict(const std::string& url, const std::string& key_hex, bool no_compress,
                     const std::string& data_path, const std::string& out_path) {
  Client client = make_client(url, key_hex, no_compress);
  const Dataset ds = dataset_from_csv(read_csv(data_path));
  const Tensor y = client.predict(ds.X());

  CsvTable out;
  out.header = {"y"};
  if (y.dtype() == DType::int64)
    for (std::int64_t v : y.i64_data()) out.rows.push_back({static_cast<double>(v)});
  else
    for (double v : y.f64_data()) out.rows.push_back({v});
  write_csv(out_path, out);
  std::cout << "wrote " << out.rows.size() << " predictions -> " << out_path << "\n";
  return 0;
}

int cmd_call_fit(const std::string& url, const std::string& key_hex, bool no_compress,
                 const std::string& data_path, const std::string& target) {
  Client client = make_client(url, key_hex, no_compress);
  const std::optional<std::string> target_col =
      target.empty() ? std::nullopt : std::optional<std::string>(target);
  const Dataset ds = dataset_from_csv(read_csv(data_path), target_col);
  const Node ack =
      client.fit(ds.X(), ds.has_y() ? std::optional<Tensor>(ds.y()) : std::nullopt);
  std::cout << render_pretty(ack) << "\n";
  return 0;
}

int cmd_qc(std::uint64_t seed, const std::string& work_dir) {
  const QcReport report = run_qc_pipeline(seed, work_dir);
  std::cout << format_qc_report(report);
  return report.passed ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"transparent JSON model format tool"};
  app.require_subcommand(1);
  int rc = 0;

  // train
  auto* train = app.add_subcommand("train", "fit a model on a CSV and export it");
  std::string train_model, train_data, train_target, train_out;
  bool train_no_intercept = false;
  std::int64_t train_max_iter = 1000, train_max_depth = 16, train_clusters = 8,
               train_random_state = 0;
  double train_tol = 1e-6, train_lr = 0.1, train_var_smoothing = 1e-9;
  train->add_option("--model", train_model, "model name (e.g. linear-regression)")
      ->required();
  train->add_option("--data", train_data, "training CSV")->required();
  train->add_option("--target", train_target, "target column name (omit for kmeans)");
  train->add_option("--out", train_out, "output model JSON path")->required();
  train->add_flag("--no-intercept", train_no_intercept, "linear: skip the intercept");
  train->add_option("--max-iter", train_max_iter, "logistic: gradient-descent cap");
  train->add_option("--tol", train_tol, "logistic: gradient-norm stop tolerance");
  train->add_option("--lr", train_lr, "logistic: learning rate");
  train->add_option("--max-depth", train_max_depth, "tree: depth cap");
  train->add_option("--clusters", train_clusters, "kmeans: number of clusters");
  train->add_option("--random-state", train_random_state, "kmeans: RNG seed");
  train->add_option("--var-smoothing", train_var_smoothing, "gaussian-nb: variance floor");
  train->callback([&] {
    rc = cmd_train(train_model, train_data, train_target, train_out, train_no_intercept,
                   train_max_iter, train_tol, train_lr, train_max_depth, train_clusters,
                   train_random_state, train_var_smoothing);
  });

  // predict
  auto* pred = app.add_subcommand("predict", "run a stored model over a feature CSV");
  std::string pred_model, pred_data, pred_out;
  pred->add_option("--model", pred_model, "model JSON path")->required();
  pred->add_option("--data", pred_data, "feature CSV (no target column)")->required();
  pred->add_option("--out", pred_out, "output CSV path")->required();
  pred->callback([&] { rc = cmd_predict(pred_model, pred_data, pred_out); });

  // inspect
  auto* inspect = app.add_subcommand("inspect", "summarize a stored model");
  std::string inspect_path;
  inspect->add_option("file", inspect_path, "model JSON path")->required();
  inspect->callback([&] { rc = cmd_inspect(inspect_path); });

  // validate
  auto* validate = app.add_subcommand("validate", "check a stored model document");
  std::string validate_path;
  validate->add_option("file", validate_path, "model JSON path")->required();
  validate->callback([&] { rc = cmd_validate(validate_path); });

  // keygen
  auto* keygen = app.add_subcommand("keygen", "generate a signing keypair");
  std::string keygen_prefix;
  keygen->add_option("--out", keygen_prefix, "output path prefix")->required();
  keygen->callback([&] { rc = cmd_keygen(keygen_prefix); });

  // sign
  auto* sign = app.add_subcommand("sign", "sign a model document");
  std::string sign_model, sign_key, sign_out;
  sign->add_option("file", sign_model, "model JSON path")->required();
  sign->add_option("--key", sign_key, "secret key file (.key)")->required();
  sign->add_option("--out", sign_out, "output signed JSON path")->required();
  sign->callback([&] { rc = cmd_sign(sign_model, sign_key, sign_out); });

  // verify
  auto* verify = app.add_subcommand("verify", "verify a signed model document");
  std::string verify_path, verify_key;
  verify->add_option("file", verify_path, "signed JSON path")->required();
  verify->add_option("--key", verify_key, "public key file (.pub)")->required();
  verify->callback([&] { rc = cmd_verify(verify_path, verify_key); });

  // serve
  auto* serve = app.add_subcommand("serve", "host a model over HTTP");
  std::string serve_model, serve_host = "127.0.0.1", serve_key_hex;
  int serve_port = 8080;
  bool serve_no_compress = false;
  serve->add_option("--model", serve_model, "model JSON path")->required();
  serve->add_option("--host", serve_host, "bind address");
  serve->add_option("--port", serve_port, "port (0 picks a free one)");
  serve->add_option("--key-hex", serve_key_hex,
                    "64-hex-char AEAD key (falls back to MILO_STREAM_KEY)");
  serve->add_flag("--no-compress", serve_no_compress, "disable gzip");
  serve->callback([&] {
    rc = cmd_serve(serve_model, serve_host, serve_port, serve_key_hex, serve_no_compress);
  });

  // call
  auto* call = app.add_subcommand("call", "invoke a remote hosted model");
  call->require_subcommand(1);
  std::string call_url, call_key_hex, call_data, call_out, call_target;
  bool call_no_compress = false;
  auto* call_predict = call->add_subcommand("predict", "remote predict on a feature CSV");
  call_predict->add_option("--url", call_url, "server URL, e.g. http://127.0.0.1:8080")
      ->required();
  call_predict->add_option("--key-hex", call_key_hex,
                           "64-hex-char AEAD key (falls back to MILO_STREAM_KEY)");
  call_predict->add_option("--data", call_data, "feature CSV")->required();
  call_predict->add_option("--out", call_out, "output CSV path")->required();
  call_predict->add_flag("--no-compress", call_no_compress, "disable gzip");
  call_predict->callback([&] {
    rc = cmd_call_predict(call_url, call_key_hex, call_no_compress, call_data, call_out);
  });
  auto* call_fit = call->add_subcommand("fit", "retrain the hosted model on a CSV");
  call_fit->add_option("--url", call_url, "server URL, e.g. http://127.0.0.1:8080")
      ->required();
  call_fit->add_option("--key-hex", call_key_hex,
                       "64-hex-char AEAD key (falls back to MILO_STREAM_KEY)");
  call_fit->add_option("--data", call_data, "training CSV")->required();
  call_fit->add_option("--target", call_target, "target column name (omit for kmeans)");
  call_fit->add_flag("--no-compress", call_no_compress, "disable gzip");
  call_fit->callback(
      [&] { rc = cmd_call_fit(call_url, call_key_hex, call_no_compress, call_data, call_target); });

  // qc
  auto* qc = app.add_subcommand("qc", "round-trip quality-control pipeline");
  std::uint64_t qc_seed = 42;
  std::string qc_work_dir;
  qc->add_option("--seed", qc_seed, "RNG seed");
  qc->add_option("--work-dir", qc_work_dir, "directory for intermediate files");
  qc->callback([&] { rc = cmd_qc(qc_seed, qc_work_dir); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, std::cout, std::cerr);
    return code == 0 ? 0 : 2;  // help exits 0, usage errors exit 2
  } catch (const milo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
