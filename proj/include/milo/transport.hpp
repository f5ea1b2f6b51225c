#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "milo/json.hpp"
#include "milo/models/model.hpp"
#include "milo/node.hpp"
#include "milo/state.hpp"
#include "milo/transporters.hpp"
#include "milo/version.hpp"

namespace milo {

// The versioned document envelope — what a model file IS. Top-level key order
// on disk is fixed: data, sklearn_version, pymilo_version, model_type.
struct ModelDocument {
  Node data;
  std::string sklearn_version;
  std::string pymilo_version;
  std::string model_type;

  bool operator==(const ModelDocument&) const = default;
};

inline Node document_node(const ModelDocument& doc) {
  NodeMap m;
  m.set("data", doc.data);
  m.set("sklearn_version", Node::str(doc.sklearn_version));
  m.set("pymilo_version", Node::str(doc.pymilo_version));
  m.set("model_type", Node::str(doc.model_type));
  return Node::map(std::move(m));
}

inline ModelDocument document_from_node(const Node& node) {
  if (!node.is_map())
    raise(Errc::malformed_envelope, "model document must be a JSON object");
  const NodeMap& m = node.as_map();
  for (const auto& [key, value] : m) {
    if (key != "data" && key != "sklearn_version" && key != "pymilo_version" &&
        key != "model_type")
      raise(Errc::malformed_envelope, "unexpected top-level key \"" + key + "\"");
  }
  ModelDocument doc;
  for (const char* key : {"data", "sklearn_version", "pymilo_version", "model_type"})
    if (!m.contains(key))
      raise(Errc::missing_envelope_key, "missing top-level key \"" + std::string(key) + "\"");
  doc.data = m.at("data");
  doc.sklearn_version = m.at("sklearn_version").as_string();
  doc.pymilo_version = m.at("pymilo_version").as_string();
  doc.model_type = m.at("model_type").as_string();
  return doc;
}

inline ModelDocument export_model(const Model& model) {
  ModelDocument doc;
  doc.model_type = std::string(model_type(model));
  const TransporterChain chain = build_chain(model_category(doc.model_type));
  doc.data = chain_serialize(chain, extract_state(model));
  doc.sklearn_version = std::string(kModelingVersion);
  doc.pymilo_version = std::string(kFormatVersion);
  return doc;
}

// Restores version mismatches as warnings, not errors: a transparent format
// should keep loading across library versions. strict flips them to errors.
inline Model import_model(const ModelDocument& doc, std::vector<std::string>* warnings = nullptr,
                          bool strict = false) {
  const TransporterChain chain = build_chain(model_category(doc.model_type));
  const StateMap state = chain_deserialize(chain, doc.data);
  auto note = [&](const std::string& msg) {
    if (strict) raise(Errc::unsupported_version, msg);
    if (warnings) warnings->push_back(msg);
  };
  if (doc.pymilo_version != kFormatVersion)
    note("document format version \"" + doc.pymilo_version + "\" differs from \"" +
         std::string(kFormatVersion) + "\"");
  if (doc.sklearn_version != kModelingVersion)
    note("document modeling version \"" + doc.sklearn_version + "\" differs from \"" +
         std::string(kModelingVersion) + "\"");
  return restore_model(doc.model_type, state);
}

inline void save_document(const ModelDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io_failure, "cannot open '" + path + "' for writing");
  out << render_pretty(document_node(doc)) << '\n';
  if (!out) raise(Errc::io_failure, "write to '" + path + "' failed");
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_failure, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) raise(Errc::io_failure, "read from '" + path + "' failed");
  return std::move(buf).str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::io_failure, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) raise(Errc::io_failure, "write to '" + path + "' failed");
}

inline ModelDocument load_document(const std::string& path) {
  return document_from_node(parse_json(read_file(path)));
}

enum class Severity { error, warning };

struct Finding {
  Severity severity;
  std::string path;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Finding> findings;

  void add(Severity severity, std::string path, std::string message) {
    if (severity == Severity::error) ok = false;
    findings.push_back({severity, std::move(path), std::move(message)});
  }
};

// Mechanizes the format's safety claim: every node is one of the data
// variants (walk), the envelope is complete, the model type is registered,
// required fields exist, and every field restores through the chain without
// violating a model invariant. Reports, never throws.
inline ValidationReport validate_document(const ModelDocument& doc) {
  ValidationReport report;

  // The node walk is the non-executability proof: the closed variant set has
  // no representation for code, callables, or resource references.
  document_node(doc).walk([&](const Node& n) {
    switch (n.kind()) {
      case NodeKind::null_:
      case NodeKind::boolean:
      case NodeKind::integer:
      case NodeKind::real:
      case NodeKind::string:
      case NodeKind::list:
      case NodeKind::map: return;
    }
    report.add(Severity::error, "data", "non-data node variant in document tree");
  });

  const ModelTypeInfo* info = find_model_type(doc.model_type);
  if (!info) {
    report.add(Severity::error, "model_type",
               "unknown model type \"" + doc.model_type + "\"");
    return report;
  }
  if (!doc.data.is_map()) {
    report.add(Severity::error, "data", "data must be a JSON object");
    return report;
  }

  const NodeMap& data = doc.data.as_map();
  for (std::string_view field : info->required_fields)
    if (!data.contains(field))
      report.add(Severity::error, "data." + std::string(field), "required field is missing");
  for (const auto& [field, value] : data) {
    bool known = false;
    for (std::string_view required : info->required_fields)
      if (field == required) known = true;
    if (!known)
      report.add(Severity::warning, "data." + std::string(field),
                 "unknown extra field (ignored on import)");
  }

  // Trial restore, field by field so findings carry the offending path: this
  // covers tensor shape/dtype consistency, unknown structure tags, tree
  // well-formedness, and every model invariant the importer enforces.
  const TransporterChain chain = build_chain(info->category);
  StateMap state;
  bool fields_ok = true;
  for (const auto& [field, value] : data) {
    try {
      state.set(field, chain.restore_value(value, field));
    } catch (const Error& e) {
      report.add(Severity::error, "data." + field, e.what());
      fields_ok = false;
    }
  }
  if (fields_ok && report.ok) {
    try {
      restore_model(doc.model_type, state);
    } catch (const Error& e) {
      report.add(Severity::error, "data", e.what());
    }
  }
  return report;
}

inline std::string format_report(const ValidationReport& report) {
  std::string out = report.ok ? "ok" : "invalid";
  out += " (" + std::to_string(report.findings.size()) + " finding";
  if (report.findings.size() != 1) out += 's';
  out += ")\n";
  for (const Finding& f : report.findings) {
    out += f.severity == Severity::error ? "  error   " : "  warning ";
    out += f.path + ": " + f.message + "\n";
  }
  return out;
}

}  // namespace milo
