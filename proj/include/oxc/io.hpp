#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "oxc/routing.hpp"
#include "oxc/shuffle.hpp"
#include "oxc/topology.hpp"

namespace oxc {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kSchemaName = "oxc-fabric";

// Self-describing document for a topology of any stage. Node and edge order
// is preserved, so export(import(doc)) == doc.
nlohmann::json export_json(const FabricTopology& fabric);
// Throws ImportError on a malformed or unsupported document. The result is
// not validated; run validate_topology() on it.
FabricTopology import_json(const nlohmann::json& doc);

// Pretty-printed JSON text with a trailing newline.
std::string export_document(const nlohmann::json& doc);

nlohmann::json table_json(const ConnectivityTable& table);

// Stable node order (topology order); unsealed modules become clusters.
std::string to_dot(const FabricTopology& fabric);

enum class TableFormat { Pretty, Csv };

// Rows are input groups, columns output groups. Factorized tables mark the
// period boundaries ("||" between column periods, '=' rules between row
// periods).
std::string render_table(const ConnectivityTable& table, TableFormat format);

// Hop-by-hop description of a routed path, one line per step.
std::vector<std::string> render_trace(const FabricTopology& fabric, const RoutedPath& path);

Stage parse_stage(const std::string& name);
std::string stage_option_name(Stage s);

// Flat index "4" or split index "(a,p')" flattened with the fabric's r.
// Throws ImportError.
int parse_endpoint(const std::string& token, const FabricParams& params);

/// One request of a batch file: "p q lambda" or "(a,p') (b,q') lambda".
struct BatchRequest {
  int line = 0;
  ConnectionRequest request;
};

// Throws ImportError naming the offending line. A fourth field giving a
// different output wavelength is rejected: the fabric cannot convert.
std::vector<BatchRequest> parse_batch(std::istream& in, const FabricParams& params);

}  // namespace oxc
