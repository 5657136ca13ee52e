#include "oxc/io.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <sstream>

#include "oxc/errors.hpp"

namespace oxc {

using nlohmann::json;

namespace {

const std::map<std::string, NodeKind> kNodeKinds = {
    {"external_input", NodeKind::ExternalInput}, {"external_output", NodeKind::ExternalOutput},
    {"input_wss", NodeKind::InputWss},           {"output_wss", NodeKind::OutputWss},
    {"oxc_module", NodeKind::OxcModule}};
const std::map<std::string, Element> kElements = {
    {"port", Element::Port}, {"wss", Element::Wss}, {"coupler", Element::Coupler}, {"module", Element::Module}};
const std::map<std::string, EdgeKind> kEdgeKinds = {
    {"external", EdgeKind::External}, {"stage", EdgeKind::Stage}, {"internal", EdgeKind::Internal}};
const std::map<std::string, Stage> kStages = {{"classical", Stage::Classical},
                                              {"prime", Stage::IntermediatePrime},
                                              {"double-prime", Stage::IntermediateDoublePrime},
                                              {"modular", Stage::Modular}};

template <typename T>
T lookup(const std::map<std::string, T>& table, const std::string& key, const char* what) {
  auto it = table.find(key);
  if (it == table.end()) throw ImportError(std::string("unknown ") + what + " '" + key + "'");
  return it->second;
}

std::string side_name(Side s) { return s == Side::Input ? "input" : "output"; }

Side parse_side(const std::string& s) {
  if (s == "input") return Side::Input;
  if (s == "output") return Side::Output;
  throw ImportError("unknown side '" + s + "'");
}

json address_json(const Address& a) {
  json j;
  if (const auto* g = std::get_if<GroupPortAddress>(&a)) {
    j["type"] = "group_port";
    j["side"] = side_name(g->side);
  } else {
    j["type"] = "modular";
    j["side"] = side_name(std::get<ModularAddress>(a).side);
  }
  j["address"] = components(a);
  return j;
}

Address parse_address(const json& j) {
  const auto type = j.at("type").get<std::string>();
  const auto parts = j.at("address").get<std::vector<int>>();
  const Side side = parse_side(j.at("side").get<std::string>());
  if (type == "group_port") {
    if (parts.size() != 2) throw ImportError("group_port address needs 2 components");
    return GroupPortAddress{parts[0], parts[1], side};
  }
  if (type == "modular") {
    if (parts.size() != 4) throw ImportError("modular address needs 4 components");
    return ModularAddress{{parts[0], parts[1]}, {parts[2], parts[3]}, side};
  }
  throw ImportError("unknown address type '" + type + "'");
}

}  // namespace

json export_json(const FabricTopology& fabric) {
  const auto& p = fabric.params();
  json doc;
  doc["schema"] = kSchemaName;
  doc["schema_version"] = kSchemaVersion;
  doc["fabric"] = {{"N", p.N},
                   {"n", p.n},
                   {"r", p.r},
                   {"w", p.w},
                   {"stage", to_string(fabric.stage())},
                   {"sealed", fabric.options().sealed},
                   {"coupler_input", fabric.options().coupler_input}};
  json nodes = json::array();
  for (const auto& nd : fabric.nodes()) {
    json j = {{"kind", to_string(nd.id.kind)},
              {"label", nd.id.label},
              {"element", to_string(nd.element)},
              {"fan_in", nd.fan_in},
              {"fan_out", nd.fan_out}};
    if (nd.realizes) {
      j["realizes"] = {{"module", {nd.realizes->a, nd.realizes->b}},
                       {"side", side_name(nd.realizes->side)},
                       {"port", nd.realizes->port}};
    }
    nodes.push_back(std::move(j));
  }
  json edges = json::array();
  for (const auto& e : fabric.edges()) {
    json j = {{"from", {e.from.node, e.from.port}}, {"to", {e.to.node, e.to.port}}, {"kind", to_string(e.kind)}};
    if (e.tag) j["tag"] = address_json(*e.tag);
    if (e.subnetwork) j["subnetwork"] = {e.subnetwork->first, e.subnetwork->second};
    edges.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  doc["edges"] = std::move(edges);
  return doc;
}

FabricTopology import_json(const json& doc) {
  try {
    if (doc.at("schema").get<std::string>() != kSchemaName) throw ImportError("not an oxc-fabric document");
    const int version = doc.at("schema_version").get<int>();
    if (version != kSchemaVersion) {
      throw ImportError("unsupported schema version " + std::to_string(version));
    }
    const auto& f = doc.at("fabric");
    FabricParams params{f.at("N").get<int>(), f.at("n").get<int>(), f.at("r").get<int>(), f.at("w").get<int>()};
    const Stage stage = lookup(kStages, f.at("stage").get<std::string>(), "stage");
    BuildOptions options{f.value("sealed", false), f.value("coupler_input", false)};

    std::vector<Node> nodes;
    for (const auto& j : doc.at("nodes")) {
      Node nd;
      nd.id.kind = lookup(kNodeKinds, j.at("kind").get<std::string>(), "node kind");
      nd.id.label = j.at("label").get<std::vector<int>>();
      nd.element = lookup(kElements, j.at("element").get<std::string>(), "element");
      nd.fan_in = j.at("fan_in").get<int>();
      nd.fan_out = j.at("fan_out").get<int>();
      if (j.contains("realizes")) {
        const auto& r = j.at("realizes");
        const auto module = r.at("module").get<std::vector<int>>();
        if (module.size() != 2) throw ImportError("realizes.module needs 2 components");
        nd.realizes = ModulePort{module[0], module[1], parse_side(r.at("side").get<std::string>()),
                                 r.at("port").get<int>()};
      }
      nodes.push_back(std::move(nd));
    }
    std::vector<FiberEdge> edges;
    for (const auto& j : doc.at("edges")) {
      FiberEdge e;
      e.id = edges.size();
      const auto from = j.at("from").get<std::vector<long long>>();
      const auto to = j.at("to").get<std::vector<long long>>();
      if (from.size() != 2 || to.size() != 2 || from[0] < 0 || to[0] < 0) {
        throw ImportError("edge " + std::to_string(e.id) + " endpoints must be [node, port]");
      }
      e.from = {static_cast<NodeIndex>(from[0]), static_cast<int>(from[1])};
      e.to = {static_cast<NodeIndex>(to[0]), static_cast<int>(to[1])};
      e.kind = lookup(kEdgeKinds, j.at("kind").get<std::string>(), "edge kind");
      if (j.contains("tag")) e.tag = parse_address(j.at("tag"));
      if (j.contains("subnetwork")) {
        const auto s = j.at("subnetwork").get<std::vector<int>>();
        if (s.size() != 2) throw ImportError("subnetwork needs 2 components");
        e.subnetwork = std::make_pair(s[0], s[1]);
      }
      edges.push_back(std::move(e));
    }
    return FabricTopology(params, stage, options, std::move(nodes), std::move(edges));
  } catch (const json::exception& e) {
    throw ImportError(std::string("malformed document: ") + e.what());
  }
}

std::string export_document(const json& doc) { return doc.dump(2) + "\n"; }

json table_json(const ConnectivityTable& table) {
  json j;
  j["flavor"] = table.flavor == TableFlavor::Monolithic ? "monolithic" : "factorized";
  j["size"] = table.size;
  j["n"] = table.n;
  j["r"] = table.r;
  json rows = json::array();
  for (int row = 0; row < table.size; ++row) {
    json cells = json::array();
    for (int col = 0; col < table.size; ++col) cells.push_back(entry_text(table.at(row, col)));
    rows.push_back({{"label", table.row_label(row)}, {"entries", std::move(cells)}});
  }
  j["rows"] = std::move(rows);
  return j;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string node_caption(const Node& nd, int r) {
  const std::string label = format_label(std::span<const int>(nd.id.label));
  const std::string size = std::to_string(nd.fan_in) + "x" + std::to_string(nd.fan_out);
  switch (nd.id.kind) {
    case NodeKind::ExternalInput: return "in " + label;
    case NodeKind::ExternalOutput: return "out " + label;
    case NodeKind::OxcModule: return "Q_" + label + "(" + std::to_string(r) + ")";
    case NodeKind::InputWss:
    case NodeKind::OutputWss:
      return size + (nd.element == Element::Coupler ? " OC " : " WSS ") + label;
  }
  return label;
}

}  // namespace

std::string to_dot(const FabricTopology& fabric) {
  const auto& p = fabric.params();
  std::ostringstream os;
  os << "digraph \"" << to_string(fabric.stage()) << "_N" << p.N << "_n" << p.n << "_r" << p.r << "_w" << p.w
     << "\" {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=box, fontname=\"monospace\"];\n";
  const auto& nodes = fabric.nodes();
  std::map<std::pair<int, int>, std::vector<NodeIndex>> clusters;
  for (NodeIndex i = 0; i < nodes.size(); ++i) {
    const Node& nd = nodes[i];
    if (nd.realizes) {
      clusters[{nd.realizes->a, nd.realizes->b}].push_back(i);
      continue;
    }
    if (nd.element == Element::Module && !fabric.options().sealed) {
      clusters[{nd.id.label.at(0), nd.id.label.at(1)}].insert(clusters[{nd.id.label.at(0), nd.id.label.at(1)}].begin(), i);
      continue;
    }
    os << "  n" << i << " [label=\"" << dot_escape(node_caption(nd, p.r)) << "\"";
    if (nd.element == Element::Port) os << ", shape=circle";
    if (nd.element == Element::Module) os << ", shape=box3d";
    os << "];\n";
  }
  for (const auto& [ab, members] : clusters) {
    const std::string label = format_label({ab.first, ab.second});
    os << "  subgraph cluster_Q_" << ab.first << "_" << ab.second << " {\n";
    os << "    label=\"Q_" << dot_escape(label) << "(" << p.r << ")\";\n";
    for (NodeIndex i : members) {
      os << "    n" << i << " [label=\"" << dot_escape(node_caption(nodes[i], p.r)) << "\"";
      if (nodes[i].element == Element::Module) os << ", shape=point";
      os << "];\n";
    }
    os << "  }\n";
  }
  for (const auto& e : fabric.edges()) {
    os << "  n" << e.from.node << " -> n" << e.to.node << " [taillabel=\"" << e.from.port << "\", headlabel=\""
       << e.to.port << "\"";
    if (e.tag) {
      os << ", label=\"f(" << dot_escape(to_string(*e.tag)) << "," << dot_escape(to_string(counterpart(*e.tag)))
         << ")\"";
    }
    if (e.kind == EdgeKind::Internal) os << ", style=dashed";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

std::string render_table(const ConnectivityTable& table, TableFormat format) {
  std::ostringstream os;
  const int size = table.size;
  if (format == TableFormat::Csv) {
    auto quote = [](const std::string& s) { return "\"" + s + "\""; };
    os << quote("");
    for (int c = 0; c < size; ++c) os << ',' << quote(table.col_label(c));
    os << '\n';
    for (int r = 0; r < size; ++r) {
      os << quote(table.row_label(r));
      for (int c = 0; c < size; ++c) os << ',' << quote(entry_text(table.at(r, c)));
      os << '\n';
    }
    return os.str();
  }

  std::size_t cell = 0;
  std::size_t head = 0;
  for (int i = 0; i < size; ++i) {
    head = std::max({head, table.row_label(i).size()});
    cell = std::max(cell, table.col_label(i).size());
  }
  for (const auto& e : table.entries) cell = std::max(cell, entry_text(e).size());
  const int period = table.flavor == TableFlavor::Factorized ? table.r : size;
  auto pad = [](const std::string& s, std::size_t w) { return std::string(w - s.size(), ' ') + s; };
  auto separator = [&](int c) {
    return c > 0 && c % period == 0 ? std::string(" || ") : std::string(" | ");
  };
  auto rule = [&](char ch) {
    std::string line(head, ch);
    for (int c = 0; c < size; ++c) {
      line += c > 0 && c % period == 0 ? std::string(1, ch) + "++" + std::string(1, ch) : std::string(1, ch) + "+" + std::string(1, ch);
      line += std::string(cell, ch);
    }
    return line;
  };

  os << pad("", head);
  for (int c = 0; c < size; ++c) os << separator(c) << pad(table.col_label(c), cell);
  os << '\n' << rule('-') << '\n';
  for (int r = 0; r < size; ++r) {
    if (r > 0 && r % period == 0) os << rule('=') << '\n';
    os << pad(table.row_label(r), head);
    for (int c = 0; c < size; ++c) os << separator(c) << pad(entry_text(table.at(r, c)), cell);
    os << '\n';
  }
  return os.str();
}

std::vector<std::string> render_trace(const FabricTopology& fabric, const RoutedPath& path) {
  std::vector<std::string> lines;
  const auto& p = fabric.params();
  auto label = [&](NodeIndex i) { return format_label(std::span<const int>(fabric.node(i).id.label)); };
  auto size = [&](NodeIndex i) {
    const Node& nd = fabric.node(i);
    return std::to_string(nd.fan_in) + "x" + std::to_string(nd.fan_out) +
           (nd.element == Element::Coupler ? " OC " : " WSS ");
  };
  const auto& hops = path.hops;

  if (fabric.stage() == Stage::Classical && hops.size() == 4) {
    const auto& fiber = fabric.edge(path.edges.at(1));
    lines.push_back("Input of " + size(hops[1].node) + label(hops[1].node));
    std::string f = "-> fiber ";
    if (fiber.tag) f += "f(" + to_string(*fiber.tag) + "," + to_string(counterpart(*fiber.tag)) + ")";
    lines.push_back(f + " of S(" + std::to_string(p.N) + ")");
    lines.push_back("-> output of " + size(hops[2].node) + label(hops[2].node));
    return lines;
  }

  if (fabric.stage() == Stage::Modular && hops.size() >= 5) {
    const Hop& first = hops[1];
    const Hop& last = hops[hops.size() - 2];
    // The module is either a single hop (sealed) or the internal elements
    // between the two edge WSSs.
    const Hop& entry = hops[2];
    const Hop& exit = hops[hops.size() - 3];
    std::string module_name;
    int in_port = entry.in_port.value_or(0);
    int out_port = exit.out_port.value_or(0);
    const Node& entry_node = fabric.node(entry.node);
    if (entry_node.realizes) {
      module_name = "Q_" + format_label({entry_node.realizes->a, entry_node.realizes->b});
      in_port = entry_node.realizes->port;
      out_port = fabric.node(exit.node).realizes ? fabric.node(exit.node).realizes->port : out_port;
    } else {
      module_name = "Q_" + label(entry.node);
    }
    module_name += "(" + std::to_string(p.r) + ")";
    lines.push_back("Input of " + size(first.node) + label(first.node));
    lines.push_back("-> output " + std::to_string(first.out_port.value_or(0)) + " of " + size(first.node) +
                    label(first.node));
    lines.push_back("-> input " + std::to_string(in_port) + " of " + module_name);
    lines.push_back("-> output " + std::to_string(out_port) + " of " + module_name);
    lines.push_back("-> input " + std::to_string(last.in_port.value_or(0)) + " of " + size(last.node) +
                    label(last.node));
    lines.push_back("-> output of " + size(last.node) + label(last.node));
    return lines;
  }

  // Intermediate stages: one line per element, fibers named by their tags.
  for (std::size_t i = 1; i + 1 < hops.size(); ++i) {
    const Hop& h = hops[i];
    std::string line = i == 1 ? "Input of " : "-> ";
    if (i > 1) {
      const auto& fiber = fabric.edge(path.edges.at(i - 1));
      if (fiber.tag) {
        lines.push_back("-> fiber f(" + to_string(*fiber.tag) + "," + to_string(counterpart(*fiber.tag)) + ")");
      }
      line += "input " + std::to_string(h.in_port.value_or(0)) + " of ";
    }
    line += size(h.node) + label(h.node);
    if (h.out_port && i + 2 < hops.size()) line += ", output " + std::to_string(*h.out_port);
    lines.push_back(line);
  }
  if (hops.size() >= 3) lines.push_back("-> output of " + size(hops[hops.size() - 2].node) + label(hops[hops.size() - 2].node));
  return lines;
}

Stage parse_stage(const std::string& name) {
  auto it = kStages.find(name);
  if (it == kStages.end()) throw InvalidParameter("unknown stage '" + name + "'");
  return it->second;
}

std::string stage_option_name(Stage s) { return to_string(s); }

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::string tok;
    if (line[i] == '(') {
      auto close = line.find(')', i);
      if (close == std::string::npos) throw ImportError("unbalanced parenthesis");
      for (std::size_t k = i; k <= close; ++k) {
        if (!std::isspace(static_cast<unsigned char>(line[k]))) tok += line[k];
      }
      i = close + 1;
    } else {
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) tok += line[i++];
    }
    tokens.push_back(tok);
  }
  return tokens;
}

int parse_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw ImportError("'" + s + "' is not an integer");
  }
  if (used != s.size()) throw ImportError("'" + s + "' is not an integer");
  return v;
}

}  // namespace

int parse_endpoint(const std::string& tok, const FabricParams& params) {
  if (!tok.empty() && tok.front() == '(') {
    if (tok.back() != ')') throw ImportError("bad tuple '" + tok + "'");
    const std::string body = tok.substr(1, tok.size() - 2);
    const auto comma = body.find(',');
    if (comma == std::string::npos || body.find(',', comma + 1) != std::string::npos) {
      throw ImportError("tuple '" + tok + "' must have two components");
    }
    SplitIndex s{parse_int(body.substr(0, comma)), parse_int(body.substr(comma + 1))};
    try {
      return flatten_index(s, params.r, params.n);
    } catch (const std::exception& e) {
      throw ImportError(e.what());
    }
  }
  return parse_int(tok);
}

std::vector<BatchRequest> parse_batch(std::istream& in, const FabricParams& params) {
  std::vector<BatchRequest> out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    try {
      auto tokens = tokenize(line);
      if (tokens.empty()) continue;
      if (tokens.size() != 3 && tokens.size() != 4) {
        throw ImportError("expected 'input output wavelength'");
      }
      ConnectionRequest req{parse_endpoint(tokens[0], params), parse_endpoint(tokens[1], params),
                            Wavelength{parse_int(tokens[2])}};
      if (tokens.size() == 4 && parse_int(tokens[3]) != req.wavelength.index) {
        throw ImportError("wavelength conversion is not supported");
      }
      out.push_back({number, req});
    } catch (const ImportError& e) {
      throw ImportError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace oxc
