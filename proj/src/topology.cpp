#include "oxc/topology.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "oxc/errors.hpp"

namespace oxc {

FabricTopology::FabricTopology(FabricParams params, Stage stage, BuildOptions options,
                               std::vector<Node> nodes, std::vector<FiberEdge> edges)
    : params_(params),
      stage_(stage),
      options_(options),
      nodes_(std::move(nodes)),
      edges_(std::move(edges)) {
  out_.resize(nodes_.size());
  in_.resize(nodes_.size());
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    index_.emplace(nodes_[i].id, i);
    out_[i].resize(static_cast<std::size_t>(std::max(0, nodes_[i].fan_out)));
    in_[i].resize(static_cast<std::size_t>(std::max(0, nodes_[i].fan_in)));
  }
  auto slot = [](auto& table, const PortRef& ref) -> std::optional<EdgeIndex>* {
    if (ref.node >= table.size() || ref.port < 0) return nullptr;
    auto& ports = table[ref.node];
    if (static_cast<std::size_t>(ref.port) >= ports.size()) return nullptr;
    return &ports[static_cast<std::size_t>(ref.port)];
  };
  for (EdgeIndex e = 0; e < edges_.size(); ++e) {
    // First fiber on a port wins; duplicates are reported by validate_topology.
    if (auto* s = slot(out_, edges_[e].from); s && !*s) *s = e;
    if (auto* s = slot(in_, edges_[e].to); s && !*s) *s = e;
  }
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    const auto& r = nodes_[i].realizes;
    if (!r) continue;
    auto module = index_.find(NodeId{NodeKind::OxcModule, {r->a, r->b}});
    if (module == index_.end()) continue;
    module_elements_.emplace(std::make_pair(module->second, std::make_pair(r->side, r->port)), i);
  }
}

std::optional<NodeIndex> FabricTopology::find(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeIndex> FabricTopology::out_edge(NodeIndex node, int port) const {
  if (node >= out_.size() || port < 0 || static_cast<std::size_t>(port) >= out_[node].size()) {
    return std::nullopt;
  }
  return out_[node][static_cast<std::size_t>(port)];
}

std::optional<EdgeIndex> FabricTopology::in_edge(NodeIndex node, int port) const {
  if (node >= in_.size() || port < 0 || static_cast<std::size_t>(port) >= in_[node].size()) {
    return std::nullopt;
  }
  return in_[node][static_cast<std::size_t>(port)];
}

std::optional<NodeIndex> FabricTopology::module_element(NodeIndex module, Side side,
                                                        int port) const {
  auto it = module_elements_.find(std::make_pair(module, std::make_pair(side, port)));
  if (it == module_elements_.end()) return std::nullopt;
  return it->second;
}

std::size_t FabricTopology::count_edges(EdgeKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(edges_.begin(), edges_.end(), [&](const FiberEdge& e) { return e.kind == kind; }));
}

bool operator==(const FabricTopology& a, const FabricTopology& b) {
  return a.params() == b.params() && a.stage() == b.stage() && a.options() == b.options() &&
         a.nodes() == b.nodes() && a.edges() == b.edges();
}

NodeIndex TopologyBuilder::add_node(NodeId id, Element element, int fan_in, int fan_out,
                                    std::optional<ModulePort> realizes) {
  NodeIndex i = nodes_.size();
  if (!index_.emplace(id, i).second) {
    throw std::logic_error("duplicate node " + describe(id));
  }
  nodes_.push_back(Node{std::move(id), element, fan_in, fan_out, realizes});
  return i;
}

EdgeIndex TopologyBuilder::add_edge(PortRef from, PortRef to, EdgeKind kind,
                                    std::optional<Address> tag,
                                    std::optional<std::pair<int, int>> subnetwork) {
  EdgeIndex e = edges_.size();
  edges_.push_back(FiberEdge{e, from, to, kind, tag, subnetwork});
  return e;
}

NodeIndex TopologyBuilder::at(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw std::logic_error("no node " + describe(id));
  return it->second;
}

FabricTopology TopologyBuilder::build(FabricParams params, Stage stage, BuildOptions options) && {
  return FabricTopology(params, stage, options, std::move(nodes_), std::move(edges_));
}

namespace {

std::string edge_subject(const FabricTopology& t, const FiberEdge& e) {
  std::ostringstream os;
  os << "edge " << e.id;
  if (e.tag) os << " f(" << to_string(*e.tag) << "," << to_string(counterpart(*e.tag)) << ")";
  (void)t;
  return os.str();
}

std::size_t expected_stage_fibers(const FabricParams& p, Stage s) {
  const auto N = static_cast<std::size_t>(p.N);
  const auto n = static_cast<std::size_t>(p.n);
  switch (s) {
    case Stage::Classical:
    case Stage::IntermediatePrime:
      return N * N;
    case Stage::IntermediateDoublePrime:
      return N * N + 2 * N * n;
    case Stage::Modular:
      return 2 * N * n;
  }
  return 0;
}

}  // namespace

std::vector<Violation> validate_topology(const FabricTopology& t) {
  std::vector<Violation> out;
  auto report = [&](std::string subject, std::string message) {
    out.push_back({std::move(subject), std::move(message)});
  };
  const auto& p = t.params();
  try {
    p.validate();
  } catch (const InvalidParameter& e) {
    report("params", e.what());
    return out;
  }

  const auto& nodes = t.nodes();
  std::map<NodeId, std::size_t> seen;
  std::vector<int> ext_in(static_cast<std::size_t>(p.N), 0);
  std::vector<int> ext_out(static_cast<std::size_t>(p.N), 0);
  std::size_t realizing = 0;
  for (NodeIndex i = 0; i < nodes.size(); ++i) {
    const Node& nd = nodes[i];
    const std::string subject = "node " + std::to_string(i) + " " + describe(nd.id);
    if (++seen[nd.id] == 2) report(subject, "duplicate node id");
    switch (nd.id.kind) {
      case NodeKind::ExternalInput:
      case NodeKind::ExternalOutput: {
        bool input = nd.id.kind == NodeKind::ExternalInput;
        if (nd.element != Element::Port) report(subject, "external port must be a Port element");
        if (input ? (nd.fan_in != 0 || nd.fan_out != 1) : (nd.fan_in != 1 || nd.fan_out != 0)) {
          report(subject, "external port has wrong degree");
        }
        if (nd.id.label.size() != 1 || nd.id.label[0] < 0 || nd.id.label[0] >= p.N) {
          report(subject, "external port label out of range");
        } else {
          (input ? ext_in : ext_out)[static_cast<std::size_t>(nd.id.label[0])]++;
        }
        break;
      }
      case NodeKind::InputWss:
      case NodeKind::OutputWss: {
        bool input = nd.id.kind == NodeKind::InputWss;
        if (nd.element != Element::Wss && !(input && nd.element == Element::Coupler)) {
          report(subject, "switching node has wrong element type");
        }
        if (nd.fan_in < 1 || nd.fan_out < 1 || (input ? nd.fan_in != 1 : nd.fan_out != 1)) {
          report(subject, input ? "input WSS must be 1xk" : "output WSS must be kx1");
        }
        for (int v : nd.id.label) {
          if (v < 0 || v >= p.N) report(subject, "label component out of range");
        }
        break;
      }
      case NodeKind::OxcModule: {
        if (nd.element != Element::Module) report(subject, "module node must be a Module element");
        if (t.stage() != Stage::Modular) report(subject, "module node outside modular stage");
        if (nd.id.label.size() != 2 || nd.id.label[0] < 0 || nd.id.label[0] >= p.n ||
            nd.id.label[1] < 0 || nd.id.label[1] >= p.n) {
          report(subject, "module label (a,b) outside [0,n)^2");
        }
        if (nd.fan_in != p.r || nd.fan_out != p.r) report(subject, "module degree must be r in, r out");
        break;
      }
    }
    if (nd.realizes) {
      ++realizing;
      const auto& r = *nd.realizes;
      auto module = t.find(NodeId{NodeKind::OxcModule, {r.a, r.b}});
      if (!module) {
        report(subject, "realizes a port of a missing module");
      } else if (r.port < 0 || r.port >= t.node(*module).fan_in) {
        report(subject, "realizes a module port out of range");
      } else if (t.module_element(*module, r.side, r.port) != i) {
        report(subject, "module port realized more than once");
      }
    }
  }
  for (int i = 0; i < p.N; ++i) {
    if (ext_in[static_cast<std::size_t>(i)] != 1) {
      report("external input " + std::to_string(i),
             "appears " + std::to_string(ext_in[static_cast<std::size_t>(i)]) + " times");
    }
    if (ext_out[static_cast<std::size_t>(i)] != 1) {
      report("external output " + std::to_string(i),
             "appears " + std::to_string(ext_out[static_cast<std::size_t>(i)]) + " times");
    }
  }

  std::set<PortRef> used_from;
  std::set<PortRef> used_to;
  const auto& edges = t.edges();
  for (EdgeIndex e = 0; e < edges.size(); ++e) {
    const FiberEdge& fe = edges[e];
    const std::string subject = edge_subject(t, fe);
    if (fe.id != e) report(subject, "edge id does not match its position");
    bool ok = true;
    if (fe.from.node >= nodes.size()) {
      report(subject, "dangling source node " + std::to_string(fe.from.node));
      ok = false;
    } else if (fe.from.port < 0 || fe.from.port >= nodes[fe.from.node].fan_out) {
      report(subject, "source port outside node degree");
      ok = false;
    }
    if (fe.to.node >= nodes.size()) {
      report(subject, "dangling target node " + std::to_string(fe.to.node));
      ok = false;
    } else if (fe.to.port < 0 || fe.to.port >= nodes[fe.to.node].fan_in) {
      report(subject, "target port outside node degree");
      ok = false;
    }
    if (!ok) continue;
    if (!used_from.insert(fe.from).second) report(subject, "second fiber on one output port");
    if (!used_to.insert(fe.to).second) report(subject, "second fiber on one input port");
    const auto& src = nodes[fe.from.node];
    const auto& dst = nodes[fe.to.node];
    bool external = src.element == Element::Port || dst.element == Element::Port;
    if (external != (fe.kind == EdgeKind::External)) {
      report(subject, "edge kind does not match its endpoints");
    }
    if (fe.kind == EdgeKind::Internal) {
      if (!src.realizes || !dst.realizes || src.realizes->a != dst.realizes->a ||
          src.realizes->b != dst.realizes->b) {
        report(subject, "internal fiber must stay inside one module");
      }
    } else if (src.realizes || dst.realizes) {
      report(subject, "only internal fibers may touch module internals");
    }
  }

  // Every port carries exactly one fiber, except the module-facing ports of
  // internal elements (entered and left through the module node).
  for (NodeIndex i = 0; i < nodes.size(); ++i) {
    const Node& nd = nodes[i];
    for (int port = 0; port < nd.fan_out; ++port) {
      if (nd.realizes && nd.realizes->side == Side::Output) continue;
      if (!used_from.count(PortRef{i, port})) {
        report("node " + std::to_string(i) + " " + describe(nd.id),
               "output port " + std::to_string(port) + " unconnected");
      }
    }
    for (int port = 0; port < nd.fan_in; ++port) {
      if (nd.realizes && nd.realizes->side == Side::Input) continue;
      if (!used_to.count(PortRef{i, port})) {
        report("node " + std::to_string(i) + " " + describe(nd.id),
               "input port " + std::to_string(port) + " unconnected");
      }
    }
  }

  const std::size_t stage = t.count_edges(EdgeKind::Stage);
  const std::size_t expected = expected_stage_fibers(p, t.stage());
  if (stage != expected) {
    report("fabric", "stage fiber count " + std::to_string(stage) + ", expected " +
                         std::to_string(expected));
  }
  const std::size_t internal = t.count_edges(EdgeKind::Internal);
  const bool unsealed_modular = t.stage() == Stage::Modular && !t.options().sealed;
  const auto r = static_cast<std::size_t>(p.r);
  const auto n = static_cast<std::size_t>(p.n);
  const std::size_t expected_internal = unsealed_modular ? n * n * r * r : 0;
  if (internal != expected_internal) {
    report("fabric", "internal fiber count " + std::to_string(internal) + ", expected " +
                         std::to_string(expected_internal));
  }
  const std::size_t expected_realizing = unsealed_modular ? 2 * n * n * r : 0;
  if (realizing != expected_realizing) {
    report("fabric", "module internal element count " + std::to_string(realizing) +
                         ", expected " + std::to_string(expected_realizing));
  }
  if (t.count_edges(EdgeKind::External) != 2 * static_cast<std::size_t>(p.N)) {
    report("fabric", "external attachment count must be 2N");
  }
  return out;
}

namespace {

// Depth-first walk from one external input; `on_arrival` sees every
// complete path that reaches an external output.
void walk_from(const FabricTopology& t, NodeIndex start,
               const std::function<void(NodeIndex, const std::vector<EdgeIndex>&)>& on_arrival) {
  std::vector<EdgeIndex> trail;
  std::vector<char> on_stack(t.nodes().size(), 0);

  std::function<void(NodeIndex, int)> visit;
  auto follow = [&](NodeIndex node, int out_port) {
    auto e = t.out_edge(node, out_port);
    if (!e) return;
    const auto& fe = t.edge(*e);
    trail.push_back(*e);
    visit(fe.to.node, fe.to.port);
    trail.pop_back();
  };
  visit = [&](NodeIndex node, int in_port) {
    if (on_stack[node]) return;
    on_stack[node] = 1;
    const Node& nd = t.node(node);
    switch (nd.element) {
      case Element::Port:
        if (nd.id.kind == NodeKind::ExternalOutput) {
          on_arrival(node, trail);
        } else {
          follow(node, 0);
        }
        break;
      case Element::Module:
        if (auto inner = t.module_element(node, Side::Input, in_port)) {
          visit(*inner, 0);
        } else {
          for (int o = 0; o < nd.fan_out; ++o) follow(node, o);
        }
        break;
      case Element::Wss:
      case Element::Coupler:
        if (nd.realizes && nd.realizes->side == Side::Output) {
          auto module = t.find(NodeId{NodeKind::OxcModule, {nd.realizes->a, nd.realizes->b}});
          if (module) follow(*module, nd.realizes->port);
        } else {
          for (int o = 0; o < nd.fan_out; ++o) follow(node, o);
        }
        break;
    }
    on_stack[node] = 0;
  };
  visit(start, -1);
}

}  // namespace

std::vector<std::vector<EdgeIndex>> enumerate_paths(const FabricTopology& t, int input,
                                                    int output) {
  std::vector<std::vector<EdgeIndex>> paths;
  auto start = t.find(NodeId{NodeKind::ExternalInput, {input}});
  if (!start) return paths;
  walk_from(t, *start, [&](NodeIndex node, const std::vector<EdgeIndex>& trail) {
    if (t.node(node).id.label == std::vector<int>{output}) paths.push_back(trail);
  });
  return paths;
}

std::vector<std::vector<std::size_t>> reachability_matrix(const FabricTopology& t) {
  const auto N = static_cast<std::size_t>(t.params().N);
  std::vector<std::vector<std::size_t>> m(N, std::vector<std::size_t>(N, 0));
  for (std::size_t p = 0; p < N; ++p) {
    auto start = t.find(NodeId{NodeKind::ExternalInput, {static_cast<int>(p)}});
    if (!start) continue;
    walk_from(t, *start, [&](NodeIndex node, const std::vector<EdgeIndex>&) {
      const auto& label = t.node(node).id.label;
      if (label.size() == 1 && label[0] >= 0 && static_cast<std::size_t>(label[0]) < N) {
        ++m[p][static_cast<std::size_t>(label[0])];
      }
    });
  }
  return m;
}

std::string to_string(Stage s) {
  switch (s) {
    case Stage::Classical: return "classical";
    case Stage::IntermediatePrime: return "prime";
    case Stage::IntermediateDoublePrime: return "double-prime";
    case Stage::Modular: return "modular";
  }
  return "?";
}

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::ExternalInput: return "external_input";
    case NodeKind::ExternalOutput: return "external_output";
    case NodeKind::InputWss: return "input_wss";
    case NodeKind::OutputWss: return "output_wss";
    case NodeKind::OxcModule: return "oxc_module";
  }
  return "?";
}

std::string to_string(Element e) {
  switch (e) {
    case Element::Port: return "port";
    case Element::Wss: return "wss";
    case Element::Coupler: return "coupler";
    case Element::Module: return "module";
  }
  return "?";
}

std::string to_string(EdgeKind k) {
  switch (k) {
    case EdgeKind::External: return "external";
    case EdgeKind::Stage: return "stage";
    case EdgeKind::Internal: return "internal";
  }
  return "?";
}

std::string describe(const NodeId& id) {
  std::string label = format_label(std::span<const int>(id.label));
  switch (id.kind) {
    case NodeKind::ExternalInput: return "input " + label;
    case NodeKind::ExternalOutput: return "output " + label;
    case NodeKind::InputWss: return "input WSS " + label;
    case NodeKind::OutputWss: return "output WSS " + label;
    case NodeKind::OxcModule: return "Q_" + label;
  }
  return label;
}

}  // namespace oxc
