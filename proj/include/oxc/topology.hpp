#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "oxc/address.hpp"

namespace oxc {

enum class NodeKind { ExternalInput, ExternalOutput, InputWss, OutputWss, OxcModule };

/// What a node does to light. Wss switches per wavelength, Coupler broadcasts
/// every wavelength to every output, Module is an r x r OXC, Port is an
/// external fiber end.
enum class Element { Port, Wss, Coupler, Module };

enum class Stage { Classical, IntermediatePrime, IntermediateDoublePrime, Modular };

/// External edges attach the fabric's own ports, Stage edges run between
/// switching stages, Internal edges are the fibers inside an unsealed module.
enum class EdgeKind { External, Stage, Internal };

/// Label meaning by kind and stage:
///   ExternalInput/Output  {p}            flat port index
///   InputWss              {p} | {a,p'} | {a,p',b}
///   OutputWss             {q} | {b,q'} | {b,q',a}
///   OxcModule             {a,b}          module index k = a*n + b
struct NodeId {
  NodeKind kind = NodeKind::InputWss;
  std::vector<int> label;

  auto operator<=>(const NodeId&) const = default;
};

/// Module port that an internal element of an unsealed module stands for.
struct ModulePort {
  int a = 0;
  int b = 0;
  Side side = Side::Input;
  int port = 0;

  auto operator<=>(const ModulePort&) const = default;
};

struct Node {
  NodeId id;
  Element element = Element::Wss;
  int fan_in = 0;
  int fan_out = 0;
  std::optional<ModulePort> realizes;

  bool operator==(const Node&) const = default;
};

using NodeIndex = std::size_t;
using EdgeIndex = std::size_t;

struct PortRef {
  NodeIndex node = 0;
  int port = 0;

  auto operator<=>(const PortRef&) const = default;
};

struct FiberEdge {
  EdgeIndex id = 0;
  PortRef from;
  PortRef to;
  EdgeKind kind = EdgeKind::Stage;
  // Input-side address naming the fiber, e.g. f(pq,qp) -> {p,q}.
  std::optional<Address> tag;
  // Shuffle sub-network (a,b) the fiber belongs to.
  std::optional<std::pair<int, int>> subnetwork;

  bool operator==(const FiberEdge&) const = default;
};

struct BuildOptions {
  // Collapse each r x r module into an opaque per-wavelength crossbar.
  bool sealed = false;
  // Replace every input-side 1 x n WSS with a broadcast 1 x n coupler.
  bool coupler_input = false;

  bool operator==(const BuildOptions&) const = default;
};

/// Immutable node/edge graph of one construction stage.
///
/// The constructor indexes whatever it is given, including malformed graphs;
/// use validate_topology() to find out whether the invariants hold.
class FabricTopology {
 public:
  FabricTopology(FabricParams params, Stage stage, BuildOptions options, std::vector<Node> nodes,
                 std::vector<FiberEdge> edges);

  const FabricParams& params() const { return params_; }
  Stage stage() const { return stage_; }
  const BuildOptions& options() const { return options_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<FiberEdge>& edges() const { return edges_; }
  const Node& node(NodeIndex i) const { return nodes_.at(i); }
  const FiberEdge& edge(EdgeIndex i) const { return edges_.at(i); }

  std::optional<NodeIndex> find(const NodeId& id) const;
  std::optional<EdgeIndex> out_edge(NodeIndex node, int port) const;
  std::optional<EdgeIndex> in_edge(NodeIndex node, int port) const;
  // Internal element of an unsealed module standing for the given module port.
  std::optional<NodeIndex> module_element(NodeIndex module, Side side, int port) const;

  std::size_t count_edges(EdgeKind kind) const;

 private:
  FabricParams params_;
  Stage stage_;
  BuildOptions options_;
  std::vector<Node> nodes_;
  std::vector<FiberEdge> edges_;
  std::map<NodeId, NodeIndex> index_;
  std::vector<std::vector<std::optional<EdgeIndex>>> out_;
  std::vector<std::vector<std::optional<EdgeIndex>>> in_;
  std::map<std::pair<NodeIndex, std::pair<Side, int>>, NodeIndex> module_elements_;
};

bool operator==(const FabricTopology& a, const FabricTopology& b);

/// Incremental construction helper used by every builder in the library.
class TopologyBuilder {
 public:
  NodeIndex add_node(NodeId id, Element element, int fan_in, int fan_out,
                     std::optional<ModulePort> realizes = std::nullopt);
  EdgeIndex add_edge(PortRef from, PortRef to, EdgeKind kind,
                     std::optional<Address> tag = std::nullopt,
                     std::optional<std::pair<int, int>> subnetwork = std::nullopt);
  NodeIndex at(const NodeId& id) const;

  FabricTopology build(FabricParams params, Stage stage, BuildOptions options = {}) &&;

 private:
  std::vector<Node> nodes_;
  std::vector<FiberEdge> edges_;
  std::map<NodeId, NodeIndex> index_;
};

struct Violation {
  std::string subject;
  std::string message;
};

std::vector<Violation> validate_topology(const FabricTopology& t);

/// Every distinct edge sequence from external input `input` to external
/// output `output`, found by graph search (independent of address routing).
/// WSS and coupler nodes connect any input to any output; a sealed module
/// does the same, an unsealed one is entered through its internal elements.
std::vector<std::vector<EdgeIndex>> enumerate_paths(const FabricTopology& t, int input, int output);

/// paths[p][q] = number of distinct paths from input p to output q.
std::vector<std::vector<std::size_t>> reachability_matrix(const FabricTopology& t);

std::string to_string(Stage s);
std::string to_string(NodeKind k);
std::string to_string(Element e);
std::string to_string(EdgeKind k);
std::string describe(const NodeId& id);

}  // namespace oxc
