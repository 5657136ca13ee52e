#include "oxc/routing.hpp"

#include <algorithm>
#include <set>

#include "oxc/errors.hpp"

namespace oxc {

ConnectionRequest ConnectionRequest::modular(SplitIndex input, SplitIndex output, Wavelength wl,
                                             const FabricParams& params) {
  return {flatten_index(input, params.r, params.n), flatten_index(output, params.r, params.n), wl};
}

void check_request(const FabricTopology& fabric, const ConnectionRequest& req) {
  const auto& p = fabric.params();
  if (req.input < 0 || req.input >= p.N) {
    throw AddressOutOfRange("input " + std::to_string(req.input) + " outside [0," + std::to_string(p.N) + ")");
  }
  if (req.output < 0 || req.output >= p.N) {
    throw AddressOutOfRange("output " + std::to_string(req.output) + " outside [0," + std::to_string(p.N) + ")");
  }
  if (req.wavelength.index < 0 || req.wavelength.index >= p.w) {
    throw AddressOutOfRange("wavelength " + std::to_string(req.wavelength.index) + " outside [0," +
                            std::to_string(p.w) + ")");
  }
}

namespace {

// Walks the fabric along the hops dictated by the addresses, checking that
// every fiber lands where self-routing says it must.
class Tracer {
 public:
  Tracer(const FabricTopology& t, Wavelength wl) : t_(t) { path_.wavelength = wl; }

  void begin(const NodeId& id) { path_.hops.push_back({lookup(id), std::nullopt, std::nullopt}); }

  void cross(int out_port, const NodeId& next, int next_port) {
    cross_from(path_.hops.back().node, out_port, lookup(next), next_port);
  }

  void cross_to(int out_port, NodeIndex next, int next_port) {
    cross_from(path_.hops.back().node, out_port, next, next_port);
  }

  // Leave through `from` (a module whose internal element is the current hop).
  void cross_from(NodeIndex from, int out_port, NodeIndex next, int next_port) {
    path_.hops.back().out_port = from == path_.hops.back().node ? out_port : 0;
    auto e = t_.out_edge(from, out_port);
    if (!e) {
      throw FabricFault("no fiber at output " + std::to_string(out_port) + " of " +
                        describe(t_.node(from).id));
    }
    const FiberEdge& fe = t_.edge(*e);
    if (fe.to.node != next || fe.to.port != next_port) {
      throw FabricFault("fiber from output " + std::to_string(out_port) + " of " +
                        describe(t_.node(from).id) + " lands at input " + std::to_string(fe.to.port) +
                        " of " + name(fe.to.node) + ", expected input " + std::to_string(next_port) +
                        " of " + describe(t_.node(next).id));
    }
    path_.edges.push_back(*e);
    path_.hops.push_back({next, next_port, std::nullopt});
  }

  // Replaces the module hop just entered with the internal element behind
  // that module input.
  void enter(NodeIndex element) { path_.hops.back() = {element, 0, std::nullopt}; }

  NodeIndex current() const { return path_.hops.back().node; }
  int current_in() const { return *path_.hops.back().in_port; }
  void set_out(int port) { path_.hops.back().out_port = port; }

  NodeIndex lookup(const NodeId& id) const {
    auto i = t_.find(id);
    if (!i) throw FabricFault("fabric has no " + describe(id));
    return *i;
  }

  RoutedPath finish() && { return std::move(path_); }

 private:
  std::string name(NodeIndex i) const {
    return i < t_.nodes().size() ? describe(t_.node(i).id) : "node " + std::to_string(i);
  }

  const FabricTopology& t_;
  RoutedPath path_;
};

NodeId ext_in(int p) { return {NodeKind::ExternalInput, {p}}; }
NodeId ext_out(int q) { return {NodeKind::ExternalOutput, {q}}; }
NodeId in_wss(std::vector<int> l) { return {NodeKind::InputWss, std::move(l)}; }
NodeId out_wss(std::vector<int> l) { return {NodeKind::OutputWss, std::move(l)}; }

}  // namespace

RoutedPath resolve_path(const FabricTopology& fabric, const ConnectionRequest& req) {
  check_request(fabric, req);
  const int r = fabric.params().r;
  const int p = req.input;
  const int q = req.output;
  const int a = p / r, pp = p % r;
  const int b = q / r, qq = q % r;

  Tracer tr(fabric, req.wavelength);
  tr.begin(ext_in(p));
  switch (fabric.stage()) {
    case Stage::Classical:
      // Input WSS p -> fiber f(pq,qp) -> output WSS q.
      tr.cross(0, in_wss({p}), 0);
      tr.cross(q, out_wss({q}), p);
      break;
    case Stage::IntermediatePrime:
      tr.cross(0, in_wss({a, pp}), 0);
      tr.cross(b * r + qq, out_wss({b, qq}), a * r + pp);
      break;
    case Stage::IntermediateDoublePrime:
      tr.cross(0, in_wss({a, pp}), 0);
      tr.cross(b, in_wss({a, pp, b}), 0);
      tr.cross(qq, out_wss({b, qq, a}), pp);
      tr.cross(0, out_wss({b, qq}), a);
      break;
    case Stage::Modular: {
      // Input WSS ap' -> output b -> input p' of Q_ab -> output q' of Q_ab
      // -> input a of output WSS bq'.
      tr.cross(0, in_wss({a, pp}), 0);
      tr.cross(b, NodeId{NodeKind::OxcModule, {a, b}}, pp);
      const NodeIndex module = tr.current();
      if (!fabric.options().sealed) {
        auto first = fabric.module_element(module, Side::Input, pp);
        auto last = fabric.module_element(module, Side::Output, qq);
        if (!first || !last) {
          throw FabricFault("unsealed module " + describe(fabric.node(module).id) +
                            " is missing an internal element");
        }
        tr.enter(*first);
        tr.cross_to(qq, *last, pp);
        tr.cross_from(module, qq, tr.lookup(out_wss({b, qq})), a);
      } else {
        tr.cross(qq, out_wss({b, qq}), a);
      }
      break;
    }
  }
  tr.cross(0, ext_out(q), 0);
  return std::move(tr).finish();
}

std::vector<EdgeIndex> lit_edges(const FabricTopology& fabric, const RoutedPath& path) {
  std::vector<EdgeIndex> lit = path.edges;
  for (const auto& h : path.hops) {
    const Node& nd = fabric.node(h.node);
    if (nd.element != Element::Coupler) continue;
    for (int o = 0; o < nd.fan_out; ++o) {
      if (auto e = fabric.out_edge(h.node, o)) lit.push_back(*e);
    }
  }
  std::sort(lit.begin(), lit.end());
  lit.erase(std::unique(lit.begin(), lit.end()), lit.end());
  return lit;
}

std::size_t stage_fiber_count(const FabricTopology& fabric, const RoutedPath& path) {
  return static_cast<std::size_t>(std::count_if(path.edges.begin(), path.edges.end(), [&](EdgeIndex e) {
    return fabric.edge(e).kind == EdgeKind::Stage;
  }));
}

// --- session state -----------------------------------------------------------

WavelengthState::WavelengthState(const FabricTopology& fabric)
    : w_(fabric.params().w),
      edge_count_(fabric.edges().size()),
      node_count_(fabric.nodes().size()),
      occupancy_(edge_count_ * static_cast<std::size_t>(w_), 0),
      elements_(node_count_ * static_cast<std::size_t>(w_)) {}

std::size_t WavelengthState::slot(EdgeIndex e, Wavelength wl) const {
  return e * static_cast<std::size_t>(w_) + static_cast<std::size_t>(wl.index);
}

std::size_t WavelengthState::element_slot(NodeIndex n, Wavelength wl) const {
  return n * static_cast<std::size_t>(w_) + static_cast<std::size_t>(wl.index);
}

std::optional<ConnectionId> WavelengthState::holder(EdgeIndex edge, Wavelength wl) const {
  auto v = occupancy_.at(slot(edge, wl));
  if (v == 0) return std::nullopt;
  return ConnectionId{v};
}

const std::vector<PortAssignment>& WavelengthState::selections(NodeIndex node, Wavelength wl) const {
  return elements_.at(element_slot(node, wl));
}

namespace {

bool switching(Element e) { return e == Element::Wss || e == Element::Coupler || e == Element::Module; }

}  // namespace

ConnectionId WavelengthState::commit(const FabricTopology& fabric, const ConnectionRequest& req,
                                     RoutedPath path) {
  if (fabric.edges().size() != edge_count_ || fabric.nodes().size() != node_count_ ||
      fabric.params().w != w_) {
    throw std::logic_error("routing state belongs to a different fabric");
  }
  const Wavelength wl = req.wavelength;
  if (path.edges.empty()) throw FabricFault("empty path");
  if (auto h = holder(path.edges.front(), wl)) {
    throw WavelengthBusyAtEndpoint("wavelength " + std::to_string(wl.index) + " already in use at input " +
                                   std::to_string(req.input) + " (connection " +
                                   std::to_string(h->value) + ")");
  }
  if (auto h = holder(path.edges.back(), wl)) {
    throw WavelengthBusyAtEndpoint("wavelength " + std::to_string(wl.index) + " already in use at output " +
                                   std::to_string(req.output) + " (connection " +
                                   std::to_string(h->value) + ")");
  }

  std::vector<EdgeIndex> lit = lit_edges(fabric, path);
  for (EdgeIndex e : lit) {
    if (auto h = holder(e, wl)) {
      const auto& fe = fabric.edge(e);
      std::string name = "fiber " + std::to_string(e);
      if (fe.tag) name += " f(" + to_string(*fe.tag) + "," + to_string(counterpart(*fe.tag)) + ")";
      throw InternalContention(name + " already carries wavelength " + std::to_string(wl.index) +
                               " for connection " + std::to_string(h->value));
    }
  }
  for (const auto& hop : path.hops) {
    const Node& nd = fabric.node(hop.node);
    if (!switching(nd.element) || !hop.in_port || !hop.out_port) continue;
    for (const auto& s : selections(hop.node, wl)) {
      bool clash = s.in_port == *hop.in_port ||
                   (nd.element != Element::Coupler && s.out_port == *hop.out_port);
      if (clash) {
        throw InternalContention(describe(nd.id) + " already switches wavelength " +
                                 std::to_string(wl.index) + " for connection " +
                                 std::to_string(s.owner.value));
      }
    }
  }

  const ConnectionId id{next_id_++};
  for (EdgeIndex e : lit) occupancy_[slot(e, wl)] = id.value;
  for (const auto& hop : path.hops) {
    const Node& nd = fabric.node(hop.node);
    if (!switching(nd.element) || !hop.in_port || !hop.out_port) continue;
    elements_[element_slot(hop.node, wl)].push_back({*hop.in_port, *hop.out_port, id});
  }
  active_.emplace(id, ActiveConnection{req, std::move(path), std::move(lit)});
  return id;
}

RoutedPath WavelengthState::release(ConnectionId id) {
  auto it = active_.find(id);
  if (it == active_.end()) throw UnknownConnection("no active connection " + std::to_string(id.value));
  const Wavelength wl = it->second.request.wavelength;
  for (EdgeIndex e : it->second.lit) occupancy_[slot(e, wl)] = 0;
  for (const auto& hop : it->second.path.hops) {
    auto& sel = elements_[element_slot(hop.node, wl)];
    sel.erase(std::remove_if(sel.begin(), sel.end(), [&](const PortAssignment& s) { return s.owner == id; }),
              sel.end());
  }
  RoutedPath path = std::move(it->second.path);
  active_.erase(it);
  return path;
}

bool WavelengthState::operator==(const WavelengthState& other) const {
  return w_ == other.w_ && occupancy_ == other.occupancy_ && elements_ == other.elements_ &&
         active_ == other.active_;
}

ConnectionId setup(WavelengthState& state, const FabricTopology& fabric, const ConnectionRequest& req) {
  RoutedPath path = resolve_path(fabric, req);
  return state.commit(fabric, req, std::move(path));
}

RoutedPath teardown(WavelengthState& state, ConnectionId id) { return state.release(id); }

std::vector<std::string> check_state(const WavelengthState& state, const FabricTopology& fabric) {
  std::vector<std::string> out;
  const int w = state.wavelengths();
  std::map<std::pair<EdgeIndex, int>, std::uint64_t> expected;
  std::map<std::pair<NodeIndex, int>, std::multiset<std::tuple<int, int, std::uint64_t>>> expected_sel;
  for (const auto& [id, conn] : state.active()) {
    const int wl = conn.request.wavelength.index;
    if (lit_edges(fabric, conn.path) != conn.lit) {
      out.push_back("connection " + std::to_string(id.value) + ": lit fibers differ from its path");
    }
    for (EdgeIndex e : conn.lit) {
      auto [it, fresh] = expected.emplace(std::make_pair(e, wl), id.value);
      if (!fresh) {
        out.push_back("fiber " + std::to_string(e) + " shared by connections " +
                      std::to_string(it->second) + " and " + std::to_string(id.value) +
                      " at wavelength " + std::to_string(wl));
      }
    }
    for (const auto& hop : conn.path.hops) {
      const Node& nd = fabric.node(hop.node);
      if (!switching(nd.element) || !hop.in_port || !hop.out_port) continue;
      expected_sel[{hop.node, wl}].insert({*hop.in_port, *hop.out_port, id.value});
    }
  }
  for (EdgeIndex e = 0; e < fabric.edges().size(); ++e) {
    for (int wl = 0; wl < w; ++wl) {
      auto h = state.holder(e, Wavelength{wl});
      auto it = expected.find({e, wl});
      std::uint64_t want = it == expected.end() ? 0 : it->second;
      std::uint64_t got = h ? h->value : 0;
      if (want != got) {
        out.push_back("fiber " + std::to_string(e) + " wavelength " + std::to_string(wl) +
                      ": occupancy " + std::to_string(got) + ", expected " + std::to_string(want));
      }
    }
  }
  for (NodeIndex n = 0; n < fabric.nodes().size(); ++n) {
    for (int wl = 0; wl < w; ++wl) {
      std::multiset<std::tuple<int, int, std::uint64_t>> got;
      for (const auto& s : state.selections(n, Wavelength{wl})) got.insert({s.in_port, s.out_port, s.owner.value});
      auto it = expected_sel.find({n, wl});
      const auto& want = it == expected_sel.end() ? decltype(got){} : it->second;
      if (got != want) {
        out.push_back(describe(fabric.node(n).id) + " wavelength " + std::to_string(wl) +
                      ": element selections do not match active paths");
      }
    }
  }
  return out;
}

}  // namespace oxc
