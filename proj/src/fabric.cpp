#include "oxc/fabric.hpp"

#include "oxc/errors.hpp"
#include "oxc/shuffle.hpp"

namespace oxc {

namespace {

NodeId ext_in(int p) { return {NodeKind::ExternalInput, {p}}; }
NodeId ext_out(int q) { return {NodeKind::ExternalOutput, {q}}; }
NodeId in_wss(std::vector<int> label) { return {NodeKind::InputWss, std::move(label)}; }
NodeId out_wss(std::vector<int> label) { return {NodeKind::OutputWss, std::move(label)}; }
NodeId module_id(int a, int b) { return {NodeKind::OxcModule, {a, b}}; }

void require_stage(const FabricTopology& t, Stage expected, const char* op) {
  if (t.stage() != expected) {
    throw WrongStage(std::string(op) + " needs a " + to_string(expected) + " topology, got " +
                     to_string(t.stage()));
  }
}

void require_endpoints(const FabricTopology& t, const FiberEdge& e) {
  if (e.from.node >= t.nodes().size() || e.to.node >= t.nodes().size()) {
    throw FabricFault("edge " + std::to_string(e.id) + " has a dangling endpoint");
  }
}

}  // namespace

FabricTopology build_classical(int N, int w) {
  const FabricParams params = FabricParams::classical(N, w);
  TopologyBuilder b;
  for (int p = 0; p < N; ++p) b.add_node(ext_in(p), Element::Port, 0, 1);
  for (int p = 0; p < N; ++p) b.add_node(in_wss({p}), Element::Wss, 1, N);
  for (int q = 0; q < N; ++q) b.add_node(out_wss({q}), Element::Wss, N, 1);
  for (int q = 0; q < N; ++q) b.add_node(ext_out(q), Element::Port, 1, 0);

  for (int p = 0; p < N; ++p) b.add_edge({b.at(ext_in(p)), 0}, {b.at(in_wss({p})), 0}, EdgeKind::External);
  // Output q of input WSS p is input pq of S(N); input p of output WSS q is
  // output qp.
  for (const auto& f : build_shuffle(N).fibers) {
    b.add_edge({b.at(in_wss({f.input.group})), f.input.port},
               {b.at(out_wss({f.output.group})), f.output.port}, EdgeKind::Stage, Address{f.input});
  }
  for (int q = 0; q < N; ++q) b.add_edge({b.at(out_wss({q})), 0}, {b.at(ext_out(q)), 0}, EdgeKind::External);
  return std::move(b).build(params, Stage::Classical);
}

FabricTopology phase1_substitute(int N, int n, int r, int w) {
  const FabricParams params = FabricParams::checked(N, n, r, w);
  TopologyBuilder b;
  for (int p = 0; p < N; ++p) b.add_node(ext_in(p), Element::Port, 0, 1);
  for (int p = 0; p < N; ++p) b.add_node(in_wss({p / r, p % r}), Element::Wss, 1, N);
  for (int q = 0; q < N; ++q) b.add_node(out_wss({q / r, q % r}), Element::Wss, N, 1);
  for (int q = 0; q < N; ++q) b.add_node(ext_out(q), Element::Port, 1, 0);

  for (int p = 0; p < N; ++p) {
    b.add_edge({b.at(ext_in(p)), 0}, {b.at(in_wss({p / r, p % r})), 0}, EdgeKind::External);
  }
  for (const auto& f : trace_fibers(build_modular_shuffle(n, r))) {
    if (!f.output || !f.via) throw std::logic_error("modular shuffle is not fully wired: " + f.note);
    const auto& in = f.input;
    const auto& out = *f.output;
    b.add_edge({b.at(in_wss({in.group.block, in.group.offset})), in.port.block * r + in.port.offset},
               {b.at(out_wss({out.group.block, out.group.offset})), out.port.block * r + out.port.offset},
               EdgeKind::Stage, Address{in}, std::make_pair(f.via->a, f.via->b));
  }
  for (int q = 0; q < N; ++q) {
    b.add_edge({b.at(out_wss({q / r, q % r})), 0}, {b.at(ext_out(q)), 0}, EdgeKind::External);
  }
  return std::move(b).build(params, Stage::IntermediatePrime);
}

FabricTopology phase2_decompose(const FabricTopology& prime) {
  require_stage(prime, Stage::IntermediatePrime, "phase2_decompose");
  const FabricParams& params = prime.params();
  const int n = params.n;
  const int r = params.r;
  const auto& nodes = prime.nodes();

  auto is = [&](const Node& nd, NodeKind k) { return nd.id.kind == k; };
  auto wss_label = [](const Node& nd) {
    if (nd.id.label.size() != 2) throw FabricFault("expected a two-part WSS label, got " + describe(nd.id));
    return nd.id.label;
  };

  TopologyBuilder b;
  for (const auto& nd : nodes) {
    if (is(nd, NodeKind::ExternalInput)) b.add_node(nd.id, Element::Port, 0, 1);
  }
  for (const auto& nd : nodes) {
    if (is(nd, NodeKind::InputWss)) b.add_node(in_wss(wss_label(nd)), Element::Wss, 1, n);
  }
  for (const auto& nd : nodes) {
    if (!is(nd, NodeKind::InputWss)) continue;
    auto l = wss_label(nd);
    for (int bb = 0; bb < n; ++bb) b.add_node(in_wss({l[0], l[1], bb}), Element::Wss, 1, r);
  }
  for (const auto& nd : nodes) {
    if (!is(nd, NodeKind::OutputWss)) continue;
    auto l = wss_label(nd);
    for (int a = 0; a < n; ++a) b.add_node(out_wss({l[0], l[1], a}), Element::Wss, r, 1);
  }
  for (const auto& nd : nodes) {
    if (is(nd, NodeKind::OutputWss)) b.add_node(out_wss(wss_label(nd)), Element::Wss, n, 1);
  }
  for (const auto& nd : nodes) {
    if (is(nd, NodeKind::ExternalOutput)) b.add_node(nd.id, Element::Port, 1, 0);
  }

  const auto& edges = prime.edges();
  for (const auto& e : edges) {
    require_endpoints(prime, e);
    if (is(prime.node(e.from.node), NodeKind::ExternalInput)) {
      b.add_edge({b.at(prime.node(e.from.node).id), e.from.port},
                 {b.at(prime.node(e.to.node).id), e.to.port}, EdgeKind::External);
    }
  }
  for (const auto& nd : nodes) {
    if (!is(nd, NodeKind::InputWss)) continue;
    auto l = wss_label(nd);
    for (int bb = 0; bb < n; ++bb) {
      b.add_edge({b.at(in_wss(l)), bb}, {b.at(in_wss({l[0], l[1], bb})), 0}, EdgeKind::Stage);
    }
  }
  // Output b*r+q' of 1xN WSS ap' is port q' of 1xr WSS ap'b; input a*r+p'
  // of Nx1 WSS bq' is port p' of rx1 WSS bq'a.
  for (const auto& e : edges) {
    const Node& src = prime.node(e.from.node);
    const Node& dst = prime.node(e.to.node);
    if (!is(src, NodeKind::InputWss) || !is(dst, NodeKind::OutputWss)) continue;
    auto sl = wss_label(src);
    auto dl = wss_label(dst);
    b.add_edge({b.at(in_wss({sl[0], sl[1], e.from.port / r})), e.from.port % r},
               {b.at(out_wss({dl[0], dl[1], e.to.port / r})), e.to.port % r}, EdgeKind::Stage, e.tag,
               e.subnetwork);
  }
  for (const auto& nd : nodes) {
    if (!is(nd, NodeKind::OutputWss)) continue;
    auto l = wss_label(nd);
    for (int a = 0; a < n; ++a) {
      b.add_edge({b.at(out_wss({l[0], l[1], a})), 0}, {b.at(out_wss(l)), a}, EdgeKind::Stage);
    }
  }
  for (const auto& e : edges) {
    if (is(prime.node(e.to.node), NodeKind::ExternalOutput)) {
      b.add_edge({b.at(prime.node(e.from.node).id), e.from.port},
                 {b.at(prime.node(e.to.node).id), e.to.port}, EdgeKind::External);
    }
  }
  return std::move(b).build(params, Stage::IntermediateDoublePrime);
}

FabricTopology phase3_merge(const FabricTopology& dp, BuildOptions options) {
  require_stage(dp, Stage::IntermediateDoublePrime, "phase3_merge");
  const FabricParams& params = dp.params();
  const int n = params.n;
  const int r = params.r;
  const auto& nodes = dp.nodes();

  auto kind_len = [](const Node& nd, NodeKind k, std::size_t len) {
    return nd.id.kind == k && nd.id.label.size() == len;
  };

  TopologyBuilder b;
  for (const auto& nd : nodes) {
    if (nd.id.kind == NodeKind::ExternalInput) b.add_node(nd.id, Element::Port, 0, 1);
  }
  for (const auto& nd : nodes) {
    if (kind_len(nd, NodeKind::InputWss, 2)) {
      b.add_node(nd.id, options.coupler_input ? Element::Coupler : Element::Wss, 1, n);
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int bb = 0; bb < n; ++bb) {
      b.add_node(module_id(a, bb), Element::Module, r, r);
      if (options.sealed) continue;
      for (int pp = 0; pp < r; ++pp) {
        b.add_node(in_wss({a, pp, bb}), Element::Wss, 1, r, ModulePort{a, bb, Side::Input, pp});
      }
      for (int qq = 0; qq < r; ++qq) {
        b.add_node(out_wss({bb, qq, a}), Element::Wss, r, 1, ModulePort{a, bb, Side::Output, qq});
      }
    }
  }
  for (const auto& nd : nodes) {
    if (kind_len(nd, NodeKind::OutputWss, 2)) b.add_node(nd.id, Element::Wss, n, 1);
  }
  for (const auto& nd : nodes) {
    if (nd.id.kind == NodeKind::ExternalOutput) b.add_node(nd.id, Element::Port, 1, 0);
  }

  for (const auto& e : dp.edges()) {
    require_endpoints(dp, e);
    const Node& src = dp.node(e.from.node);
    const Node& dst = dp.node(e.to.node);
    if (src.id.kind == NodeKind::ExternalInput || dst.id.kind == NodeKind::ExternalOutput) {
      b.add_edge({b.at(src.id), e.from.port}, {b.at(dst.id), e.to.port}, EdgeKind::External);
    } else if (kind_len(src, NodeKind::InputWss, 2) && kind_len(dst, NodeKind::InputWss, 3)) {
      // 1xr WSS ap'b is input p' of Q_ab(r).
      const auto& l = dst.id.label;
      b.add_edge({b.at(src.id), e.from.port}, {b.at(module_id(l[0], l[2])), l[1]}, EdgeKind::Stage);
    } else if (kind_len(src, NodeKind::InputWss, 3) && kind_len(dst, NodeKind::OutputWss, 3)) {
      const auto& sl = src.id.label;
      const auto& dl = dst.id.label;
      if (sl[0] != dl[2] || sl[2] != dl[0]) {
        throw FabricFault("fiber from " + describe(src.id) + " to " + describe(dst.id) +
                          " crosses sub-networks and cannot be merged");
      }
      if (!options.sealed) {
        b.add_edge({b.at(src.id), e.from.port}, {b.at(dst.id), e.to.port}, EdgeKind::Internal, e.tag,
                   e.subnetwork);
      }
    } else if (kind_len(src, NodeKind::OutputWss, 3) && kind_len(dst, NodeKind::OutputWss, 2)) {
      // rx1 WSS bq'a is output q' of Q_ab(r).
      const auto& l = src.id.label;
      b.add_edge({b.at(module_id(l[2], l[0])), l[1]}, {b.at(dst.id), e.to.port}, EdgeKind::Stage);
    } else {
      throw FabricFault("unexpected edge " + describe(src.id) + " -> " + describe(dst.id) +
                        " in a double-prime topology");
    }
  }
  return std::move(b).build(params, Stage::Modular, options);
}

FabricTopology build_modular(int n, int r, int w, BuildOptions options) {
  const FabricParams params = FabricParams::modular(n, r, w);
  return phase3_merge(phase2_decompose(phase1_substitute(params.N, n, r, w)), options);
}

FabricTopology build_stage(Stage stage, const FabricParams& params, BuildOptions options) {
  params.validate();
  switch (stage) {
    case Stage::Classical:
      return build_classical(params.N, params.w);
    case Stage::IntermediatePrime:
      return phase1_substitute(params.N, params.n, params.r, params.w);
    case Stage::IntermediateDoublePrime:
      return phase2_decompose(phase1_substitute(params.N, params.n, params.r, params.w));
    case Stage::Modular:
      return build_modular(params.n, params.r, params.w, options);
  }
  throw InvalidParameter("unknown stage");
}

}  // namespace oxc
