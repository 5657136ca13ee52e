#include "oxc/metrics.hpp"

#include <cmath>
#include <numeric>

#include "oxc/errors.hpp"

namespace oxc {

Rational Rational::of(std::int64_t num, std::int64_t den) {
  if (den == 0) throw InvalidParameter("zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
}

std::string Rational::to_string() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

std::string to_string(FabricKind k) { return k == FabricKind::Classical ? "classical" : "modular"; }

CablingReport cabling_report(FabricKind kind, const FabricParams& params, bool sealed_modules) {
  params.validate();
  const std::int64_t N = params.N;
  const std::int64_t n = params.n;
  const std::int64_t r = params.r;
  CablingReport c{kind, params.N, params.n, params.r, 0, 0, 0, {}};
  if (kind == FabricKind::Classical) {
    c.stage_fibers = N * N;
    c.total_external_cables = c.stage_fibers;
  } else {
    c.stage_fibers = 2 * N * n;
    c.internal_module_fibers = n * n * r * r;
    c.total_external_cables = c.stage_fibers + (sealed_modules ? 0 : c.internal_module_fibers);
  }
  c.ratio_to_classical = Rational::of(c.stage_fibers, N * N);
  return c;
}

CablingReport measure_cabling(const FabricTopology& fabric) {
  const auto& p = fabric.params();
  const FabricKind kind = fabric.stage() == Stage::Classical ? FabricKind::Classical : FabricKind::Modular;
  if (fabric.stage() != Stage::Classical && fabric.stage() != Stage::Modular) {
    throw WrongStage("cabling is reported for classical and modular fabrics only");
  }
  CablingReport c{kind, p.N, p.n, p.r, 0, 0, 0, {}};
  c.stage_fibers = static_cast<std::int64_t>(fabric.count_edges(EdgeKind::Stage));
  c.internal_module_fibers = static_cast<std::int64_t>(fabric.count_edges(EdgeKind::Internal));
  if (fabric.stage() == Stage::Modular && fabric.options().sealed) {
    // Sealed modules hide their r^2 fibers; count them from the module sizes.
    for (const auto& nd : fabric.nodes()) {
      if (nd.element == Element::Module) c.internal_module_fibers += std::int64_t{nd.fan_in} * nd.fan_out;
    }
    c.total_external_cables = c.stage_fibers;
  } else {
    c.total_external_cables = c.stage_fibers + c.internal_module_fibers;
  }
  c.ratio_to_classical = Rational::of(c.stage_fibers, std::int64_t{p.N} * p.N);
  return c;
}

std::int64_t square_factorization_cables(int N) {
  if (N < 1) throw InvalidParameter("N must be positive");
  std::int64_t k = 0;
  while ((k + 1) * (k + 1) <= N) ++k;
  if (k * k != N) throw InvalidParameter(std::to_string(N) + " is not a perfect square");
  return 2 * std::int64_t{N} * k;
}

double coupler_loss_db(int ports) {
  if (ports < 1) throw InvalidParameter("coupler needs at least one port");
  return 10.0 * std::log10(static_cast<double>(ports));
}

namespace {

void add(LossBudget& b, std::string element, double db) {
  b.terms.push_back({std::move(element), db});
  b.total_db += db;
  ++b.stages_traversed;
}

}  // namespace

LossBudget loss_budget(FabricKind kind, int n, int r, bool coupler_input, const LossOptions& options) {
  if (n < 1 || r < 1) throw InvalidParameter("n and r must be positive");
  LossBudget b;
  b.per_wss_db = options.wss_db;
  const std::string sn = std::to_string(n);
  const std::string sr = std::to_string(r);
  if (kind == FabricKind::Classical) {
    const std::string sN = std::to_string(n * r);
    add(b, "1x" + sN + " WSS", options.wss_db);
    add(b, sN + "x1 WSS", options.wss_db);
  } else {
    if (coupler_input) {
      add(b, "1x" + sn + " coupler", coupler_loss_db(n));
    } else {
      add(b, "1x" + sn + " WSS", options.wss_db);
    }
    add(b, "1x" + sr + " WSS", options.wss_db);
    add(b, sr + "x1 WSS", options.wss_db);
    add(b, sn + "x1 WSS", options.wss_db);
  }
  if (options.connector_db != 0.0) {
    b.terms.push_back({"fiber and connectors", options.connector_db});
    b.total_db += options.connector_db;
  }
  return b;
}

LossBudget path_loss(const FabricTopology& fabric, const RoutedPath& path, const LossOptions& options) {
  LossBudget b;
  b.per_wss_db = options.wss_db;
  for (const auto& hop : path.hops) {
    const Node& nd = fabric.node(hop.node);
    const std::string size = std::to_string(nd.fan_in) + "x" + std::to_string(nd.fan_out);
    switch (nd.element) {
      case Element::Port:
        break;
      case Element::Wss:
        add(b, size + " WSS " + format_label(std::span<const int>(nd.id.label)), options.wss_db);
        break;
      case Element::Coupler:
        add(b, size + " coupler " + format_label(std::span<const int>(nd.id.label)),
            coupler_loss_db(std::max(nd.fan_in, nd.fan_out)));
        break;
      case Element::Module:
        // A sealed module is a 1xr stage followed by an rx1 stage.
        add(b, "module " + describe(nd.id) + " input WSS", options.wss_db);
        add(b, "module " + describe(nd.id) + " output WSS", options.wss_db);
        break;
    }
  }
  if (options.connector_db != 0.0) {
    b.terms.push_back({"fiber and connectors", options.connector_db});
    b.total_db += options.connector_db;
  }
  return b;
}

ComponentCensus component_census(const FabricParams& params) {
  params.validate();
  return {params.N, params.N, params.n * params.n, params.n, params.n, params.r};
}

ComponentCensus measure_census(const FabricTopology& fabric) {
  if (fabric.stage() != Stage::Modular) throw WrongStage("census is defined for modular fabrics");
  ComponentCensus c;
  for (const auto& nd : fabric.nodes()) {
    if (nd.realizes) continue;
    if (nd.id.kind == NodeKind::InputWss) {
      ++c.input_wss;
      c.input_fan_out = nd.fan_out;
    } else if (nd.id.kind == NodeKind::OutputWss) {
      ++c.output_wss;
      c.output_fan_in = nd.fan_in;
    } else if (nd.id.kind == NodeKind::OxcModule) {
      ++c.modules;
      c.module_size = nd.fan_in;
    }
  }
  return c;
}

}  // namespace oxc
