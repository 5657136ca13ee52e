#include "oxc/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "oxc/errors.hpp"
#include "oxc/fabric.hpp"
#include "oxc/io.hpp"
#include "oxc/metrics.hpp"
#include "oxc/routing.hpp"
#include "oxc/shuffle.hpp"
#include "oxc/verify.hpp"

namespace oxc {

namespace {

struct FabricArgs {
  std::optional<int> N;
  std::optional<int> n;
  std::optional<int> r;
  int w = 1;
  std::string stage;
  bool sealed = false;
  bool coupler = false;
  std::string fabric_file;
};

void add_size_options(CLI::App* cmd, FabricArgs& a) {
  cmd->add_option("--N", a.N, "port count (classical fabric when given alone)")->check(CLI::PositiveNumber);
  cmd->add_option("--n", a.n, "number of periods")->check(CLI::PositiveNumber);
  cmd->add_option("--r", a.r, "period length (module size)")->check(CLI::PositiveNumber);
}

void add_fabric_options(CLI::App* cmd, FabricArgs& a, bool with_file) {
  add_size_options(cmd, a);
  cmd->add_option("--w", a.w, "wavelengths per fiber")->check(CLI::PositiveNumber);
  cmd->add_option("--stage", a.stage, "classical | prime | double-prime | modular")
      ->check(CLI::IsMember({"classical", "prime", "double-prime", "modular"}));
  cmd->add_flag("--sealed", a.sealed, "model each module as an opaque crossbar");
  cmd->add_flag("--coupler", a.coupler, "broadcast couplers instead of input 1xn WSSs");
  if (with_file) cmd->add_option("--fabric", a.fabric_file, "exported fabric document")->check(CLI::ExistingFile);
}

FabricParams resolve_params(const FabricArgs& a) {
  if (a.n || a.r) {
    if (!a.n || !a.r) throw InvalidParameter("--n and --r must be given together");
    if (a.N) return FabricParams::checked(*a.N, *a.n, *a.r, a.w);
    return FabricParams::modular(*a.n, *a.r, a.w);
  }
  if (!a.N) throw InvalidParameter("give --N, or --n and --r");
  return FabricParams::classical(*a.N, a.w);
}

Stage resolve_stage(const FabricArgs& a) {
  if (!a.stage.empty()) return parse_stage(a.stage);
  return (a.n || a.r) ? Stage::Modular : Stage::Classical;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImportError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

FabricTopology load_fabric(const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ImportError(path + ": " + e.what());
  }
  return import_json(doc);
}

FabricTopology obtain_fabric(const FabricArgs& a) {
  if (!a.fabric_file.empty()) {
    if (a.N || a.n || a.r) throw InvalidParameter("--fabric excludes --N/--n/--r");
    return load_fabric(a.fabric_file);
  }
  const FabricParams p = resolve_params(a);
  return build_stage(resolve_stage(a), p, BuildOptions{a.sealed, a.coupler});
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidParameter("cannot write '" + path + "'");
  f << text;
}

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string params_text(const FabricParams& p) {
  return "N=" + std::to_string(p.N) + " n=" + std::to_string(p.n) + " r=" + std::to_string(p.r) +
         " w=" + std::to_string(p.w);
}

int cmd_table(const FabricArgs& a, const std::string& format, std::ostream& out) {
  const FabricParams p = resolve_params(a);
  ConnectivityTable t = build_table(p.N);
  if (a.n) t = factorize_table(t, p.n, p.r);
  if (format == "json") {
    out << table_json(t).dump(2) << "\n";
  } else {
    out << render_table(t, format == "csv" ? TableFormat::Csv : TableFormat::Pretty);
  }
  return kExitOk;
}

int cmd_route(const FabricArgs& a, const std::string& from, const std::string& to, int lambda, std::ostream& out) {
  const FabricTopology fabric = obtain_fabric(a);
  const FabricParams& p = fabric.params();
  const ConnectionRequest req{parse_endpoint(from, p), parse_endpoint(to, p), Wavelength{lambda}};
  const RoutedPath path = resolve_path(fabric, req);
  for (const auto& line : render_trace(fabric, path)) out << line << "\n";
  const LossBudget loss = path_loss(fabric, path);
  out << "stage fibers: " << stage_fiber_count(fabric, path) << ", loss: " << fixed(loss.total_db, 2) << " dB\n";
  return kExitOk;
}

int cmd_setup_script(const FabricArgs& a, const std::string& file, std::ostream& out) {
  const FabricTopology fabric = obtain_fabric(a);
  std::ifstream in(file);
  if (!in) throw ImportError("cannot open '" + file + "'");
  const auto batch = parse_batch(in, fabric.params());
  WavelengthState state(fabric);
  std::size_t established = 0;
  std::size_t rejected = 0;
  std::size_t contention = 0;
  for (const auto& item : batch) {
    const auto& req = item.request;
    out << "line " << item.line << ": R(" << req.input << "," << req.output << "," << req.wavelength.index << ") ";
    try {
      const ConnectionId id = setup(state, fabric, req);
      ++established;
      out << "established as #" << id.value << "\n";
    } catch (const WavelengthBusyAtEndpoint& e) {
      ++rejected;
      out << "rejected: " << e.what() << "\n";
    } catch (const InternalContention& e) {
      ++contention;
      out << "BLOCKED: " << e.what() << "\n";
    }
  }
  out << established << " established, " << rejected << " rejected at endpoints, " << contention
      << " internally blocked\n";
  return contention == 0 ? kExitOk : kExitCounterexample;
}

int cmd_verify(const FabricArgs& a, const std::string& mode, std::size_t budget, std::uint64_t seed,
               std::ostream& out) {
  const FabricTopology fabric = obtain_fabric(a);
  const FabricParams& p = fabric.params();
  VerifyOptions opts;
  opts.mode = mode == "randomized" ? VerifyMode::Randomized : VerifyMode::Exhaustive;
  opts.budget = budget;
  opts.seed = seed;
  std::size_t failures = 0;

  out << "verify " << to_string(fabric.stage()) << " " << params_text(p) << " mode=" << mode << "\n";
  const auto violations = validate_topology(fabric);
  out << "topology: " << (violations.empty() ? "valid" : std::to_string(violations.size()) + " violations") << "\n";
  for (std::size_t i = 0; i < violations.size() && i < 8; ++i) {
    out << "  " << violations[i].subject << ": " << violations[i].message << "\n";
  }
  failures += violations.size();

  if (fabric.stage() == Stage::Modular && a.fabric_file.empty()) {
    const auto verdict = check_equivalence(build_modular_shuffle(p.n, p.r), p.n, p.r);
    out << "shuffle equivalence: " << (verdict.equivalent ? "equivalent" : "NOT equivalent") << " ("
        << verdict.fibers_checked << " fibers)\n";
    if (!verdict.equivalent) ++failures;
  }

  const NonblockingReport report = verify_nonblocking(fabric, p.w, opts);
  for (const auto& c : report.coverage) out << "checked: " << c << "\n";
  out << "wavelengths " << report.wavelengths_checked << ", sequences " << report.sequences << ", setups "
      << report.setups << ", extreme cases " << report.extreme_cases << ", pair checks " << report.pair_checks
      << "\n";
  for (const auto& c : report.counterexamples) {
    out << "counterexample at wavelength " << c.wavelength << ": R(" << c.input << "," << c.output << ") after {";
    for (std::size_t i = 0; i < c.established.size(); ++i) {
      out << (i ? " " : "") << "(" << c.established[i].first << "," << c.established[i].second << ")";
    }
    out << "}: " << c.reason << "\n";
  }
  out << report.counterexample_count << " counterexamples\n";
  failures += report.counterexample_count;
  return failures == 0 ? kExitOk : kExitCounterexample;
}

nlohmann::json cabling_json(const CablingReport& c) {
  return {{"kind", to_string(c.kind)},
          {"N", c.N},
          {"n", c.n},
          {"r", c.r},
          {"stage_fibers", c.stage_fibers},
          {"internal_module_fibers", c.internal_module_fibers},
          {"total_external_cables", c.total_external_cables},
          {"ratio_to_classical", c.ratio_to_classical.to_string()}};
}

nlohmann::json loss_json(const LossBudget& b) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : b.terms) terms.push_back({{"element", t.element}, {"db", t.db}});
  return {{"terms", terms}, {"stages_traversed", b.stages_traversed}, {"total_db", b.total_db}};
}

int cmd_metrics(const FabricArgs& a, const std::string& format, std::ostream& out) {
  const FabricParams p = resolve_params(a);
  const CablingReport classical = cabling_report(FabricKind::Classical, p, false);
  const CablingReport modular = cabling_report(FabricKind::Modular, p, a.sealed);
  const LossBudget classical_loss = loss_budget(FabricKind::Classical, p.n, p.r, false);
  const LossBudget modular_loss = loss_budget(FabricKind::Modular, p.n, p.r, a.coupler);
  const ComponentCensus census = component_census(p);
  std::optional<std::int64_t> square;
  try {
    square = square_factorization_cables(p.N);
  } catch (const InvalidParameter&) {
  }

  if (format == "json") {
    nlohmann::json j;
    j["params"] = {{"N", p.N}, {"n", p.n}, {"r", p.r}, {"w", p.w}};
    j["cabling"] = {cabling_json(classical), cabling_json(modular)};
    j["square_factorization_cables"] = square ? nlohmann::json(*square) : nlohmann::json(nullptr);
    j["loss"] = {{"classical", loss_json(classical_loss)}, {"modular", loss_json(modular_loss)},
                 {"coupler_input", a.coupler}};
    j["census"] = {{"input_wss", census.input_wss},         {"output_wss", census.output_wss},
                   {"modules", census.modules},             {"input_fan_out", census.input_fan_out},
                   {"output_fan_in", census.output_fan_in}, {"module_size", census.module_size}};
    out << j.dump(2) << "\n";
    return kExitOk;
  }

  out << "fabric     " << std::setw(14) << "stage fibers" << std::setw(16) << "module fibers" << std::setw(16)
      << "total cables" << std::setw(10) << "ratio" << "\n";
  for (const auto* c : {&classical, &modular}) {
    out << std::left << std::setw(11) << to_string(c->kind) << std::right << std::setw(14) << c->stage_fibers
        << std::setw(16) << c->internal_module_fibers << std::setw(16) << c->total_external_cables << std::setw(10)
        << c->ratio_to_classical.to_string() << "\n";
  }
  if (square) out << "square factorization cables (2N^1.5): " << *square << "\n";
  out << "loss classical: " << fixed(classical_loss.total_db, 2) << " dB over " << classical_loss.stages_traversed
      << " elements\n";
  out << "loss modular" << (a.coupler ? " (coupler input)" : "") << ": " << fixed(modular_loss.total_db, 2)
      << " dB over " << modular_loss.stages_traversed << " elements\n";
  out << "census: " << census.input_wss << " x 1x" << census.input_fan_out << " input "
      << (a.coupler ? "couplers" : "WSSs") << ", " << census.modules << " x " << census.module_size << "x"
      << census.module_size << " modules, " << census.output_wss << " x " << census.output_fan_in
      << "x1 output WSSs\n";
  return kExitOk;
}

int cmd_import(const std::string& file, const std::string& output, std::ostream& out) {
  const FabricTopology fabric = load_fabric(file);
  const auto violations = validate_topology(fabric);
  out << "imported " << to_string(fabric.stage()) << " fabric " << params_text(fabric.params()) << ": "
      << fabric.nodes().size() << " nodes, " << fabric.edges().size() << " edges\n";
  for (const auto& v : violations) out << "violation: " << v.subject << ": " << v.message << "\n";
  if (!output.empty()) emit(export_document(export_json(fabric)), output, out);
  if (!violations.empty()) {
    out << violations.size() << " violations\n";
    return kExitCounterexample;
  }
  out << "valid\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Synthesize, route and verify WSS-based optical cross-connects", "oxc"};
  app.require_subcommand(1);

  FabricArgs fa;
  std::string output;
  std::string format = "pretty";
  std::string mode = "exhaustive";
  std::size_t budget = 200;
  std::uint64_t seed = 1;
  std::string from;
  std::string to;
  int lambda = 0;
  std::string file;

  auto* build = app.add_subcommand("build", "emit a fabric document");
  add_fabric_options(build, fa, false);
  build->add_option("-o,--output", output, "output file (default stdout)");

  auto* table = app.add_subcommand("table", "render the connectivity table");
  add_size_options(table, fa);
  table->add_option("--format", format, "pretty | csv | json")->check(CLI::IsMember({"pretty", "csv", "json"}));

  auto* route = app.add_subcommand("route", "trace one connection hop by hop");
  add_fabric_options(route, fa, true);
  route->add_option("--from", from, "input port: flat index or (a,p')")->required();
  route->add_option("--to", to, "output port: flat index or (b,q')")->required();
  route->add_option("--lambda", lambda, "wavelength index")->check(CLI::NonNegativeNumber);

  auto* script = app.add_subcommand("setup-script", "set up a batch of requests in order");
  add_fabric_options(script, fa, true);
  script->add_option("requests", file, "file with one 'p q lambda' per line")->required()->check(CLI::ExistingFile);

  auto* verify = app.add_subcommand("verify", "check per-wavelength nonblocking");
  add_fabric_options(verify, fa, true);
  verify->add_option("--mode", mode, "exhaustive | randomized")
      ->check(CLI::IsMember({"exhaustive", "randomized"}));
  verify->add_option("--budget", budget, "sampled request sequences per wavelength");
  verify->add_option("--seed", seed, "random seed");

  auto* metrics = app.add_subcommand("metrics", "cabling, loss and component figures");
  add_fabric_options(metrics, fa, false);
  metrics->add_option("--format", format, "pretty | json")->check(CLI::IsMember({"pretty", "json"}));

  auto* dot = app.add_subcommand("export-dot", "write the fabric as a Graphviz digraph");
  add_fabric_options(dot, fa, true);
  dot->add_option("-o,--output", output, "output file (default stdout)");

  auto* import = app.add_subcommand("import", "load and validate a fabric document");
  import->add_option("document", file, "fabric document")->required()->check(CLI::ExistingFile);
  import->add_option("-o,--output", output, "re-export the imported fabric");

  try {
    app.parse(std::vector<std::string>(args.rbegin(), args.rend()));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*build) {
      emit(export_document(export_json(obtain_fabric(fa))), output, out);
      return kExitOk;
    }
    if (*table) return cmd_table(fa, format, out);
    if (*route) return cmd_route(fa, from, to, lambda, out);
    if (*script) return cmd_setup_script(fa, file, out);
    if (*verify) return cmd_verify(fa, mode, budget, seed, out);
    if (*metrics) return cmd_metrics(fa, format, out);
    if (*dot) {
      emit(to_dot(obtain_fabric(fa)), output, out);
      return kExitOk;
    }
    if (*import) return cmd_import(file, output, out);
  } catch (const FabricFault& e) {
    err << "oxc: fabric fault: " << e.what() << "\n";
    return kExitCounterexample;
  } catch (const std::exception& e) {
    err << "oxc: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace oxc
