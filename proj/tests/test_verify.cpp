#include <doctest.h>

#include <random>

#include "oxc/fabric.hpp"
#include "oxc/verify.hpp"
#include "support.hpp"

using namespace oxc;

TEST_SUITE("verify") {
  TEST_CASE("classical fabrics are nonblocking at each wavelength") {
    for (int N = 1; N <= 5; ++N) {
      const auto report = verify_nonblocking(build_classical(N, 2), 2);
      CHECK_MESSAGE(report.ok(), "N=", N);
      CHECK(report.wavelengths_checked == 2);
    }
  }

  TEST_CASE("modular fabric (2,3) with three wavelengths") {
    const auto report = verify_nonblocking(build_modular(2, 3, 3), 3);
    CHECK(report.ok());
    CHECK(report.counterexamples.empty());
    CHECK(report.extreme_cases > 0);
    CHECK(report.sequences > 0);
  }

  TEST_CASE("every build variant is nonblocking") {
    for (const BuildOptions o : {BuildOptions{true, false}, BuildOptions{false, true}, BuildOptions{true, true}}) {
      CHECK(verify_nonblocking(build_modular(2, 2, 1, o), 1).ok());
      CHECK(verify_nonblocking(build_modular(3, 2, 1, o), 1).ok());
    }
    const FabricParams p = FabricParams::modular(2, 3, 1);
    CHECK(verify_nonblocking(build_stage(Stage::IntermediatePrime, p), 1).ok());
    CHECK(verify_nonblocking(build_stage(Stage::IntermediateDoublePrime, p), 1).ok());
  }

  TEST_CASE("randomized mode samples within its budget") {
    VerifyOptions o;
    o.mode = VerifyMode::Randomized;
    o.budget = 25;
    const auto report = verify_nonblocking(build_modular(4, 4, 2), 2, o);
    CHECK(report.ok());
    CHECK(report.sequences == 50);
  }

  TEST_CASE("a deleted stage fiber yields an unroutable counterexample") {
    const auto t = build_modular(2, 3, 1, {true, false});
    std::vector<FiberEdge> edges;
    std::optional<FiberEdge> removed;
    for (const auto& e : t.edges()) {
      if (!removed && e.kind == EdgeKind::Stage) {
        removed = e;
        continue;
      }
      edges.push_back(e);
      edges.back().id = edges.size() - 1;
    }
    const FabricTopology broken(t.params(), t.stage(), t.options(), t.nodes(), edges);
    const auto report = verify_nonblocking(broken, 1);
    CHECK_FALSE(report.ok());
    REQUIRE_FALSE(report.counterexamples.empty());
    CHECK(report.counterexamples.front().reason.find("unroutable") != std::string::npos);
  }

  TEST_CASE("random single-fiber faults are caught") {
    std::mt19937_64 rng(3);
    VerifyOptions o;
    o.mode = VerifyMode::Randomized;
    o.budget = 4;
    const FabricParams p = FabricParams::modular(2, 3, 1);
    const std::vector<FabricTopology> fabrics = {build_classical(6, 1), build_stage(Stage::IntermediatePrime, p),
                                                 build_stage(Stage::IntermediateDoublePrime, p),
                                                 build_modular(2, 3, 1), build_modular(2, 3, 1, {true, true})};
    for (int i = 0; i < 50; ++i) {
      testing::InjectedFault fault;
      fault.kind = i % 2 ? testing::FaultKind::Rewire : testing::FaultKind::Delete;
      const auto& base = fabrics[static_cast<std::size_t>(i) % fabrics.size()];
      const auto broken = testing::inject_fault(base, rng, fault);
      const auto report = verify_nonblocking(broken, 1, o);
      CHECK_MESSAGE(!report.ok(), to_string(base.stage()), ": ", fault.text);
      CHECK(!report.counterexamples.empty());
    }
  }

  TEST_CASE("wavelength count is bounded by the fabric") {
    CHECK_THROWS(verify_nonblocking(build_classical(3, 1), 2));
    CHECK_THROWS(verify_nonblocking(build_classical(3, 1), 0));
  }
}
