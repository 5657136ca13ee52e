#include <doctest.h>

#include <cmath>

#include "oxc/errors.hpp"
#include "oxc/fabric.hpp"
#include "oxc/metrics.hpp"

using namespace oxc;

TEST_SUITE("metrics") {
  TEST_CASE("cabling at 160 ports") {
    const FabricParams p = FabricParams::modular(8, 20, 1);
    const auto classical = cabling_report(FabricKind::Classical, p, false);
    CHECK(classical.stage_fibers == 25600);
    CHECK(classical.ratio_to_classical == Rational{1, 1});
    const auto modular = cabling_report(FabricKind::Modular, p, true);
    CHECK(modular.stage_fibers == 2560);
    CHECK(modular.total_external_cables == 2560);
    CHECK(modular.ratio_to_classical == Rational{1, 10});
    CHECK(modular.ratio_to_classical.to_string() == "1/10");
    const auto open = cabling_report(FabricKind::Modular, p, false);
    CHECK(open.internal_module_fibers == 64 * 400);
    CHECK(open.total_external_cables == 2560 + 25600);
  }

  TEST_CASE("ratio is 2/r in lowest terms") {
    for (int n = 1; n <= 10; ++n) {
      for (int r = 1; r <= 10; ++r) {
        const auto c = cabling_report(FabricKind::Modular, FabricParams::modular(n, r, 1), true);
        CHECK(c.stage_fibers == 2 * n * r * n);
        const Rational want = Rational::of(2, r);
        CHECK(c.ratio_to_classical == want);
        CHECK(c.ratio_to_classical.num * r == 2 * c.ratio_to_classical.den);
      }
    }
    CHECK(Rational::of(4, -6) == Rational{-2, 3});
    CHECK_THROWS_AS(Rational::of(1, 0), InvalidParameter);
  }

  TEST_CASE("measured cabling matches the formulas") {
    for (int n = 1; n <= 4; ++n) {
      for (int r = 1; r <= 4; ++r) {
        const FabricParams p = FabricParams::modular(n, r, 1);
        CHECK(measure_cabling(build_modular(n, r, 1, {true, false})).stage_fibers ==
              cabling_report(FabricKind::Modular, p, true).stage_fibers);
        const auto open = measure_cabling(build_modular(n, r, 1));
        CHECK(open.total_external_cables == cabling_report(FabricKind::Modular, p, false).total_external_cables);
        CHECK(measure_cabling(build_classical(n * r, 1)).stage_fibers == n * r * n * r);
      }
    }
    CHECK_THROWS_AS(measure_cabling(build_stage(Stage::IntermediatePrime, FabricParams::modular(2, 2, 1))),
                    WrongStage);
  }

  TEST_CASE("square factorization") {
    CHECK(square_factorization_cables(4) == 16);
    CHECK(square_factorization_cables(16) == 128);
    CHECK(square_factorization_cables(64) == 1024);
    for (int k : {2, 4, 8}) {
      const int N = k * k;
      const double want = 2.0 * std::pow(N, 1.5);
      CHECK(static_cast<double>(square_factorization_cables(N)) == want);
      CHECK(cabling_report(FabricKind::Modular, FabricParams::modular(k, k, 1), true).stage_fibers ==
            square_factorization_cables(N));
    }
    CHECK_THROWS_AS(square_factorization_cables(6), InvalidParameter);
  }

  TEST_CASE("loss budgets") {
    CHECK(loss_budget(FabricKind::Classical, 1, 6, false).total_db == doctest::Approx(10.0));
    for (int n = 1; n <= 8; ++n) {
      const auto b = loss_budget(FabricKind::Modular, n, 20, false);
      CHECK(b.total_db == doctest::Approx(20.0));
      CHECK(b.stages_traversed == 4);
    }
    const auto coupler = loss_budget(FabricKind::Modular, 8, 20, true);
    CHECK(coupler.total_db == doctest::Approx(10.0 * std::log10(8.0) + 15.0));
    CHECK(coupler.total_db - 20.0 == doctest::Approx(4.0309).epsilon(1e-4));
    const auto with_fiber = loss_budget(FabricKind::Modular, 2, 3, false, {5.0, 1.5});
    CHECK(with_fiber.total_db == doctest::Approx(21.5));
    CHECK(coupler_loss_db(1) == 0.0);
  }

  TEST_CASE("path loss follows the traversed elements") {
    const auto req = ConnectionRequest{3, 2, Wavelength{0}};
    for (const BuildOptions o : {BuildOptions{false, false}, BuildOptions{true, false}}) {
      const auto t = build_modular(2, 3, 1, o);
      CHECK(path_loss(t, resolve_path(t, req)).total_db == doctest::Approx(20.0));
    }
    const auto c = build_modular(2, 3, 1, {false, true});
    CHECK(path_loss(c, resolve_path(c, req)).total_db == doctest::Approx(10.0 * std::log10(2.0) + 15.0));
    const auto k = build_classical(6, 1);
    CHECK(path_loss(k, resolve_path(k, req)).total_db == doctest::Approx(10.0));
  }

  TEST_CASE("component census") {
    CHECK(component_census(FabricParams::modular(2, 3, 1)) == ComponentCensus{6, 6, 4, 2, 2, 3});
    CHECK(component_census(FabricParams::modular(8, 20, 1)) == ComponentCensus{160, 160, 64, 8, 8, 20});
    for (int n = 1; n <= 4; ++n) {
      for (int r = 1; r <= 4; ++r) {
        const FabricParams p = FabricParams::modular(n, r, 1);
        CHECK(measure_census(build_modular(n, r, 1)) == component_census(p));
      }
    }
  }
}
