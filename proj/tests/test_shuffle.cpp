#include <doctest.h>

#include <random>
#include <set>
#include <string>

#include "oxc/errors.hpp"
#include "oxc/shuffle.hpp"
#include "support.hpp"

using namespace oxc;

namespace {

std::string digits(std::initializer_list<int> parts) {
  std::string s;
  for (int v : parts) s += std::to_string(v);
  return s;
}

}  // namespace

TEST_SUITE("shuffle") {
  TEST_CASE("S(N) wires input pq to output qp") {
    for (int N = 1; N <= 16; ++N) {
      const ShuffleNetwork s = build_shuffle(N);
      REQUIRE(s.fibers.size() == static_cast<std::size_t>(N * N));
      CHECK(shuffle_property_violations(s).empty());
    }
    // Brute-force adjacency for N = 4.
    const ShuffleNetwork s = build_shuffle(4);
    int seen = 0;
    for (int p = 0; p < 4; ++p) {
      for (int q = 0; q < 4; ++q) {
        const ShuffleFiber& f = s.fibers[static_cast<std::size_t>(p * 4 + q)];
        CHECK(f.input == GroupPortAddress{p, q, Side::Input});
        CHECK(f.output == GroupPortAddress{q, p, Side::Output});
        ++seen;
      }
    }
    CHECK(seen == 16);
    CHECK_THROWS_AS(build_shuffle(0), InvalidParameter);
  }

  TEST_CASE("property checker catches a broken network") {
    ShuffleNetwork s = build_shuffle(3);
    std::swap(s.fibers[1].output, s.fibers[2].output);
    CHECK_FALSE(shuffle_property_violations(s).empty());
    CHECK_FALSE(table_requirement_violations(table_of(s)).empty());
    s.fibers[1].output = s.fibers[0].output;
    CHECK_THROWS_AS(table_of(s), FabricFault);
  }

  TEST_CASE("monolithic table of S(6)") {
    const ConnectivityTable t = build_table(6);
    CHECK(entry_text(t.at(3, 2)) == "32, 23");
    for (int p = 0; p < 6; ++p) {
      for (int q = 0; q < 6; ++q) CHECK(entry_text(t.at(p, q)) == digits({p, q}) + ", " + digits({q, p}));
    }
    CHECK(table_requirement_violations(t).empty());
    CHECK(table_of(build_shuffle(6)) == t);
    CHECK(entry_text(build_table(1).at(0, 0)) == "00, 00");
  }

  TEST_CASE("factorized table for n=2, r=3") {
    const ConnectivityTable t = factorize_table(build_table(6), 2, 3);
    CHECK(t.row_label(3) == "10");
    CHECK(t.col_label(2) == "02");
    CHECK(entry_text(t.at(3, 2)) == "1002, 0210");
    for (int p = 0; p < 6; ++p) {
      for (int q = 0; q < 6; ++q) {
        const int a = p / 3, pp = p % 3, b = q / 3, qq = q % 3;
        CHECK(entry_text(t.at(p, q)) == digits({a, pp, b, qq}) + ", " + digits({b, qq, a, pp}));
      }
    }
    CHECK(table_requirement_violations(t).empty());
    CHECK(flatten_table(t) == build_table(6));
    CHECK(table_of(build_modular_shuffle(2, 3)) == t);
  }

  TEST_CASE("sub-tables repeat the S(r) pattern") {
    const ConnectivityTable t = factorize_table(build_table(12), 3, 4);
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) CHECK(sub_table(t, a, b) == build_table(4));
    }
    CHECK(table_requirement_violations(t).empty());
    CHECK(entry_text(t.at(11, 7)) == "2313, 1323");
    CHECK_THROWS_AS(sub_table(t, 3, 0), AddressOutOfRange);
    CHECK_THROWS_AS(factorize_table(build_table(12), 5, 2), InvalidParameter);
  }

  TEST_CASE("tuple rendering beyond one digit") {
    const ConnectivityTable t = build_table(12);
    CHECK(entry_text(t.at(10, 2)) == "(10,2), (2,10)");
  }

  TEST_CASE("round-trip through factorize and flatten") {
    for (int n = 1; n <= 6; ++n) {
      for (int r = 1; r <= 6; ++r) {
        const ConnectivityTable t = build_table(n * r);
        CHECK(flatten_table(factorize_table(t, n, r)) == t);
      }
    }
  }

  TEST_CASE("modular shuffle is equivalent to S(nr)") {
    for (int n = 1; n * 1 <= 64; ++n) {
      for (int r = 1; n * r <= 64; ++r) {
        const auto m = build_modular_shuffle(n, r);
        REQUIRE(m.subnetworks.size() == static_cast<std::size_t>(n * n));
        const auto v = check_equivalence(m, n, r);
        CHECK_MESSAGE(v.equivalent, "n=", n, " r=", r);
        CHECK(v.fibers_checked == static_cast<std::size_t>(n * r * n * r));
      }
    }
    CHECK(check_equivalence(build_modular_shuffle(1, 1), 1, 1).equivalent);
  }

  TEST_CASE("worked fiber through S_10(3)") {
    const auto m = build_modular_shuffle(2, 3);
    for (const auto& f : trace_fibers(m)) {
      if (f.input != ModularAddress{{1, 0}, {0, 2}, Side::Input}) continue;
      REQUIRE(f.output);
      CHECK(*f.output == ModularAddress{{0, 2}, {1, 0}, Side::Output});
      REQUIRE(f.via);
      CHECK(f.via->a == 1);
      CHECK(f.via->b == 0);
      // Leaves S_10(3) at its output 20.
      CHECK(f.via->local.group == 2);
      CHECK(f.via->local.port == 0);
    }
  }

  TEST_CASE("input 1002 enters S_10(3) at input 02") {
    const auto m = build_modular_shuffle(2, 3);
    int hits = 0;
    for (const auto& link : m.input_links) {
      if (link.outer != ModularAddress{{1, 0}, {0, 2}, Side::Input}) continue;
      ++hits;
      CHECK(link.inner.a == 1);
      CHECK(link.inner.b == 0);
      CHECK(link.inner.local.group == 0);
      CHECK(link.inner.local.port == 2);
    }
    CHECK(hits == 1);
  }

  TEST_CASE("shape mismatch is a verdict") {
    const auto v = check_equivalence(build_modular_shuffle(2, 3), 3, 2);
    CHECK_FALSE(v.equivalent);
    REQUIRE(v.witness);
    CHECK(v.witness->kind == WitnessKind::ShapeMismatch);
  }

  TEST_CASE("injected cabling faults produce witnesses") {
    std::mt19937_64 rng(7);
    const auto m = build_modular_shuffle(3, 2);
    for (int i = 0; i < 40; ++i) {
      testing::InjectedFault fault;
      fault.kind = i % 2 ? testing::FaultKind::Rewire : testing::FaultKind::Delete;
      const auto broken = testing::inject_fault(m, rng, fault);
      const auto v = check_equivalence(broken, 3, 2);
      CHECK_MESSAGE(!v.equivalent, fault.text);
      CHECK_MESSAGE(v.witness.has_value(), fault.text);
    }

    // A single rewired subnetwork fiber is named by the witness.
    auto bad = m;
    auto& sub = bad.subnetworks[1];
    std::swap(sub.fibers[0].output, sub.fibers[1].output);
    const auto v = check_equivalence(bad, 3, 2);
    REQUIRE_FALSE(v.equivalent);
    REQUIRE(v.witness);
    REQUIRE(v.witness->fiber);
    CHECK(v.witness->fiber->group.block == 0);
    CHECK(v.witness->fiber->port.block == 1);
    CHECK(v.witness->kind == WitnessKind::Misrouted);
  }
}
