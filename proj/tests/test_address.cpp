#include <doctest.h>

#include "oxc/address.hpp"
#include "oxc/errors.hpp"

using namespace oxc;

TEST_SUITE("address") {
  TEST_CASE("split and flatten are inverse over the whole range") {
    for (int n = 1; n <= 8; ++n) {
      for (int r = 1; r <= 8; ++r) {
        const int N = n * r;
        for (int p = 0; p < N; ++p) {
          const SplitIndex s = split_index(p, r, N);
          CHECK(s.block == p / r);
          CHECK(s.offset == p % r);
          CHECK(flatten_index(s, r, n) == p);
        }
      }
    }
  }

  TEST_CASE("worked relabelings") {
    // Port 3 of a 6-port fabric with periods of 3 becomes 10, port 2 becomes 02.
    CHECK(split_index(3, 3, 6) == SplitIndex{1, 0});
    CHECK(split_index(2, 3, 6) == SplitIndex{0, 2});
    // n = r = 4: 13 = 3*4 + 1.
    CHECK(split_index(13, 4, 16) == SplitIndex{3, 1});
    CHECK(flatten_index({3, 1}, 4, 4) == 13);
  }

  TEST_CASE("out of range addresses are rejected") {
    CHECK_THROWS_AS(split_index(6, 3, 6), AddressOutOfRange);
    CHECK_THROWS_AS(split_index(-1, 3, 6), AddressOutOfRange);
    CHECK_THROWS_AS(split_index(0, 4, 6), InvalidParameter);
    CHECK_THROWS_AS(flatten_index({2, 0}, 3, 2), AddressOutOfRange);
    CHECK_THROWS_AS(flatten_index({0, 3}, 3, 2), AddressOutOfRange);
  }

  TEST_CASE("fabric parameters") {
    CHECK(FabricParams::modular(2, 3, 3) == FabricParams{6, 2, 3, 3});
    CHECK(FabricParams::classical(6, 1) == FabricParams{6, 1, 6, 1});
    CHECK(FabricParams::classical(1, 1) == FabricParams{1, 1, 1, 1});
    CHECK_THROWS_AS(FabricParams::checked(6, 2, 2, 1), InvalidParameter);
    CHECK_THROWS_AS(FabricParams::modular(0, 3, 1), InvalidParameter);
    CHECK_THROWS_AS(FabricParams::classical(4, 0), InvalidParameter);
  }

  TEST_CASE("modular addresses split, flatten and invert") {
    for (int n = 1; n <= 4; ++n) {
      for (int r = 1; r <= 4; ++r) {
        const int N = n * r;
        for (int p = 0; p < N; ++p) {
          for (int q = 0; q < N; ++q) {
            const GroupPortAddress g{p, q, Side::Input};
            const ModularAddress m = ModularAddress::split(g, r);
            CHECK(m.flatten(r) == g);
            CHECK(m.inverse().flatten(r) == g.swapped());
            CHECK(m.inverse().inverse() == m);
          }
        }
      }
    }
  }

  TEST_CASE("labels") {
    CHECK(format_label({1, 0, 0, 2}) == "1002");
    CHECK(format_label({3}) == "3");
    CHECK(format_label({1, 10, 2}) == "(1,10,2)");
    const Address a = ModularAddress{{1, 0}, {0, 2}, Side::Input};
    CHECK(to_string(a) == "1002");
    CHECK(to_string(counterpart(a)) == "0210");
    CHECK(components(a) == std::vector<int>{1, 0, 0, 2});
    const Address g = GroupPortAddress{3, 2, Side::Input};
    CHECK(to_string(g) == "32");
    CHECK(to_string(counterpart(g)) == "23");
    CHECK(to_string(GroupPortAddress{12, 3, Side::Input}) == "(12,3)");
  }
}
