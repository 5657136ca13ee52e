#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "oxc/errors.hpp"
#include "oxc/fabric.hpp"
#include "oxc/routing.hpp"

using namespace oxc;

namespace {

std::vector<NodeId> hop_ids(const FabricTopology& t, const RoutedPath& path) {
  std::vector<NodeId> ids;
  for (const auto& h : path.hops) ids.push_back(t.node(h.node).id);
  return ids;
}

NodeId in(std::vector<int> l) { return {NodeKind::InputWss, std::move(l)}; }
NodeId out(std::vector<int> l) { return {NodeKind::OutputWss, std::move(l)}; }

bool disjoint(std::vector<EdgeIndex> a, std::vector<EdgeIndex> b) {
  std::vector<EdgeIndex> common;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
  return common.empty();
}

}  // namespace

TEST_SUITE("routing") {
  TEST_CASE("classical path uses fiber f(pq,qp)") {
    const auto t = build_classical(6, 1);
    const auto path = resolve_path(t, {3, 2, Wavelength{0}});
    CHECK(hop_ids(t, path) == std::vector<NodeId>{{NodeKind::ExternalInput, {3}}, in({3}), out({2}),
                                                  {NodeKind::ExternalOutput, {2}}});
    REQUIRE(path.edges.size() == 3);
    const auto& tag = t.edge(path.edges[1]).tag;
    REQUIRE(tag);
    CHECK(to_string(*tag) == "32");
    CHECK(stage_fiber_count(t, path) == 1);
  }

  TEST_CASE("modular path visits Q_10 from input 0 to output 2") {
    const auto sealed = build_modular(2, 3, 1, {true, false});
    const auto req = ConnectionRequest::modular({1, 0}, {0, 2}, Wavelength{0}, sealed.params());
    CHECK(req.input == 3);
    CHECK(req.output == 2);
    const auto path = resolve_path(sealed, req);
    CHECK(hop_ids(sealed, path) == std::vector<NodeId>{{NodeKind::ExternalInput, {3}}, in({1, 0}),
                                                       {NodeKind::OxcModule, {1, 0}}, out({0, 2}),
                                                       {NodeKind::ExternalOutput, {2}}});
    CHECK(path.hops[1].out_port == 0);
    CHECK(path.hops[2].in_port == 0);
    CHECK(path.hops[2].out_port == 2);
    CHECK(path.hops[3].in_port == 1);
    CHECK(stage_fiber_count(sealed, path) == 2);

    const auto open = build_modular(2, 3, 1);
    const auto inner = resolve_path(open, req);
    CHECK(hop_ids(open, inner) == std::vector<NodeId>{{NodeKind::ExternalInput, {3}}, in({1, 0}), in({1, 0, 0}),
                                                      out({0, 2, 1}), out({0, 2}),
                                                      {NodeKind::ExternalOutput, {2}}});
    CHECK(stage_fiber_count(open, inner) == 2);
    CHECK(inner.edges.size() == 5);
  }

  TEST_CASE("intermediate stages route too") {
    const FabricParams p = FabricParams::modular(2, 3, 1);
    const auto dp = build_stage(Stage::IntermediateDoublePrime, p);
    const auto path = resolve_path(dp, {3, 2, Wavelength{0}});
    CHECK(hop_ids(dp, path) == std::vector<NodeId>{{NodeKind::ExternalInput, {3}}, in({1, 0}), in({1, 0, 0}),
                                                   out({0, 2, 1}), out({0, 2}), {NodeKind::ExternalOutput, {2}}});
    CHECK(stage_fiber_count(dp, path) == 3);
  }

  TEST_CASE("endpoints agree with the classical fabric for every request") {
    for (int n = 1; n <= 4; ++n) {
      for (int r = 1; n * r <= 16; ++r) {
        const int N = n * r;
        const auto classical = build_classical(N, 2);
        for (const BuildOptions o : {BuildOptions{false, false}, BuildOptions{true, false}, BuildOptions{false, true}}) {
          const auto modular = build_modular(n, r, 2, o);
          for (int p = 0; p < N; ++p) {
            for (int q = 0; q < N; ++q) {
              for (int wl = 0; wl < 2; ++wl) {
                const auto a = resolve_path(classical, {p, q, Wavelength{wl}});
                const auto b = resolve_path(modular, {p, q, Wavelength{wl}});
                CHECK(classical.node(a.hops.front().node).id == modular.node(b.hops.front().node).id);
                CHECK(classical.node(a.hops.back().node).id == modular.node(b.hops.back().node).id);
                CHECK(b.wavelength.index == wl);
              }
            }
          }
        }
      }
    }
  }

  TEST_CASE("resolve_path is deterministic") {
    const auto t = build_modular(3, 2, 2);
    CHECK(resolve_path(t, {4, 1, Wavelength{1}}) == resolve_path(t, {4, 1, Wavelength{1}}));
    const auto p = resolve_path(build_classical(1, 1), {0, 0, Wavelength{0}});
    CHECK(p.hops.size() == 4);
  }

  TEST_CASE("invalid requests") {
    const auto t = build_modular(2, 3, 2);
    CHECK_THROWS_AS(resolve_path(t, {6, 0, Wavelength{0}}), AddressOutOfRange);
    CHECK_THROWS_AS(resolve_path(t, {0, -1, Wavelength{0}}), AddressOutOfRange);
    CHECK_THROWS_AS(resolve_path(t, {0, 0, Wavelength{2}}), AddressOutOfRange);
    CHECK_THROWS_AS(ConnectionRequest::modular({2, 0}, {0, 0}, Wavelength{0}, t.params()), AddressOutOfRange);
  }

  TEST_CASE("busy endpoints and independent wavelengths") {
    const auto t = build_modular(2, 3, 2);
    WavelengthState s(t);
    setup(s, t, {3, 2, Wavelength{0}});
    CHECK_THROWS_AS(setup(s, t, {3, 4, Wavelength{0}}), WavelengthBusyAtEndpoint);
    CHECK_THROWS_AS(setup(s, t, {1, 2, Wavelength{0}}), WavelengthBusyAtEndpoint);
    CHECK_NOTHROW(setup(s, t, {3, 2, Wavelength{1}}));
    CHECK_NOTHROW(setup(s, t, {1, 4, Wavelength{0}}));
    CHECK(s.active().size() == 3);
    CHECK(check_state(s, t).empty());
  }

  TEST_CASE("teardown restores the previous state") {
    const auto t = build_modular(2, 3, 1);
    WavelengthState s(t);
    setup(s, t, {0, 5, Wavelength{0}});
    const WavelengthState before = s;
    const auto id = setup(s, t, {3, 2, Wavelength{0}});
    CHECK_FALSE(s == before);
    const auto path = teardown(s, id);
    CHECK(path == resolve_path(t, {3, 2, Wavelength{0}}));
    CHECK(s == before);
    CHECK_THROWS_AS(teardown(s, id), UnknownConnection);
  }

  TEST_CASE("compatible requests light disjoint fibers") {
    for (int n = 1; n <= 4; ++n) {
      for (int r = 1; n * r <= 8; ++r) {
        const int N = n * r;
        for (const auto& t : {build_classical(N, 1), build_modular(n, r, 1), build_modular(n, r, 1, {false, true})}) {
          std::map<std::pair<int, int>, std::vector<EdgeIndex>> lit;
          for (int p = 0; p < N; ++p) {
            for (int q = 0; q < N; ++q) lit[{p, q}] = lit_edges(t, resolve_path(t, {p, q, Wavelength{0}}));
          }
          for (const auto& [x, ex] : lit) {
            for (const auto& [y, ey] : lit) {
              if (x.first != y.first && x.second != y.second) CHECK(disjoint(ex, ey));
            }
          }
        }
      }
    }
  }

  TEST_CASE("a coupler lights every output fiber") {
    const auto t = build_modular(3, 2, 1, {false, true});
    const auto path = resolve_path(t, {4, 1, Wavelength{0}});
    const auto lit = lit_edges(t, path);
    CHECK(lit.size() == path.edges.size() + 2);
    const auto coupler = *t.find(in({2, 0}));
    CHECK(t.node(coupler).element == Element::Coupler);
    for (int o = 0; o < 3; ++o) CHECK(std::binary_search(lit.begin(), lit.end(), *t.out_edge(coupler, o)));
  }

  TEST_CASE("random setup and teardown keep occupancy consistent") {
    for (const auto& t : {build_classical(6, 3), build_modular(2, 3, 3), build_modular(3, 3, 2, {true, false}),
                          build_modular(2, 4, 2, {false, true})}) {
      const int N = t.params().N;
      const int w = t.params().w;
      std::mt19937_64 rng(11);
      WavelengthState s(t);
      std::vector<ConnectionId> ids;
      for (int step = 0; step < 600; ++step) {
        if (!ids.empty() && rng() % 3 == 0) {
          const std::size_t k = rng() % ids.size();
          teardown(s, ids[k]);
          ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(k));
        } else {
          const ConnectionRequest req{static_cast<int>(rng() % N), static_cast<int>(rng() % N),
                                      Wavelength{static_cast<int>(rng() % w)}};
          try {
            ids.push_back(setup(s, t, req));
          } catch (const WavelengthBusyAtEndpoint&) {
          }
        }
        REQUIRE(check_state(s, t).empty());
      }
      for (auto id : ids) teardown(s, id);
      CHECK(s == WavelengthState(t));
    }
  }

  TEST_CASE("interleaving wavelengths matches running each alone") {
    const auto t = build_modular(2, 3, 3);
    const std::vector<ConnectionRequest> reqs = {{0, 1, Wavelength{0}}, {0, 1, Wavelength{1}}, {3, 2, Wavelength{2}},
                                                 {1, 0, Wavelength{0}}, {4, 4, Wavelength{1}}, {5, 3, Wavelength{0}},
                                                 {2, 5, Wavelength{2}}, {3, 0, Wavelength{1}}};
    WavelengthState mixed(t);
    for (const auto& r : reqs) setup(mixed, t, r);
    for (int wl = 0; wl < 3; ++wl) {
      WavelengthState alone(t);
      for (const auto& r : reqs) {
        if (r.wavelength.index == wl) setup(alone, t, r);
      }
      for (EdgeIndex e = 0; e < t.edges().size(); ++e) {
        CHECK(mixed.holder(e, Wavelength{wl}).has_value() == alone.holder(e, Wavelength{wl}).has_value());
      }
    }
  }
}
