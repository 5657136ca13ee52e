#include "oxc/verify.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>

#include "oxc/errors.hpp"
#include "oxc/routing.hpp"

namespace oxc {

namespace {

constexpr std::size_t kKeptCounterexamples = 16;

class Harness {
 public:
  Harness(const FabricTopology& fabric, NonblockingReport& report)
      : fabric_(fabric), report_(report), N_(fabric.params().N) {
    paths_.resize(static_cast<std::size_t>(N_ * N_));
    faults_.resize(static_cast<std::size_t>(N_ * N_));
    for (int p = 0; p < N_; ++p) {
      for (int q = 0; q < N_; ++q) {
        try {
          paths_[idx(p, q)] = resolve_path(fabric, {p, q, Wavelength{0}});
        } catch (const FabricFault& e) {
          faults_[idx(p, q)] = e.what();
        }
      }
    }
  }

  int size() const { return N_; }
  bool routable(int p, int q) const { return paths_[idx(p, q)].has_value(); }

  void report_unroutable(int wl) {
    for (int p = 0; p < N_; ++p) {
      for (int q = 0; q < N_; ++q) {
        if (!routable(p, q)) fail(wl, {}, p, q, "unroutable: " + faults_[idx(p, q)]);
      }
    }
  }

  // Attempts one setup on `state`; returns the id or records a counterexample.
  std::optional<ConnectionId> attempt(WavelengthState& state, int wl, const std::vector<std::pair<int, int>>& held,
                                      int p, int q) {
    ++report_.setups;
    if (!routable(p, q)) return std::nullopt;
    RoutedPath path = *paths_[idx(p, q)];
    path.wavelength = Wavelength{wl};
    try {
      return state.commit(fabric_, {p, q, Wavelength{wl}}, std::move(path));
    } catch (const InternalContention& e) {
      fail(wl, held, p, q, std::string("internal contention: ") + e.what());
    } catch (const WavelengthBusyAtEndpoint& e) {
      fail(wl, held, p, q, std::string("endpoint busy: ") + e.what());
    }
    return std::nullopt;
  }

  void fail(int wl, std::vector<std::pair<int, int>> held, int p, int q, std::string reason) {
    ++report_.counterexample_count;
    if (report_.counterexamples.size() < kKeptCounterexamples) {
      report_.counterexamples.push_back({wl, std::move(held), p, q, std::move(reason)});
    }
  }

  // Every unordered pair of requests with distinct inputs and distinct
  // outputs must light disjoint fibers.
  void pairwise(int wl) {
    std::map<EdgeIndex, std::vector<std::pair<int, int>>> users;
    for (int p = 0; p < N_; ++p) {
      for (int q = 0; q < N_; ++q) {
        if (!routable(p, q)) continue;
        for (EdgeIndex e : lit_edges(fabric_, *paths_[idx(p, q)])) users[e].push_back({p, q});
      }
    }
    for (const auto& [edge, list] : users) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        for (std::size_t j = i + 1; j < list.size(); ++j) {
          ++report_.pair_checks;
          const auto& x = list[i];
          const auto& y = list[j];
          if (x.first != y.first && x.second != y.second) {
            fail(wl, {x}, y.first, y.second,
                 "paths of (" + std::to_string(x.first) + "," + std::to_string(x.second) + ") and (" +
                     std::to_string(y.first) + "," + std::to_string(y.second) + ") share fiber " +
                     std::to_string(edge));
          }
        }
      }
    }
  }

  // All ordered sequences of partial permutations, depth first.
  void ordered_partials(int wl) {
    WavelengthState state(fabric_);
    std::vector<char> in_used(static_cast<std::size_t>(N_), 0), out_used(static_cast<std::size_t>(N_), 0);
    std::vector<std::pair<int, int>> held;
    std::vector<ConnectionId> ids;
    std::function<void()> extend = [&]() {
      ++report_.sequences;
      for (int p = 0; p < N_; ++p) {
        if (in_used[static_cast<std::size_t>(p)]) continue;
        for (int q = 0; q < N_; ++q) {
          if (out_used[static_cast<std::size_t>(q)]) continue;
          auto id = attempt(state, wl, held, p, q);
          if (!id) continue;
          in_used[static_cast<std::size_t>(p)] = out_used[static_cast<std::size_t>(q)] = 1;
          held.push_back({p, q});
          extend();
          held.pop_back();
          in_used[static_cast<std::size_t>(p)] = out_used[static_cast<std::size_t>(q)] = 0;
          state.release(*id);
        }
      }
    };
    extend();
  }

  // Sets up `pairs` in order, then tears everything down.
  void run_sequence(int wl, const std::vector<std::pair<int, int>>& pairs) {
    WavelengthState state(fabric_);
    std::vector<std::pair<int, int>> held;
    std::vector<ConnectionId> ids;
    ++report_.sequences;
    for (const auto& [p, q] : pairs) {
      if (auto id = attempt(state, wl, held, p, q)) {
        ids.push_back(*id);
        held.push_back({p, q});
      }
    }
    for (auto id : ids) state.release(id);
  }

  void full_permutations(int wl) {
    std::vector<int> perm(static_cast<std::size_t>(N_));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      std::vector<std::pair<int, int>> pairs;
      for (int p = 0; p < N_; ++p) pairs.push_back({p, perm[static_cast<std::size_t>(p)]});
      run_sequence(wl, pairs);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  void sampled(int wl, std::size_t budget, std::mt19937_64& rng) {
    std::vector<int> ins(static_cast<std::size_t>(N_)), outs(static_cast<std::size_t>(N_));
    std::iota(ins.begin(), ins.end(), 0);
    std::iota(outs.begin(), outs.end(), 0);
    std::uniform_int_distribution<int> size_dist(1, N_);
    for (std::size_t i = 0; i < budget; ++i) {
      std::shuffle(ins.begin(), ins.end(), rng);
      std::shuffle(outs.begin(), outs.end(), rng);
      // Alternate full and partial permutations.
      const int k = i % 2 == 0 ? N_ : size_dist(rng);
      std::vector<std::pair<int, int>> pairs;
      for (int j = 0; j < k; ++j) pairs.push_back({ins[static_cast<std::size_t>(j)], outs[static_cast<std::size_t>(j)]});
      run_sequence(wl, pairs);
    }
  }

  // Wavelength busy everywhere except at input p and output q; R(p,q) must
  // still connect. Every bijection of the other endpoints is loaded when
  // `all_loads`, otherwise a few cyclic shifts.
  void extreme_cases(int wl, bool all_loads) {
    for (int p = 0; p < N_; ++p) {
      for (int q = 0; q < N_; ++q) {
        std::vector<int> others_in, others_out;
        for (int i = 0; i < N_; ++i) {
          if (i != p) others_in.push_back(i);
          if (i != q) others_out.push_back(i);
        }
        const std::size_t m = others_in.size();
        auto try_load = [&](const std::vector<int>& target) {
          ++report_.extreme_cases;
          WavelengthState state(fabric_);
          std::vector<std::pair<int, int>> held;
          std::vector<ConnectionId> ids;
          bool loaded = true;
          for (std::size_t i = 0; i < m; ++i) {
            auto id = attempt(state, wl, held, others_in[i], target[i]);
            if (!id) {
              loaded = false;
              break;
            }
            ids.push_back(*id);
            held.push_back({others_in[i], target[i]});
          }
          if (loaded) {
            if (auto id = attempt(state, wl, held, p, q)) ids.push_back(*id);
          }
          for (auto id : ids) state.release(id);
        };
        if (all_loads) {
          std::vector<int> target = others_out;
          do {
            try_load(target);
          } while (std::next_permutation(target.begin(), target.end()));
        } else {
          const std::size_t shifts = std::min<std::size_t>(m == 0 ? 1 : m, 3);
          for (std::size_t s = 0; s < shifts; ++s) {
            std::vector<int> target(m);
            for (std::size_t i = 0; i < m; ++i) target[i] = others_out[(i + s) % m];
            try_load(target);
          }
        }
      }
    }
  }

 private:
  std::size_t idx(int p, int q) const { return static_cast<std::size_t>(p * N_ + q); }

  const FabricTopology& fabric_;
  NonblockingReport& report_;
  int N_;
  std::vector<std::optional<RoutedPath>> paths_;
  std::vector<std::string> faults_;
};

}  // namespace

NonblockingReport verify_nonblocking(const FabricTopology& fabric, int w, const VerifyOptions& options) {
  if (w < 1 || w > fabric.params().w) {
    throw InvalidParameter("wavelength count " + std::to_string(w) + " outside [1," +
                           std::to_string(fabric.params().w) + "]");
  }
  NonblockingReport report;
  Harness h(fabric, report);
  const int N = h.size();
  std::mt19937_64 rng(options.seed);
  const bool exhaustive = options.mode == VerifyMode::Exhaustive;

  if (exhaustive) {
    report.coverage.push_back("pairwise fiber-disjointness of all compatible request pairs");
    if (N <= options.partial_limit) report.coverage.push_back("all ordered partial permutations");
    if (N <= options.permutation_limit) report.coverage.push_back("all full permutations");
    if (N > options.permutation_limit) {
      report.coverage.push_back(std::to_string(options.budget) + " sampled permutations per wavelength");
    }
    report.coverage.push_back(N <= options.partial_limit ? "extreme case under every loading"
                                                         : "extreme case under cyclic loadings");
  } else {
    report.coverage.push_back(std::to_string(options.budget) + " sampled permutations per wavelength");
  }

  for (int wl = 0; wl < w; ++wl) {
    ++report.wavelengths_checked;
    h.report_unroutable(wl);
    if (exhaustive) {
      h.pairwise(wl);
      if (N <= options.partial_limit) h.ordered_partials(wl);
      if (N <= options.permutation_limit) {
        h.full_permutations(wl);
      } else {
        h.sampled(wl, options.budget, rng);
      }
      h.extreme_cases(wl, N <= options.partial_limit);
    } else {
      h.sampled(wl, options.budget, rng);
    }
  }
  return report;
}

}  // namespace oxc
