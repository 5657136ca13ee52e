#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "oxc/topology.hpp"

namespace oxc {

enum class VerifyMode { Exhaustive, Randomized };

struct VerifyOptions {
  VerifyMode mode = VerifyMode::Exhaustive;
  // Randomized request sequences per wavelength (both modes use it for the
  // sampled part of their work).
  std::size_t budget = 200;
  std::uint64_t seed = 1;
  // Largest N whose ordered partial permutations are enumerated in full.
  int partial_limit = 6;
  // Largest N whose full permutations are enumerated in full.
  int permutation_limit = 8;
};

struct Counterexample {
  int wavelength = 0;
  // Connections (p, q) already established when the failure happened.
  std::vector<std::pair<int, int>> established;
  int input = 0;
  int output = 0;
  std::string reason;
};

struct NonblockingReport {
  int wavelengths_checked = 0;
  std::size_t sequences = 0;
  std::size_t setups = 0;
  std::size_t extreme_cases = 0;
  std::size_t pair_checks = 0;
  std::size_t counterexample_count = 0;
  std::vector<Counterexample> counterexamples;  // first few only
  std::vector<std::string> coverage;            // what was enumerated

  bool ok() const { return counterexample_count == 0; }
};

/// Checks that every same-wavelength request set with distinct inputs and
/// distinct outputs routes without internal contention, for wavelengths
/// 0..w-1 independently.
///
/// Exhaustive mode, per wavelength:
///  - every unordered pair of compatible requests has disjoint lit fibers
///    (a complete certificate, since paths are fixed);
///  - N <= partial_limit: every ordered sequence of a partial permutation;
///  - N <= permutation_limit: every full permutation;
///  - larger N: `budget` random permutations and partial permutations;
///  - the loaded extreme case: all other inputs and outputs busy, the
///    remaining (p, q) must still connect, for every (p, q).
/// Randomized mode runs only the sampled sequences. Every stage is accepted;
/// the intermediate ones switch exactly like the fabrics they came from.
NonblockingReport verify_nonblocking(const FabricTopology& fabric, int w, const VerifyOptions& options = {});

}  // namespace oxc
