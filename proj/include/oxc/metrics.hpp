#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oxc/routing.hpp"
#include "oxc/topology.hpp"

namespace oxc {

/// Reduced fraction with positive denominator.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Rational of(std::int64_t num, std::int64_t den);
  std::string to_string() const;
  bool operator==(const Rational&) const = default;
};

enum class FabricKind { Classical, Modular };

std::string to_string(FabricKind k);

struct CablingReport {
  FabricKind kind = FabricKind::Classical;
  int N = 0;
  int n = 0;
  int r = 0;
  std::int64_t stage_fibers = 0;
  std::int64_t internal_module_fibers = 0;
  // Stage fibers, plus module-internal fibers unless modules are sealed.
  std::int64_t total_external_cables = 0;
  Rational ratio_to_classical;
};

CablingReport cabling_report(FabricKind kind, const FabricParams& params, bool sealed_modules);
// Same figures counted on a built topology.
CablingReport measure_cabling(const FabricTopology& fabric);

// 2 * N^1.5 for a square factorization N = k*k; throws InvalidParameter
// when N is not a perfect square.
std::int64_t square_factorization_cables(int N);

struct LossTerm {
  std::string element;
  double db = 0.0;
};

struct LossOptions {
  double wss_db = 5.0;
  // Fiber and connector loss for the whole path.
  double connector_db = 0.0;
};

struct LossBudget {
  std::vector<LossTerm> terms;
  double per_wss_db = 5.0;
  int stages_traversed = 0;
  double total_db = 0.0;
};

double coupler_loss_db(int ports);

// Analytic budget along any input-output path.
LossBudget loss_budget(FabricKind kind, int n, int r, bool coupler_input, const LossOptions& options = {});
// Sum over the elements a routed path actually traverses.
LossBudget path_loss(const FabricTopology& fabric, const RoutedPath& path, const LossOptions& options = {});

struct ComponentCensus {
  int input_wss = 0;   // 1 x n
  int output_wss = 0;  // n x 1
  int modules = 0;     // r x r
  int input_fan_out = 0;
  int output_fan_in = 0;
  int module_size = 0;

  bool operator==(const ComponentCensus&) const = default;
};

ComponentCensus component_census(const FabricParams& params);
// Counts the external-facing elements of a modular topology.
ComponentCensus measure_census(const FabricTopology& fabric);

}  // namespace oxc
