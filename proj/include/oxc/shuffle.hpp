#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "oxc/address.hpp"

namespace oxc {

struct ShuffleFiber {
  GroupPortAddress input;
  GroupPortAddress output;

  bool operator==(const ShuffleFiber&) const = default;
};

/// N^2 x N^2 shuffle network S(N): input pq is wired to output qp.
/// Fibers are ordered by input address.
struct ShuffleNetwork {
  int size = 0;
  std::vector<ShuffleFiber> fibers;

  bool operator==(const ShuffleNetwork&) const = default;
};

ShuffleNetwork build_shuffle(int N);

// Checks P1 (one fiber per input-group/output-group pair) and P2 (output
// address is the swap of the input address). Empty when both hold.
std::vector<std::string> shuffle_property_violations(const ShuffleNetwork& s);

/// A port of the embedded sub-network S_ab(r), in that sub-network's own
/// (group, port) numbering.
struct SubnetworkPort {
  int a = 0;
  int b = 0;
  GroupPortAddress local;

  bool operator==(const SubnetworkPort&) const = default;
};

/// Cable between a port of the modular shuffle and a sub-network port.
struct SubgroupLink {
  ModularAddress outer;
  SubnetworkPort inner;

  bool operator==(const SubgroupLink&) const = default;
};

/// Modular shuffle built from n^2 copies of S(r).
///
/// Input (a,p',b,q') belongs to subgroup (a,p',b) and is cabled to input
/// p'q' of S_ab(r); output (b,q',a,p') is cabled from output q'p' of S_ab(r).
struct ModularShuffleNetwork {
  int n = 0;
  int r = 0;
  std::vector<ShuffleNetwork> subnetworks;  // index k = a*n + b
  std::vector<SubgroupLink> input_links;
  std::vector<SubgroupLink> output_links;

  const ShuffleNetwork& subnetwork(int a, int b) const;
  bool operator==(const ModularShuffleNetwork&) const = default;
};

ModularShuffleNetwork build_modular_shuffle(int n, int r);

/// End-to-end fiber through the modular shuffle. `output` is empty when the
/// trace hits a missing cable; `note` then says where.
struct TracedFiber {
  ModularAddress input;
  std::optional<ModularAddress> output;
  std::optional<SubnetworkPort> via;
  std::string note;
};

std::vector<TracedFiber> trace_fibers(const ModularShuffleNetwork& m);

enum class WitnessKind { Missing, Duplicate, Misrouted, Unterminated, ShapeMismatch };

struct EquivalenceWitness {
  WitnessKind kind = WitnessKind::Missing;
  int p = 0;
  int q = 0;
  std::optional<ModularAddress> fiber;
  std::string detail;
};

struct EquivalenceVerdict {
  bool equivalent = false;
  std::optional<EquivalenceWitness> witness;
  std::size_t fibers_checked = 0;
  std::size_t faults = 0;
};

// True iff (a,p',b,q') -> (a*r+p', b*r+q') maps the traced fibers one-to-one
// onto { f(pq,qp) } with each fiber ending at the swapped address.
EquivalenceVerdict check_equivalence(const ModularShuffleNetwork& m, int n, int r);

std::string to_string(WitnessKind k);

// --- connectivity tables ---------------------------------------------------

enum class TableFlavor { Monolithic, Factorized };

struct TableEntry {
  Address input;
  Address output;

  bool operator==(const TableEntry&) const = default;
};

/// Row p = input group, column q = output group, entry = the fiber between
/// them. Factorized tables label row ap' and column bq' with n*n periods.
struct ConnectivityTable {
  TableFlavor flavor = TableFlavor::Monolithic;
  int size = 0;
  int n = 1;
  int r = 0;
  std::vector<TableEntry> entries;  // row-major

  const TableEntry& at(int row, int col) const;
  std::string row_label(int row) const;
  std::string col_label(int col) const;
  bool operator==(const ConnectivityTable&) const = default;
};

ConnectivityTable build_table(int N);
ConnectivityTable factorize_table(const ConnectivityTable& t, int n, int r);
// Strips the period prefixes and recomposes p = a*r + p'.
ConnectivityTable flatten_table(const ConnectivityTable& t);
// T_ab with the (a,b) prefixes erased, as a monolithic r x r table.
ConnectivityTable sub_table(const ConnectivityTable& t, int a, int b);
// R1, R2, and for factorized tables R3.
std::vector<std::string> table_requirement_violations(const ConnectivityTable& t);

ConnectivityTable table_of(const ShuffleNetwork& s);
ConnectivityTable table_of(const ModularShuffleNetwork& m);

std::string entry_text(const TableEntry& e);

}  // namespace oxc
