#include "oxc/shuffle.hpp"

#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "oxc/errors.hpp"

namespace oxc {

namespace {

void require_positive(int v, const char* what) {
  if (v < 1) throw InvalidParameter(std::string(what) + " must be positive, got " + std::to_string(v));
}

auto port_key(const SubnetworkPort& s) {
  return std::make_tuple(s.a, s.b, s.local.group, s.local.port);
}

}  // namespace

ShuffleNetwork build_shuffle(int N) {
  require_positive(N, "N");
  ShuffleNetwork s{N, {}};
  s.fibers.reserve(static_cast<std::size_t>(N) * static_cast<std::size_t>(N));
  for (int p = 0; p < N; ++p) {
    for (int q = 0; q < N; ++q) {
      GroupPortAddress in{p, q, Side::Input};
      s.fibers.push_back({in, in.swapped()});
    }
  }
  return s;
}

std::vector<std::string> shuffle_property_violations(const ShuffleNetwork& s) {
  std::vector<std::string> out;
  const int N = s.size;
  std::map<std::pair<int, int>, int> pair_count;
  for (const auto& f : s.fibers) {
    const std::string name =
        "fiber " + to_string(Address{f.input}) + "->" + to_string(Address{f.output});
    if (f.input.side != Side::Input || f.output.side != Side::Output) {
      out.push_back(name + ": endpoint sides reversed");
    }
    if (f.input.group < 0 || f.input.group >= N || f.input.port < 0 || f.input.port >= N ||
        f.output.group < 0 || f.output.group >= N || f.output.port < 0 || f.output.port >= N) {
      out.push_back(name + ": address out of range");
      continue;
    }
    if (f.output != f.input.swapped()) out.push_back(name + ": violates P2");
    ++pair_count[{f.input.group, f.output.group}];
  }
  for (int p = 0; p < N; ++p) {
    for (int q = 0; q < N; ++q) {
      auto it = pair_count.find({p, q});
      int c = it == pair_count.end() ? 0 : it->second;
      if (c != 1) {
        out.push_back("groups (" + std::to_string(p) + "," + std::to_string(q) + "): " +
                      std::to_string(c) + " fibers, violates P1");
      }
    }
  }
  return out;
}

const ShuffleNetwork& ModularShuffleNetwork::subnetwork(int a, int b) const {
  if (a < 0 || a >= n || b < 0 || b >= n) {
    throw AddressOutOfRange("sub-network (" + std::to_string(a) + "," + std::to_string(b) +
                            ") outside [0," + std::to_string(n) + ")^2");
  }
  return subnetworks.at(static_cast<std::size_t>(a * n + b));
}

ModularShuffleNetwork build_modular_shuffle(int n, int r) {
  require_positive(n, "n");
  require_positive(r, "r");
  ModularShuffleNetwork m;
  m.n = n;
  m.r = r;
  // Sub-networks laid out in order k = a*n + b.
  for (int k = 0; k < n * n; ++k) m.subnetworks.push_back(build_shuffle(r));

  // Input group ap' holds n subgroups of r inputs; input (a,p',b,q') is the
  // q'th port of subgroup ap'b and lands on input group p' of S_ab(r).
  for (int a = 0; a < n; ++a) {
    for (int pp = 0; pp < r; ++pp) {
      for (int b = 0; b < n; ++b) {
        for (int qq = 0; qq < r; ++qq) {
          ModularAddress outer{{a, pp}, {b, qq}, Side::Input};
          m.input_links.push_back({outer, {a, b, {pp, qq, Side::Input}}});
        }
      }
    }
  }
  // Output (b,q',a,p') is the p'th port of subgroup bq'a, fed by output
  // group q' of S_ab(r).
  for (int b = 0; b < n; ++b) {
    for (int qq = 0; qq < r; ++qq) {
      for (int a = 0; a < n; ++a) {
        for (int pp = 0; pp < r; ++pp) {
          ModularAddress outer{{b, qq}, {a, pp}, Side::Output};
          m.output_links.push_back({outer, {a, b, {qq, pp, Side::Output}}});
        }
      }
    }
  }
  return m;
}

std::vector<TracedFiber> trace_fibers(const ModularShuffleNetwork& m) {
  std::map<std::tuple<int, int, int, int>, std::vector<const SubgroupLink*>> by_inner_output;
  for (const auto& link : m.output_links) by_inner_output[port_key(link.inner)].push_back(&link);

  std::vector<TracedFiber> out;
  out.reserve(m.input_links.size());
  for (const auto& link : m.input_links) {
    TracedFiber t{link.outer, std::nullopt, std::nullopt, {}};
    const auto& in = link.inner;
    if (in.a < 0 || in.a >= m.n || in.b < 0 || in.b >= m.n ||
        static_cast<std::size_t>(in.a * m.n + in.b) >= m.subnetworks.size()) {
      t.note = "cabled to a missing sub-network";
      out.push_back(std::move(t));
      continue;
    }
    const auto& sub = m.subnetwork(in.a, in.b);
    const ShuffleFiber* hit = nullptr;
    for (const auto& f : sub.fibers) {
      if (f.input == in.local) {
        hit = &f;
        break;
      }
    }
    if (!hit) {
      t.note = "no fiber at input " + to_string(Address{in.local}) + " of S_" +
               format_label({in.a, in.b});
      out.push_back(std::move(t));
      continue;
    }
    SubnetworkPort exit{in.a, in.b, hit->output};
    t.via = exit;
    auto it = by_inner_output.find(port_key(exit));
    if (it == by_inner_output.end() || it->second.empty()) {
      t.note = "output " + to_string(Address{hit->output}) + " of S_" + format_label({in.a, in.b}) +
               " is not cabled";
      out.push_back(std::move(t));
      continue;
    }
    t.output = it->second.front()->outer;
    out.push_back(std::move(t));
  }
  return out;
}

EquivalenceVerdict check_equivalence(const ModularShuffleNetwork& m, int n, int r) {
  EquivalenceVerdict v;
  auto fail = [&](EquivalenceWitness w) {
    ++v.faults;
    if (!v.witness) v.witness = std::move(w);
  };
  if (n < 1 || r < 1 || m.n != n || m.r != r ||
      m.subnetworks.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
    fail({WitnessKind::ShapeMismatch, 0, 0, std::nullopt,
          "network shape does not match n=" + std::to_string(n) + ", r=" + std::to_string(r)});
    return v;
  }
  const int N = n * r;
  std::vector<int> cover(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), 0);
  auto in_range = [&](const SplitIndex& s) {
    return s.block >= 0 && s.block < n && s.offset >= 0 && s.offset < r;
  };

  for (const auto& t : trace_fibers(m)) {
    ++v.fibers_checked;
    if (!in_range(t.input.group) || !in_range(t.input.port)) {
      fail({WitnessKind::Misrouted, 0, 0, t.input, "input address out of range"});
      continue;
    }
    const GroupPortAddress flat = t.input.flatten(r);
    const int p = flat.group;
    const int q = flat.port;
    if (!t.output) {
      fail({WitnessKind::Unterminated, p, q, t.input, t.note});
      continue;
    }
    if (!in_range(t.output->group) || !in_range(t.output->port) ||
        t.output->flatten(r) != flat.swapped()) {
      fail({WitnessKind::Misrouted, p, q, t.input,
            "fiber " + to_string(Address{t.input}) + " ends at " + to_string(Address{*t.output}) +
                ", expected " + to_string(Address{t.input.inverse()})});
      continue;
    }
    int& c = cover[static_cast<std::size_t>(p * N + q)];
    if (++c == 2) {
      fail({WitnessKind::Duplicate, p, q, t.input,
            "second fiber for (" + std::to_string(p) + "," + std::to_string(q) + ")"});
    }
  }
  for (int p = 0; p < N; ++p) {
    for (int q = 0; q < N; ++q) {
      if (cover[static_cast<std::size_t>(p * N + q)] == 0) {
        fail({WitnessKind::Missing, p, q, ModularAddress::split({p, q, Side::Input}, r),
              "no fiber realizes f(" + to_string(Address{GroupPortAddress{p, q, Side::Input}}) +
                  "," + to_string(Address{GroupPortAddress{q, p, Side::Output}}) + ")"});
      }
    }
  }
  v.equivalent = v.faults == 0;
  return v;
}

std::string to_string(WitnessKind k) {
  switch (k) {
    case WitnessKind::Missing: return "missing";
    case WitnessKind::Duplicate: return "duplicate";
    case WitnessKind::Misrouted: return "misrouted";
    case WitnessKind::Unterminated: return "unterminated";
    case WitnessKind::ShapeMismatch: return "shape-mismatch";
  }
  return "?";
}

// --- tables ------------------------------------------------------------------

const TableEntry& ConnectivityTable::at(int row, int col) const {
  if (row < 0 || row >= size || col < 0 || col >= size) {
    throw AddressOutOfRange("table cell (" + std::to_string(row) + "," + std::to_string(col) +
                            ") outside " + std::to_string(size) + "x" + std::to_string(size));
  }
  return entries[static_cast<std::size_t>(row * size + col)];
}

std::string ConnectivityTable::row_label(int row) const {
  if (flavor == TableFlavor::Monolithic) return format_label({row});
  return format_label({row / r, row % r});
}

std::string ConnectivityTable::col_label(int col) const { return row_label(col); }

ConnectivityTable build_table(int N) {
  require_positive(N, "N");
  ConnectivityTable t{TableFlavor::Monolithic, N, 1, N, {}};
  t.entries.reserve(static_cast<std::size_t>(N) * static_cast<std::size_t>(N));
  for (int p = 0; p < N; ++p) {
    for (int q = 0; q < N; ++q) {
      GroupPortAddress in{p, q, Side::Input};
      t.entries.push_back({in, in.swapped()});
    }
  }
  return t;
}

ConnectivityTable factorize_table(const ConnectivityTable& t, int n, int r) {
  require_positive(n, "n");
  require_positive(r, "r");
  if (t.flavor != TableFlavor::Monolithic) throw InvalidParameter("table is already factorized");
  if (t.size != n * r) {
    throw InvalidParameter("table size " + std::to_string(t.size) + " != n*r = " +
                           std::to_string(n * r));
  }
  ConnectivityTable out{TableFlavor::Factorized, t.size, n, r, {}};
  out.entries.reserve(t.entries.size());
  for (int row = 0; row < t.size; ++row) {
    for (int col = 0; col < t.size; ++col) {
      const auto& e = t.at(row, col);
      const auto& in = std::get<GroupPortAddress>(e.input);
      const auto& outp = std::get<GroupPortAddress>(e.output);
      // Modulo-r on every number, then prefix the row period a and column
      // period b.
      const int a = row / r;
      const int b = col / r;
      ModularAddress min{{a, in.group % r}, {b, in.port % r}, in.side};
      ModularAddress mout{{b, outp.group % r}, {a, outp.port % r}, outp.side};
      out.entries.push_back({min, mout});
    }
  }
  return out;
}

ConnectivityTable flatten_table(const ConnectivityTable& t) {
  if (t.flavor != TableFlavor::Factorized) return t;
  ConnectivityTable out{TableFlavor::Monolithic, t.size, 1, t.size, {}};
  out.entries.reserve(t.entries.size());
  for (const auto& e : t.entries) {
    out.entries.push_back({std::get<ModularAddress>(e.input).flatten(t.r),
                           std::get<ModularAddress>(e.output).flatten(t.r)});
  }
  return out;
}

ConnectivityTable sub_table(const ConnectivityTable& t, int a, int b) {
  if (t.flavor != TableFlavor::Factorized) throw InvalidParameter("sub_table needs a factorized table");
  if (a < 0 || a >= t.n || b < 0 || b >= t.n) {
    throw AddressOutOfRange("period (" + std::to_string(a) + "," + std::to_string(b) + ") out of range");
  }
  ConnectivityTable out{TableFlavor::Monolithic, t.r, 1, t.r, {}};
  for (int pp = 0; pp < t.r; ++pp) {
    for (int qq = 0; qq < t.r; ++qq) {
      const auto& e = t.at(a * t.r + pp, b * t.r + qq);
      const auto& in = std::get<ModularAddress>(e.input);
      const auto& outp = std::get<ModularAddress>(e.output);
      out.entries.push_back({GroupPortAddress{in.group.offset, in.port.offset, in.side},
                             GroupPortAddress{outp.group.offset, outp.port.offset, outp.side}});
    }
  }
  return out;
}

std::vector<std::string> table_requirement_violations(const ConnectivityTable& t) {
  std::vector<std::string> out;
  const auto cells = static_cast<std::size_t>(t.size) * static_cast<std::size_t>(t.size);
  if (t.size < 1 || t.entries.size() != cells) {
    out.push_back("R1: table has " + std::to_string(t.entries.size()) + " entries, expected " +
                  std::to_string(cells));
    return out;
  }
  const ConnectivityTable flat = flatten_table(t);
  std::set<std::pair<int, int>> fibers;
  for (int row = 0; row < t.size; ++row) {
    for (int col = 0; col < t.size; ++col) {
      const auto& e = flat.at(row, col);
      const auto& in = std::get<GroupPortAddress>(e.input);
      const auto& outp = std::get<GroupPortAddress>(e.output);
      const std::string cell = "(" + t.row_label(row) + "," + t.col_label(col) + ")";
      if (in.group != row || outp.group != col) {
        out.push_back("R1: entry " + cell + " does not join input group " + t.row_label(row) +
                      " to output group " + t.col_label(col));
      }
      if (!fibers.insert({in.group, in.port}).second) {
        out.push_back("R1: entry " + cell + " repeats a fiber");
      }
      const auto& raw = t.at(row, col);
      if (raw.output != counterpart(raw.input)) {
        out.push_back("R2: entry " + cell + " second address is not the swap of the first");
      }
    }
  }
  if (t.flavor == TableFlavor::Factorized) {
    if (t.n * t.r != t.size) {
      out.push_back("R3: n*r does not match table size");
      return out;
    }
    const ConnectivityTable pattern = build_table(t.r);
    for (int a = 0; a < t.n; ++a) {
      for (int b = 0; b < t.n; ++b) {
        if (sub_table(t, a, b).entries != pattern.entries) {
          out.push_back("R3: sub-table T_" + format_label({a, b}) +
                        " is not the connectivity table of S(" + std::to_string(t.r) + ")");
        }
      }
    }
  }
  return out;
}

ConnectivityTable table_of(const ShuffleNetwork& s) {
  ConnectivityTable t{TableFlavor::Monolithic, s.size, 1, s.size, {}};
  const auto N = static_cast<std::size_t>(s.size);
  std::vector<std::optional<TableEntry>> cells(N * N);
  for (const auto& f : s.fibers) {
    if (f.input.group < 0 || f.input.group >= s.size || f.output.group < 0 ||
        f.output.group >= s.size) {
      throw FabricFault("fiber outside the network");
    }
    auto& c = cells[static_cast<std::size_t>(f.input.group) * N + static_cast<std::size_t>(f.output.group)];
    if (c) throw FabricFault("two fibers between one pair of groups");
    c = TableEntry{f.input, f.output};
  }
  for (auto& c : cells) {
    if (!c) throw FabricFault("a pair of groups has no fiber");
    t.entries.push_back(*c);
  }
  return t;
}

ConnectivityTable table_of(const ModularShuffleNetwork& m) {
  const int N = m.n * m.r;
  ConnectivityTable t{TableFlavor::Factorized, N, m.n, m.r, {}};
  const auto size = static_cast<std::size_t>(N);
  std::vector<std::optional<TableEntry>> cells(size * size);
  for (const auto& f : trace_fibers(m)) {
    if (!f.output) throw FabricFault("unterminated fiber " + to_string(Address{f.input}) + ": " + f.note);
    const int row = f.input.group.block * m.r + f.input.group.offset;
    const int col = f.output->group.block * m.r + f.output->group.offset;
    if (row < 0 || row >= N || col < 0 || col >= N) throw FabricFault("fiber outside the network");
    auto& c = cells[static_cast<std::size_t>(row) * size + static_cast<std::size_t>(col)];
    if (c) throw FabricFault("two fibers between one pair of groups");
    c = TableEntry{f.input, *f.output};
  }
  for (auto& c : cells) {
    if (!c) throw FabricFault("a pair of groups has no fiber");
    t.entries.push_back(*c);
  }
  return t;
}

std::string entry_text(const TableEntry& e) { return to_string(e.input) + ", " + to_string(e.output); }

}  // namespace oxc
