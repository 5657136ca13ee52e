#pragma once

#include <algorithm>
#include <cstddef>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oxc/shuffle.hpp"
#include "oxc/topology.hpp"

namespace oxc::testing {

// Outputs reachable from each external input by breadth-first search over
// fibers. Module ports hop to the internal element that realizes them.
inline std::vector<std::set<int>> reachable_outputs(const FabricTopology& t) {
  const auto& nodes = t.nodes();
  std::vector<std::vector<std::size_t>> next(nodes.size());
  for (const auto& e : t.edges()) {
    if (e.from.node < nodes.size() && e.to.node < nodes.size()) next[e.from.node].push_back(e.to.node);
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& rp = nodes[i].realizes;
    if (!rp) continue;
    const std::size_t module = *t.find({NodeKind::OxcModule, {rp->a, rp->b}});
    if (rp->side == Side::Input) {
      next[module].push_back(i);
    } else {
      next[i].push_back(module);
    }
  }
  std::vector<std::set<int>> out;
  for (std::size_t s = 0; s < nodes.size(); ++s) {
    if (nodes[s].id.kind != NodeKind::ExternalInput) continue;
    std::set<int> hit;
    std::vector<char> seen(nodes.size(), 0);
    std::queue<std::size_t> todo;
    todo.push(s);
    seen[s] = 1;
    while (!todo.empty()) {
      const std::size_t u = todo.front();
      todo.pop();
      if (nodes[u].id.kind == NodeKind::ExternalOutput) hit.insert(nodes[u].id.label.at(0));
      for (std::size_t v : next[u]) {
        if (!seen[v]) {
          seen[v] = 1;
          todo.push(v);
        }
      }
    }
    out.push_back(hit);
  }
  return out;
}

enum class FaultKind { Delete, Rewire };

struct InjectedFault {
  FaultKind kind = FaultKind::Delete;
  std::size_t first = 0;
  std::size_t second = 0;
  std::string text;
};

// Deletes one fiber, or swaps the far ends of two fibers of the same kind.
inline FabricTopology inject_fault(const FabricTopology& t, std::mt19937_64& rng, InjectedFault& fault) {
  std::vector<FiberEdge> edges = t.edges();
  std::uniform_int_distribution<std::size_t> pick(0, edges.size() - 1);
  fault.first = pick(rng);
  if (fault.kind == FaultKind::Delete) {
    fault.text = "delete fiber " + std::to_string(fault.first);
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(fault.first));
    for (std::size_t i = 0; i < edges.size(); ++i) edges[i].id = i;
  } else {
    std::vector<std::size_t> peers;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      if (i != fault.first && edges[i].kind == edges[fault.first].kind) peers.push_back(i);
    }
    if (peers.empty()) {
      fault.kind = FaultKind::Delete;
      return inject_fault(t, rng, fault);
    }
    fault.second = peers[std::uniform_int_distribution<std::size_t>(0, peers.size() - 1)(rng)];
    fault.text = "swap far ends of fibers " + std::to_string(fault.first) + " and " + std::to_string(fault.second);
    std::swap(edges[fault.first].to, edges[fault.second].to);
  }
  return FabricTopology(t.params(), t.stage(), t.options(), t.nodes(), std::move(edges));
}

// Same two fault kinds on the cabling of a modular shuffle.
inline ModularShuffleNetwork inject_fault(const ModularShuffleNetwork& m, std::mt19937_64& rng,
                                          InjectedFault& fault) {
  ModularShuffleNetwork out = m;
  const bool input_side = std::uniform_int_distribution<int>(0, 1)(rng) == 0;
  auto& links = input_side ? out.input_links : out.output_links;
  std::uniform_int_distribution<std::size_t> pick(0, links.size() - 1);
  fault.first = pick(rng);
  const std::string side = input_side ? "input" : "output";
  if (fault.kind == FaultKind::Delete || links.size() < 2) {
    fault.kind = FaultKind::Delete;
    fault.text = "delete " + side + " link " + std::to_string(fault.first);
    links.erase(links.begin() + static_cast<std::ptrdiff_t>(fault.first));
  } else {
    do {
      fault.second = pick(rng);
    } while (fault.second == fault.first);
    fault.text = "swap " + side + " links " + std::to_string(fault.first) + " and " + std::to_string(fault.second);
    std::swap(links[fault.first].inner, links[fault.second].inner);
  }
  return out;
}

}  // namespace oxc::testing
