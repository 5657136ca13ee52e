#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "oxc/topology.hpp"

namespace oxc {

/// R(p, q, lambda): wavelength `wavelength` from external input p to
/// external output q. Modular addresses are carried flattened.
struct ConnectionRequest {
  int input = 0;
  int output = 0;
  Wavelength wavelength;

  static ConnectionRequest modular(SplitIndex input, SplitIndex output, Wavelength wl,
                                   const FabricParams& params);
  auto operator<=>(const ConnectionRequest&) const = default;
};

struct Hop {
  NodeIndex node = 0;
  std::optional<int> in_port;
  std::optional<int> out_port;

  bool operator==(const Hop&) const = default;
};

/// Hops from the external input to the external output, and the fibers
/// between them in order. Inside an unsealed module the hops are the
/// module's internal WSSs rather than the module node.
struct RoutedPath {
  std::vector<Hop> hops;
  std::vector<EdgeIndex> edges;
  Wavelength wavelength;

  bool operator==(const RoutedPath&) const = default;
};

// Throws AddressOutOfRange for a bad request and FabricFault when the
// wiring does not carry the self-routed path.
void check_request(const FabricTopology& fabric, const ConnectionRequest& req);
RoutedPath resolve_path(const FabricTopology& fabric, const ConnectionRequest& req);

// Fibers lit by the path: its own edges plus every output fiber of a
// broadcast coupler on it. Sorted, unique.
std::vector<EdgeIndex> lit_edges(const FabricTopology& fabric, const RoutedPath& path);

std::size_t stage_fiber_count(const FabricTopology& fabric, const RoutedPath& path);

struct ConnectionId {
  std::uint64_t value = 0;
  auto operator<=>(const ConnectionId&) const = default;
};

/// Per-wavelength in->out selection held by one switching element.
struct PortAssignment {
  int in_port = 0;
  int out_port = 0;
  ConnectionId owner;

  bool operator==(const PortAssignment&) const = default;
};

struct ActiveConnection {
  ConnectionRequest request;
  RoutedPath path;
  std::vector<EdgeIndex> lit;

  bool operator==(const ActiveConnection&) const = default;
};

/// Occupancy ledger of one routing session on one fabric.
///
/// Single writer. Equality compares observable state (occupancy, element
/// selections, active connections), not the id counter.
class WavelengthState {
 public:
  explicit WavelengthState(const FabricTopology& fabric);

  int wavelengths() const { return w_; }
  std::optional<ConnectionId> holder(EdgeIndex edge, Wavelength wl) const;
  const std::vector<PortAssignment>& selections(NodeIndex node, Wavelength wl) const;
  const std::map<ConnectionId, ActiveConnection>& active() const { return active_; }

  // Occupies an already resolved path. Throws WavelengthBusyAtEndpoint or
  // InternalContention and leaves the state untouched on failure.
  ConnectionId commit(const FabricTopology& fabric, const ConnectionRequest& req, RoutedPath path);
  RoutedPath release(ConnectionId id);

  bool operator==(const WavelengthState& other) const;

 private:
  std::size_t slot(EdgeIndex e, Wavelength wl) const;
  std::size_t element_slot(NodeIndex n, Wavelength wl) const;

  int w_;
  std::size_t edge_count_;
  std::size_t node_count_;
  std::vector<std::uint64_t> occupancy_;  // 0 = free
  std::vector<std::vector<PortAssignment>> elements_;
  std::map<ConnectionId, ActiveConnection> active_;
  std::uint64_t next_id_ = 1;
};

ConnectionId setup(WavelengthState& state, const FabricTopology& fabric, const ConnectionRequest& req);
RoutedPath teardown(WavelengthState& state, ConnectionId id);

// Empty iff occupancy equals the union of active connections' lit fibers at
// their wavelengths and element selections match the active paths.
std::vector<std::string> check_state(const WavelengthState& state, const FabricTopology& fabric);

}  // namespace oxc
