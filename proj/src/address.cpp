#include "oxc/address.hpp"

#include <sstream>
#include <type_traits>

#include "oxc/errors.hpp"

namespace oxc {

FabricParams FabricParams::classical(int N, int w) { return checked(N, 1, N, w); }

FabricParams FabricParams::modular(int n, int r, int w) {
  if (n < 1 || r < 1) {
    throw InvalidParameter("n and r must be positive (got n=" + std::to_string(n) +
                           ", r=" + std::to_string(r) + ")");
  }
  return checked(n * r, n, r, w);
}

FabricParams FabricParams::checked(int N, int n, int r, int w) {
  FabricParams p{N, n, r, w};
  p.validate();
  return p;
}

void FabricParams::validate() const {
  if (N < 1 || n < 1 || r < 1 || w < 1) {
    throw InvalidParameter("fabric parameters must be positive (N=" + std::to_string(N) +
                           ", n=" + std::to_string(n) + ", r=" + std::to_string(r) +
                           ", w=" + std::to_string(w) + ")");
  }
  if (N != n * r) {
    throw InvalidParameter("N must equal n*r (N=" + std::to_string(N) + ", n=" +
                           std::to_string(n) + ", r=" + std::to_string(r) + ")");
  }
}

SplitIndex split_index(int index, int inner, int size) {
  if (inner < 1 || size < 1 || size % inner != 0) {
    throw InvalidParameter("inner factor " + std::to_string(inner) + " does not divide " +
                           std::to_string(size));
  }
  if (index < 0 || index >= size) {
    throw AddressOutOfRange("index " + std::to_string(index) + " outside [0," +
                            std::to_string(size) + ")");
  }
  return {index / inner, index % inner};
}

int flatten_index(SplitIndex s, int inner, int outer) {
  if (inner < 1 || outer < 1) {
    throw InvalidParameter("factors must be positive");
  }
  if (s.block < 0 || s.block >= outer || s.offset < 0 || s.offset >= inner) {
    throw AddressOutOfRange("split index (" + std::to_string(s.block) + "," +
                            std::to_string(s.offset) + ") outside [0," + std::to_string(outer) +
                            ")x[0," + std::to_string(inner) + ")");
  }
  return s.block * inner + s.offset;
}

GroupPortAddress ModularAddress::flatten(int r) const {
  return {group.block * r + group.offset, port.block * r + port.offset, side};
}

ModularAddress ModularAddress::split(const GroupPortAddress& a, int r) {
  return {{a.group / r, a.group % r}, {a.port / r, a.port % r}, a.side};
}

Address counterpart(const Address& a) {
  return std::visit(
      [](const auto& x) -> Address {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, GroupPortAddress>) {
          return x.swapped();
        } else {
          return x.inverse();
        }
      },
      a);
}

std::vector<int> components(const Address& a) {
  if (const auto* g = std::get_if<GroupPortAddress>(&a)) {
    return {g->group, g->port};
  }
  const auto& m = std::get<ModularAddress>(a);
  return {m.group.block, m.group.offset, m.port.block, m.port.offset};
}

std::string format_label(std::span<const int> parts) {
  bool digits = true;
  for (int v : parts) digits = digits && v >= 0 && v <= 9;
  std::ostringstream os;
  if (digits) {
    for (int v : parts) os << v;
    return os.str();
  }
  os << '(';
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) os << ',';
    os << parts[i];
  }
  os << ')';
  return os.str();
}

std::string format_label(std::initializer_list<int> parts) {
  return format_label(std::span<const int>(parts.begin(), parts.size()));
}

std::string to_string(const Address& a) {
  auto c = components(a);
  return format_label(c);
}

}  // namespace oxc
