#pragma once

#include <compare>
#include <initializer_list>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace oxc {

enum class Side { Input, Output };

constexpr Side opposite(Side s) { return s == Side::Input ? Side::Output : Side::Input; }

/// Port count, factorization and wavelength count of a fabric.
///
/// A classical fabric is described with a single period (n = 1, r = N), so
/// N == n * r holds for every value of this type.
struct FabricParams {
  int N = 1;
  int n = 1;
  int r = 1;
  int w = 1;

  static FabricParams classical(int N, int w);
  static FabricParams modular(int n, int r, int w);
  // Checks N == n * r and positivity; throws InvalidParameter.
  static FabricParams checked(int N, int n, int r, int w);

  void validate() const;

  bool operator==(const FabricParams&) const = default;
};

struct Wavelength {
  int index = 0;
  auto operator<=>(const Wavelength&) const = default;
};

/// Decomposition index = block * inner + offset of a flat index in [0, outer*inner).
struct SplitIndex {
  int block = 0;
  int offset = 0;
  auto operator<=>(const SplitIndex&) const = default;
};

// `size` is the flat range; throws AddressOutOfRange when index is outside
// [0, size) and InvalidParameter when inner does not divide size.
SplitIndex split_index(int index, int inner, int size);
// `outer` bounds the block component.
int flatten_index(SplitIndex s, int inner, int outer);

/// Endpoint of a shuffle network: port `port` of group `group`.
struct GroupPortAddress {
  int group = 0;
  int port = 0;
  Side side = Side::Input;

  // Input pq faces output qp.
  GroupPortAddress swapped() const { return {port, group, opposite(side)}; }

  auto operator<=>(const GroupPortAddress&) const = default;
};

/// Endpoint of a modular shuffle: group (a, p') and port (b, q').
struct ModularAddress {
  SplitIndex group;
  SplitIndex port;
  Side side = Side::Input;

  ModularAddress inverse() const { return {port, group, opposite(side)}; }
  GroupPortAddress flatten(int r) const;
  static ModularAddress split(const GroupPortAddress& a, int r);

  auto operator<=>(const ModularAddress&) const = default;
};

using Address = std::variant<GroupPortAddress, ModularAddress>;

Address counterpart(const Address& a);
std::vector<int> components(const Address& a);

// Concatenated digits ("1002") when every component is a single digit,
// otherwise tuple notation ("(1,0,10,2)").
std::string format_label(std::span<const int> parts);
std::string format_label(std::initializer_list<int> parts);
std::string to_string(const Address& a);

}  // namespace oxc
