#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "spx/grid.hpp"
#include "spx/hadamard.hpp"

namespace spx {

enum class Connectivity { four = 4, eight = 8 };
enum class Color { white, black };

/// Pixel counts of every maximal connected component of `color` in `cells`
/// (any nonzero cell is white), in raster order of each component's first
/// pixel. Empty when no pixel has that color.
std::vector<std::size_t> connected_components(const BinaryGrid& cells,
                                              Connectivity connectivity,
                                              Color color);

struct RegionStat {
  std::size_t pattern_index = 0;
  /// Pixel count of the largest connected white component (the m00 area).
  std::size_t max_white_area = 0;
  /// White components plus black components.
  std::size_t region_count = 0;

  friend bool operator==(const RegionStat&, const RegionStat&) = default;
};

RegionStat max_effective_area(const Pattern& p,
                              Connectivity connectivity = Connectivity::four);

/// Region stats of all n^2 patterns, indexed by pattern index. `workers` > 1
/// splits the index range across threads; results do not depend on it.
std::vector<RegionStat> region_stats(std::size_t n, Connectivity connectivity,
                                     unsigned workers = 1);

enum class OrderKind { eahsi, natural, random, region_count_baseline };

struct OrderingMethod {
  OrderKind kind = OrderKind::eahsi;
  std::uint64_t seed = 0;  // random only

  /// "eahsi", "natural", "random(seed=S)", "region_count_baseline".
  std::string to_string() const;
  /// Accepts the to_string() forms plus "random" (seed 0) and
  /// "random:S". Throws ConfigError for anything else.
  static OrderingMethod parse(std::string_view text);

  friend bool operator==(const OrderingMethod&, const OrderingMethod&) = default;
};

struct OrderedSequence {
  std::size_t n = 0;
  OrderingMethod method;
  Connectivity connectivity = Connectivity::four;
  std::vector<std::size_t> order;

  friend bool operator==(const OrderedSequence&, const OrderedSequence&) = default;
};

/// Default upper bound on n for orderings that label every pattern.
inline constexpr std::size_t kDefaultMaxOrderingSide = 128;

/// All n^2 patterns by descending max_white_area, ties by ascending index.
OrderedSequence eahsi_order(std::size_t n,
                            Connectivity connectivity = Connectivity::four,
                            unsigned workers = 1,
                            std::size_t max_side = kDefaultMaxOrderingSide);

/// natural, random(seed) or region_count_baseline (ascending total region
/// count under 4-connectivity, ties by index). Throws ConfigError when
/// `method` is eahsi.
OrderedSequence baseline_order(std::size_t n, OrderingMethod method,
                               unsigned workers = 1,
                               std::size_t max_side = kDefaultMaxOrderingSide);

/// Dispatches to eahsi_order or baseline_order.
OrderedSequence make_order(std::size_t n, OrderingMethod method,
                           Connectivity connectivity = Connectivity::four,
                           unsigned workers = 1,
                           std::size_t max_side = kDefaultMaxOrderingSide);

bool is_permutation_of_range(const std::vector<std::size_t>& order,
                             std::size_t size);

/// "# spx-order v1 n=<n> method=<method> connectivity=<4|8>" followed by one
/// index per line.
std::string format_ordering(const OrderedSequence& seq);
OrderedSequence parse_ordering(std::string_view text);

}  // namespace spx
