#pragma once

#include <compare>
#include <cstdint>
#include <span>

#include "msq/graph.hpp"

namespace msq {

// Diamond-shaped cells of the (|V|, |E|) plane, anchored at (x0, y0), with
// diagonal length l.
struct PartitionParams {
  std::int64_t x0 = 0;
  std::int64_t y0 = 0;
  std::int64_t l = 4;

  bool operator==(const PartitionParams&) const = default;
};

// Offsets along y = x (i) and y = -x (j) relative to cell A_{0,0}.
struct RegionId {
  std::int64_t i = 0;
  std::int64_t j = 0;

  auto operator<=>(const RegionId&) const = default;
};

struct QueryRegion {
  std::int64_t i1 = 0, i2 = 0, j1 = 0, j2 = 0;

  bool contains(RegionId r) const { return i1 <= r.i && r.i <= i2 && j1 <= r.j && r.j <= j2; }
  bool operator==(const QueryRegion&) const = default;
};

// Floor division rounding toward negative infinity. Requires b > 0.
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  const std::int64_t q = a / b;
  return (a % b != 0 && a < 0) ? q - 1 : q;
}

RegionId subregion_of(std::int64_t n_vertices, std::int64_t n_edges, const PartitionParams& p);

QueryRegion query_region(std::int64_t n_vertices, std::int64_t n_edges, std::int64_t tau,
                         const PartitionParams& p);

// x0 = min |V|, y0 = min |E| over the graphs, l = 4.
PartitionParams default_partition(std::span<const LabeledGraph> graphs);

}  // namespace msq
