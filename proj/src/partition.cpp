#include "msq/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace msq {

RegionId subregion_of(std::int64_t n_vertices, std::int64_t n_edges, const PartitionParams& p) {
  if (p.l < 1) throw std::invalid_argument("partition length must be >= 1");
  return {floor_div((n_vertices + n_edges) - (p.x0 + p.y0), p.l),
          floor_div((n_edges - n_vertices) - (p.y0 - p.x0), p.l)};
}

QueryRegion query_region(std::int64_t n_vertices, std::int64_t n_edges, std::int64_t tau,
                         const PartitionParams& p) {
  if (tau < 0) throw std::invalid_argument("tau must be >= 0");
  if (p.l < 1) throw std::invalid_argument("partition length must be >= 1");
  const std::int64_t diag = p.x0 + p.y0;
  const std::int64_t anti = p.y0 - p.x0;
  return {floor_div(n_edges - tau + n_vertices - diag, p.l),
          floor_div(n_edges + tau + n_vertices - diag, p.l),
          floor_div(n_edges - tau - n_vertices - anti, p.l),
          floor_div(n_edges + tau - n_vertices - anti, p.l)};
}

PartitionParams default_partition(std::span<const LabeledGraph> graphs) {
  PartitionParams p;
  if (graphs.empty()) return p;
  const auto vmin = std::min_element(graphs.begin(), graphs.end(), [](auto& a, auto& b) {
    return a.vertex_count() < b.vertex_count();
  });
  const auto emin = std::min_element(graphs.begin(), graphs.end(), [](auto& a, auto& b) {
    return a.edge_count() < b.edge_count();
  });
  p.x0 = static_cast<std::int64_t>(vmin->vertex_count());
  p.y0 = static_cast<std::int64_t>(emin->edge_count());
  return p;
}

}  // namespace msq
