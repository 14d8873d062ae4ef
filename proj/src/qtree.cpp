#include "msq/qtree.hpp"

#include <algorithm>
#include <stdexcept>

namespace msq {
namespace {

std::vector<std::uint32_t> max_merge(const std::vector<std::uint32_t>& a,
                                     const std::vector<std::uint32_t>& b) {
  const auto& longer = a.size() >= b.size() ? a : b;
  const auto& shorter = a.size() >= b.size() ? b : a;
  std::vector<std::uint32_t> out(longer);
  for (std::size_t i = 0; i < shorter.size(); ++i) out[i] = std::max(out[i], shorter[i]);
  return out;
}

using Leaves = std::vector<std::pair<GraphId, FourTuple>>;

QGramTreeNode build_range(Leaves& leaves, std::size_t begin, std::size_t end,
                          std::uint32_t fanout) {
  const std::size_t m = end - begin;
  if (m == 1) {
    QGramTreeNode leaf;
    leaf.graph_id = leaves[begin].first;
    leaf.tuple = std::move(leaves[begin].second);
    return leaf;
  }
  QGramTreeNode node;
  const std::size_t groups = std::min<std::size_t>(fanout, m);
  const std::size_t base = m / groups;
  const std::size_t extra = m % groups;
  std::size_t at = begin;
  for (std::size_t k = 0; k < groups; ++k) {
    const std::size_t size = base + (k < extra ? 1 : 0);
    node.children.push_back(build_range(leaves, at, at + size, fanout));
    at += size;
  }
  node.tuple = node.children.front().tuple;
  for (std::size_t k = 1; k < node.children.size(); ++k)
    node.tuple = unite(node.tuple, node.children[k].tuple);
  return node;
}

}  // namespace

FourTuple unite(const FourTuple& a, const FourTuple& b) {
  return {max_merge(a.degree, b.degree), max_merge(a.label, b.label),
          std::min(a.n_vertices, b.n_vertices), std::min(a.n_edges, b.n_edges)};
}

QGramTreeNode build_tree(std::vector<std::pair<GraphId, FourTuple>> leaves,
                         std::uint32_t fanout) {
  if (fanout < 2) throw std::invalid_argument("tree fan-out must be >= 2");
  if (leaves.empty()) throw std::invalid_argument("cannot build a q-gram tree with no leaves");
  return build_range(leaves, 0, leaves.size(), fanout);
}

std::size_t count_nodes(const QGramTreeNode& root) {
  std::size_t n = 1;
  for (const auto& c : root.children) n += count_nodes(c);
  return n;
}

}  // namespace msq
