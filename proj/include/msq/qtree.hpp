#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "msq/graph.hpp"
#include "msq/qgram.hpp"

namespace msq {

// Position-wise max over the common prefix, longer tail copied; min of the
// vertex and edge counts.
FourTuple unite(const FourTuple& a, const FourTuple& b);

struct QGramTreeNode {
  FourTuple tuple;
  std::vector<QGramTreeNode> children;
  std::optional<GraphId> graph_id;  // set iff leaf

  bool is_leaf() const { return children.empty(); }
};

/*
 * Balanced q-gram tree over the given leaves, in input order. A node with
 * m > d leaves gets d children whose leaf counts differ by at most one
 * (larger groups first); a node with 2 <= m <= d leaves has them all as
 * direct children. Leaf depths therefore differ by at most one.
 */
QGramTreeNode build_tree(std::vector<std::pair<GraphId, FourTuple>> leaves, std::uint32_t fanout);

std::size_t count_nodes(const QGramTreeNode& root);

}  // namespace msq
