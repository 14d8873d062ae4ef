#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "msq/bits.hpp"
#include "msq/hybrid.hpp"
#include "msq/qtree.hpp"

namespace msq {

enum class Vec : std::uint8_t { kD = 0, kL = 1 };

// Bits used by one vector family (D or L) of a succinct tree.
struct VectorSpace {
  std::uint64_t b = 0;        // B_X itself
  std::uint64_t b_rank = 0;   // rank directory over B_X
  std::uint64_t s = 0;
  std::uint64_t sb = 0;
  std::uint64_t flag = 0;     // flag bits plus their rank directory
  std::uint64_t words = 0;

  std::uint64_t total() const { return b + b_rank + s + sb + flag + words; }
};

// S_a / S_b / S_c split, in bytes (succinct sections rounded up per family).
struct TreeBytes {
  std::uint64_t nodes = 0;  // n_v, n_e, slice boundaries / pointers, graph ids
  std::uint64_t degree = 0;
  std::uint64_t label = 0;

  std::uint64_t total() const { return nodes + degree + label; }
};

/*
 * Uncompressed four-tuple tree: every F entry, n_v, n_e, child pointer and
 * leaf graph id as a 32-bit word. Frequency vectors counted at their trimmed
 * length.
 */
TreeBytes plain_tree_bytes(const QGramTreeNode& root);

/*
 * Q-gram tree with nodes in depth-first preorder. Each node's F_D (F_L) is
 * the slice [l_X, r_X] of the indicator vector B_X; its nonzero entries are
 * the matching run of Psi_X, found with rank1 over B_X.
 */
class SuccinctTree {
 public:
  SuccinctTree() = default;
  static SuccinctTree build(const QGramTreeNode& root, std::uint32_t block);

  std::size_t node_count() const { return n_v_.size(); }
  static constexpr std::size_t root() { return 0; }

  bool is_leaf(std::size_t node) const { return leaf_[node]; }
  // One past the last node of this subtree; children are node + 1, then
  // repeatedly subtree_end(child).
  std::size_t subtree_end(std::size_t node) const { return subtree_end_[node]; }
  GraphId graph_id(std::size_t node) const {
    return static_cast<GraphId>(graph_ids_[leaf_.rank1(node)]);
  }
  std::uint32_t n_vertices(std::size_t node) const { return static_cast<std::uint32_t>(n_v_[node]); }
  std::uint32_t n_edges(std::size_t node) const { return static_cast<std::uint32_t>(n_e_[node]); }

  // Half-open slice [l_X, r_X + 1) in B_X.
  std::uint64_t slice_begin(Vec x, std::size_t node) const { return bounds(x)[node]; }
  std::uint64_t slice_end(Vec x, std::size_t node) const { return bounds(x)[node + 1]; }
  std::uint64_t slice_length(Vec x, std::size_t node) const {
    return slice_end(x, node) - slice_begin(x, node);
  }

  // F_X[i] of a node; 0 past the stored (trimmed) length.
  std::uint32_t f_access(std::size_t node, Vec x, std::uint64_t i) const {
    const std::uint64_t pos = slice_begin(x, node) + i;
    if (pos >= slice_end(x, node)) return 0;
    const auto& b = bits(x);
    if (!b[pos]) return 0;
    return static_cast<std::uint32_t>(psi(x).at(b.rank1(pos)));
  }

  // Whole F_X of a node, trimmed.
  std::vector<std::uint32_t> slice(std::size_t node, Vec x) const;
  FourTuple tuple(std::size_t node) const;

  const RankBitVector& bits(Vec x) const { return x == Vec::kD ? b_d_ : b_l_; }
  const HybridSequence& psi(Vec x) const { return x == Vec::kD ? psi_d_ : psi_l_; }

  std::size_t leaf_count() const { return graph_ids_.size(); }
  std::vector<GraphId> leaves() const;

  std::uint64_t node_bits() const;
  VectorSpace space(Vec x) const;
  TreeBytes bytes() const;

  void write(ByteWriter& out) const;
  static SuccinctTree read(ByteReader& in);

  bool operator==(const SuccinctTree&) const = default;

 private:
  const PackedIntVector& bounds(Vec x) const { return x == Vec::kD ? bounds_d_ : bounds_l_; }

  PackedIntVector bounds_d_;  // node_count + 1 entries
  PackedIntVector bounds_l_;
  PackedIntVector n_v_;
  PackedIntVector n_e_;
  PackedIntVector subtree_end_;
  RankBitVector leaf_;
  PackedIntVector graph_ids_;  // per leaf, preorder
  RankBitVector b_d_;
  RankBitVector b_l_;
  HybridSequence psi_d_;
  HybridSequence psi_l_;
};

}  // namespace msq
