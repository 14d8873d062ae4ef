#include "msq/succinct_tree.hpp"

#include <functional>
#include <stdexcept>

namespace msq {
namespace {

struct Flat {
  std::vector<std::uint64_t> bounds_d{0}, bounds_l{0};
  std::vector<std::uint64_t> n_v, n_e, subtree_end, graph_ids;
  std::vector<bool> leaf;
  std::vector<bool> b_d, b_l;
  std::vector<std::uint64_t> psi_d, psi_l;
};

void append_vector(const std::vector<std::uint32_t>& f, std::vector<bool>& b,
                   std::vector<std::uint64_t>& psi, std::vector<std::uint64_t>& bounds) {
  for (auto v : f) {
    b.push_back(v != 0);
    if (v) psi.push_back(v);
  }
  bounds.push_back(b.size());
}

void flatten(const QGramTreeNode& node, Flat& out) {
  const std::size_t me = out.n_v.size();
  out.n_v.push_back(node.tuple.n_vertices);
  out.n_e.push_back(node.tuple.n_edges);
  out.subtree_end.push_back(0);
  out.leaf.push_back(node.is_leaf());
  if (node.is_leaf()) {
    if (!node.graph_id) throw std::invalid_argument("leaf without graph id");
    out.graph_ids.push_back(*node.graph_id);
  }
  append_vector(node.tuple.degree, out.b_d, out.psi_d, out.bounds_d);
  append_vector(node.tuple.label, out.b_l, out.psi_l, out.bounds_l);
  for (const auto& c : node.children) flatten(c, out);
  out.subtree_end[me] = out.n_v.size();
}

RankBitVector to_rank(const std::vector<bool>& v) {
  std::vector<std::uint64_t> words(v.size() / 64 + 1, 0);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) words[i >> 6] |= std::uint64_t{1} << (i & 63);
  return RankBitVector(std::move(words), v.size());
}

std::uint64_t bytes_of(std::uint64_t bits) { return (bits + 7) / 8; }

}  // namespace

TreeBytes plain_tree_bytes(const QGramTreeNode& root) {
  TreeBytes t;
  std::function<void(const QGramTreeNode&)> visit = [&](const QGramTreeNode& n) {
    t.nodes += 4 * (2 + n.children.size() + (n.is_leaf() ? 1 : 0));
    t.degree += 4 * n.tuple.degree.size();
    t.label += 4 * n.tuple.label.size();
    for (const auto& c : n.children) visit(c);
  };
  visit(root);
  return t;
}

SuccinctTree SuccinctTree::build(const QGramTreeNode& root, std::uint32_t block) {
  Flat f;
  flatten(root, f);
  SuccinctTree t;
  t.bounds_d_ = PackedIntVector(f.bounds_d);
  t.bounds_l_ = PackedIntVector(f.bounds_l);
  t.n_v_ = PackedIntVector(f.n_v);
  t.n_e_ = PackedIntVector(f.n_e);
  t.subtree_end_ = PackedIntVector(f.subtree_end);
  t.leaf_ = to_rank(f.leaf);
  t.graph_ids_ = PackedIntVector(f.graph_ids);
  t.b_d_ = to_rank(f.b_d);
  t.b_l_ = to_rank(f.b_l);
  t.psi_d_ = HybridSequence::encode(f.psi_d, block);
  t.psi_l_ = HybridSequence::encode(f.psi_l, block);
  return t;
}

std::vector<std::uint32_t> SuccinctTree::slice(std::size_t node, Vec x) const {
  const std::uint64_t begin = slice_begin(x, node);
  const std::uint64_t len = slice_length(x, node);
  const auto& b = bits(x);
  std::vector<std::uint32_t> out(len, 0);
  const std::uint64_t first = b.rank1(begin);
  const std::uint64_t count = b.rank1(begin + len) - first;
  std::uint64_t i = 0;
  psi(x).decode(first, count, [&](std::uint64_t v) {
    while (!b[begin + i]) ++i;
    out[i++] = static_cast<std::uint32_t>(v);
  });
  return out;
}

FourTuple SuccinctTree::tuple(std::size_t node) const {
  return {slice(node, Vec::kD), slice(node, Vec::kL), n_vertices(node), n_edges(node)};
}

std::vector<GraphId> SuccinctTree::leaves() const {
  std::vector<GraphId> out;
  out.reserve(graph_ids_.size());
  for (std::size_t i = 0; i < graph_ids_.size(); ++i) out.push_back(static_cast<GraphId>(graph_ids_[i]));
  return out;
}

std::uint64_t SuccinctTree::node_bits() const {
  return bounds_d_.size_in_bits() + bounds_l_.size_in_bits() + n_v_.size_in_bits() +
         n_e_.size_in_bits() + subtree_end_.size_in_bits() + leaf_.size() +
         leaf_.directory_bits() + graph_ids_.size_in_bits();
}

VectorSpace SuccinctTree::space(Vec x) const {
  const auto& b = bits(x);
  const auto& p = psi(x);
  return {b.size(), b.directory_bits(), p.s_bits(), p.sb_bits(), p.flag_bits(), p.words_bits()};
}

TreeBytes SuccinctTree::bytes() const {
  return {bytes_of(node_bits()), bytes_of(space(Vec::kD).total()),
          bytes_of(space(Vec::kL).total())};
}

void SuccinctTree::write(ByteWriter& out) const {
  bounds_d_.write(out);
  bounds_l_.write(out);
  n_v_.write(out);
  n_e_.write(out);
  subtree_end_.write(out);
  leaf_.write(out);
  graph_ids_.write(out);
  b_d_.write(out);
  b_l_.write(out);
  psi_d_.write(out);
  psi_l_.write(out);
}

SuccinctTree SuccinctTree::read(ByteReader& in) {
  SuccinctTree t;
  t.bounds_d_ = PackedIntVector::read(in);
  t.bounds_l_ = PackedIntVector::read(in);
  t.n_v_ = PackedIntVector::read(in);
  t.n_e_ = PackedIntVector::read(in);
  t.subtree_end_ = PackedIntVector::read(in);
  t.leaf_ = RankBitVector::read(in);
  t.graph_ids_ = PackedIntVector::read(in);
  t.b_d_ = RankBitVector::read(in);
  t.b_l_ = RankBitVector::read(in);
  t.psi_d_ = HybridSequence::read(in);
  t.psi_l_ = HybridSequence::read(in);

  // Structural checks so a corrupt blob cannot index out of bounds later.
  const std::size_t n = t.n_v_.size();
  if (n == 0 || t.n_e_.size() != n || t.subtree_end_.size() != n || t.leaf_.size() != n ||
      t.bounds_d_.size() != n + 1 || t.bounds_l_.size() != n + 1 ||
      t.graph_ids_.size() != t.leaf_.ones())
    throw FormatError("tree node arrays disagree in length");
  for (std::size_t k = 0; k < n; ++k) {
    const auto end = t.subtree_end_[k];
    if (end <= k || end > n || (t.leaf_[k] != (end == k + 1)))
      throw FormatError("bad subtree structure");
    if (t.bounds_d_[k] > t.bounds_d_[k + 1] || t.bounds_l_[k] > t.bounds_l_[k + 1])
      throw FormatError("bad slice boundaries");
  }
  if (t.bounds_d_[0] != 0 || t.bounds_l_[0] != 0 || t.bounds_d_[n] != t.b_d_.size() ||
      t.bounds_l_[n] != t.b_l_.size() || t.b_d_.ones() != t.psi_d_.size() ||
      t.b_l_.ones() != t.psi_l_.size())
    throw FormatError("vector sizes disagree");
  return t;
}

}  // namespace msq
