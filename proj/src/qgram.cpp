#include "msq/qgram.hpp"

namespace msq {

std::vector<DegreeQGram> degree_qgrams(const LabeledGraph& g) {
  auto adj = g.incident_labels();
  std::vector<DegreeQGram> out;
  out.reserve(g.vertex_count());
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const auto d = static_cast<std::uint32_t>(adj[v].size());
    out.push_back({g.vertex_label(v), std::move(adj[v]), d});
  }
  return out;
}

std::vector<LabelQGram> label_qgrams(const LabeledGraph& g) {
  std::vector<LabelQGram> out;
  out.reserve(g.vertex_count() + g.edge_count());
  for (Symbol s : g.vertex_labels()) out.push_back({LabelKind::kVertex, s});
  for (const auto& e : g.edges()) out.push_back({LabelKind::kEdge, e.label});
  return out;
}

Vocabularies build_vocab(std::span<const LabeledGraph> graphs) {
  std::unordered_map<DegreeQGram, std::uint64_t, DegreeQGramHash> dcount;
  std::unordered_map<LabelQGram, std::uint64_t, LabelQGramHash> lcount;
  for (const auto& g : graphs) {
    for (auto& q : degree_qgrams(g)) ++dcount[std::move(q)];
    for (const auto& q : label_qgrams(g)) ++lcount[q];
  }
  return {DegreeVocabulary::from_counts(dcount), LabelVocabulary::from_counts(lcount)};
}

namespace {

template <class Vocab, class Key>
void tally(const Vocab& vocab, const std::vector<Key>& grams, std::vector<std::uint32_t>& out,
           std::uint32_t& unmatched) {
  for (const auto& q : grams) {
    auto id = vocab.find(q);
    if (!id) {
      ++unmatched;
      continue;
    }
    if (*id >= out.size()) out.resize(*id + 1, 0);
    ++out[*id];
  }
}

}  // namespace

TupleEncoding encode_four_tuple(const LabeledGraph& g, const DegreeVocabulary& vd,
                                const LabelVocabulary& vl) {
  TupleEncoding enc;
  enc.tuple.n_vertices = static_cast<std::uint32_t>(g.vertex_count());
  enc.tuple.n_edges = static_cast<std::uint32_t>(g.edge_count());
  tally(vd, degree_qgrams(g), enc.tuple.degree, enc.unmatched);
  tally(vl, label_qgrams(g), enc.tuple.label, enc.unmatched);
  return enc;
}

std::uint64_t common_count(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n; ++i) sum += std::min(a[i], b[i]);
  return sum;
}

std::uint64_t common_vertex_labels(std::span<const std::uint32_t> a,
                                   std::span<const std::uint32_t> b, const LabelVocabulary& vl) {
  const std::size_t n = std::min(a.size(), b.size());
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (vl.at(static_cast<std::uint32_t>(i)).kind == LabelKind::kVertex) sum += std::min(a[i], b[i]);
  return sum;
}

}  // namespace msq
