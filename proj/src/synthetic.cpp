#include "msq/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>

namespace msq {
namespace {

constexpr const char* kElements[62] = {
    "C",  "O",  "N",  "S",  "Cl", "P",  "F",  "Br", "I",  "Si", "Na", "Hg", "Sn",
    "Cu", "As", "Pt", "Co", "Se", "B",  "Fe", "Ga", "Ge", "Sb", "Bi", "Te", "Ni",
    "Pd", "Ru", "Rh", "Au", "Ag", "Zn", "Tb", "Ir", "W",  "Mn", "Mg", "Li", "Ho",
    "Ca", "Cr", "K",  "Tl", "Gd", "U",  "Nb", "Zr", "Cd", "Os", "Re", "Al", "Pb",
    "Er", "V",  "Ti", "Ac", "Sm", "Eu", "Nd", "Ba", "Y",  "Pr"};

// Valence by element index; anything past Br gets 4 (metals, Si, ...).
std::uint32_t valence(std::uint32_t e) {
  static constexpr std::uint32_t v[] = {4, 2, 3, 2, 1, 5, 1, 1, 1};
  return e < 9 ? v[e] : 4;
}

constexpr std::uint32_t kMaxDegree = 4;

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }
  std::uint32_t below(std::uint32_t n) { return static_cast<std::uint32_t>(uniform() * n); }
  std::uint32_t pick(const std::vector<double>& cdf) {
    const double u = uniform() * cdf.back();
    return static_cast<std::uint32_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
  }
  double exponential(double mean) { return -std::log(1.0 - uniform()) * mean; }

 private:
  std::mt19937_64 rng_;
};

std::vector<double> cumulative(const std::vector<double>& w) {
  std::vector<double> c(w.size());
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) c[i] = (s += w[i]);
  return c;
}

// Element weights truncated to the first k labels.
std::vector<double> element_cdf(std::vector<double> head, std::uint32_t k, double tail_mass) {
  head.resize(std::min<std::size_t>(head.size(), k), 0.0);
  std::vector<double> w = head;
  double z = 0;
  for (std::uint32_t i = static_cast<std::uint32_t>(head.size()); i < k; ++i) z += 1.0 / (i + 1.0);
  for (std::uint32_t i = static_cast<std::uint32_t>(head.size()); i < k; ++i)
    w.push_back(tail_mass / (i + 1.0) / z);
  return cumulative(w);
}

std::uint32_t vertex_count(Sampler& s, const SyntheticParams& p) {
  double x = 0;
  for (int k = 0; k < 4; ++k) x += s.exponential(p.mean_vertices / 4);
  return std::clamp<std::uint32_t>(static_cast<std::uint32_t>(std::lround(x)), p.min_vertices,
                                   p.max_vertices);
}

LabeledGraph random_tree_graph(Sampler& s, const SyntheticParams& p, GraphId id,
                               const std::vector<double>& vcdf) {
  static const auto ecdf = cumulative({0.80, 0.15, 0.05});
  const std::uint32_t n = vertex_count(s, p);
  LabeledGraph g(id);
  std::vector<std::uint32_t> deg(n, 0);
  for (std::uint32_t v = 0; v < n; ++v) g.add_vertex(s.pick(vcdf));
  for (std::uint32_t v = 1; v < n; ++v) {
    std::uint32_t parent = s.below(v);
    while (deg[parent] >= kMaxDegree) parent = s.below(v);
    g.add_edge(parent, v, s.pick(ecdf));
    ++deg[parent], ++deg[v];
  }
  const auto rings = static_cast<std::uint32_t>(p.rings_per_vertex * n + s.uniform());
  for (std::uint32_t r = 0, tries = 0; r < rings && tries < 50 * (rings + 1); ++tries) {
    const std::uint32_t a = s.below(n);
    const std::uint32_t b = s.below(n);
    if (a == b || deg[a] >= kMaxDegree || deg[b] >= kMaxDegree || g.has_edge(a, b)) continue;
    g.add_edge(a, b, s.pick(ecdf));
    ++deg[a], ++deg[b], ++r;
  }
  return g;
}

class MoleculeBuilder {
 public:
  MoleculeBuilder(Sampler& s, const std::vector<double>& ring_cdf, const std::vector<double>& chain_cdf)
      : s_(s), ring_cdf_(ring_cdf), chain_cdf_(chain_cdf) {}

  LabeledGraph build(GraphId id, std::uint32_t n, double rings_per_vertex) {
    g_ = LabeledGraph(id);
    used_.clear();
    deg_.clear();
    ring_edges_.clear();
    std::uint32_t rings = static_cast<std::uint32_t>(rings_per_vertex * n + s_.uniform());
    while (rings > 0) {
      const std::uint32_t size = s_.chance(0.7) ? 6 : 5;
      if (g_.vertex_count() + size > n) break;
      if (!add_ring(size)) break;
      --rings;
    }
    if (g_.vertex_count() == 0) add_atom(s_.pick(chain_cdf_));
    while (g_.vertex_count() < n) {
      const std::uint32_t e = s_.pick(chain_cdf_);
      const auto host = pick_host(1);
      if (!host) break;
      const VertexId v = add_atom(e);
      bond(*host, v, chain_order(e));
    }
    return std::move(g_);
  }

 private:
  VertexId add_atom(std::uint32_t e) {
    used_.push_back(0);
    deg_.push_back(0);
    return g_.add_vertex(e);
  }
  bool room(VertexId v, std::uint32_t order) const {
    return deg_[v] < kMaxDegree && used_[v] + order <= valence(g_.vertex_label(v));
  }
  // Falls back to a single bond when the order does not fit.
  bool bond(VertexId a, VertexId b, std::uint32_t order) {
    if (!(room(a, order) && room(b, order))) order = 1;
    if (!(room(a, order) && room(b, order))) return false;
    g_.add_edge(a, b, order - 1);
    used_[a] += order;
    used_[b] += order;
    ++deg_[a], ++deg_[b];
    return true;
  }
  std::optional<VertexId> pick_host(std::uint32_t order) {
    const auto n = static_cast<std::uint32_t>(g_.vertex_count());
    for (int t = 0; t < 64 && n > 0; ++t) {
      const VertexId v = s_.below(n);
      if (room(v, order)) return v;
    }
    for (VertexId v = 0; v < n; ++v)
      if (room(v, order)) return v;
    return std::nullopt;
  }
  std::uint32_t chain_order(std::uint32_t e) {
    if (e == 1) return s_.chance(0.45) ? 2 : 1;  // carbonyl oxygen is common
    const double u = s_.uniform();
    return u < 0.02 ? 3 : u < 0.12 ? 2 : 1;
  }

  bool add_ring(std::uint32_t size) {
    std::vector<VertexId> cycle;
    // Fused onto an existing ring bond, or hung off an atom by a single bond.
    if (!ring_edges_.empty() && s_.chance(0.35)) {
      for (int t = 0; t < 16 && cycle.empty(); ++t) {
        const auto [a, b] = ring_edges_[s_.below(static_cast<std::uint32_t>(ring_edges_.size()))];
        if (room(a, 1) && room(b, 1)) cycle = {a, b};
      }
    }
    const bool fused = !cycle.empty();
    std::optional<VertexId> host;
    if (!fused && g_.vertex_count() > 0) {
      host = pick_host(1);
      if (!host) return false;
    }
    const std::uint32_t fresh = size - static_cast<std::uint32_t>(cycle.size());
    for (std::uint32_t i = 0; i < fresh; ++i) cycle.push_back(add_atom(s_.pick(ring_cdf_)));
    // Kekule-style alternation for most six-rings, an occasional double bond in five-rings.
    const bool aromatic = size == 6 && s_.chance(0.6);
    const std::uint32_t start = fused ? 1 : 0;
    for (std::uint32_t i = start; i < size; ++i) {
      const VertexId a = cycle[i], b = cycle[(i + 1) % size];
      std::uint32_t order = 1;
      if (aromatic && i % 2 == 1) order = 2;
      if (size == 5 && i == 2 && s_.chance(0.4)) order = 2;
      if (bond(a, b, order)) ring_edges_.emplace_back(a, b);
    }
    if (host) bond(*host, cycle[0], 1);
    return true;
  }

  Sampler& s_;
  const std::vector<double>& ring_cdf_;
  const std::vector<double>& chain_cdf_;
  LabeledGraph g_;
  std::vector<std::uint32_t> used_;  // bond orders per atom
  std::vector<std::uint32_t> deg_;
  std::vector<std::pair<VertexId, VertexId>> ring_edges_;
};

}  // namespace

SyntheticDataset generate_synthetic(const SyntheticParams& p) {
  if (p.vertex_labels == 0 || p.vertex_labels > 62)
    throw std::invalid_argument("vertex label count must be in [1, 62]");
  if (p.min_vertices == 0 || p.min_vertices > p.max_vertices)
    throw std::invalid_argument("bad vertex count range");

  SyntheticDataset ds;
  for (std::uint32_t k = 0; k < p.vertex_labels; ++k) ds.labels.vertex.intern(kElements[k]);
  for (const char* e : {"1", "2", "3"}) ds.labels.edge.intern(e);

  Sampler s(p.seed);
  if (p.model == SyntheticModel::kRandomTree) {
    std::vector<double> vw;
    for (std::uint32_t k = 0; k < p.vertex_labels; ++k) vw.push_back(1.0 / ((k + 1.0) * (k + 1.0)));
    const auto vcdf = cumulative(vw);
    for (std::size_t gi = 0; gi < p.graphs; ++gi)
      ds.graphs.push_back(random_tree_graph(s, p, static_cast<GraphId>(gi), vcdf));
    return ds;
  }

  // C O N S Cl P F Br I, then a 1/rank tail over the rest.
  const auto ring_cdf = element_cdf({0.85, 0.03, 0.10, 0.02}, p.vertex_labels, 0.0);
  const auto chain_cdf =
      element_cdf({0.60, 0.17, 0.11, 0.03, 0.03, 0.01, 0.02, 0.01, 0.005}, p.vertex_labels, 0.015);
  MoleculeBuilder mb(s, ring_cdf, chain_cdf);
  for (std::size_t gi = 0; gi < p.graphs; ++gi)
    ds.graphs.push_back(mb.build(static_cast<GraphId>(gi), vertex_count(s, p), p.rings_per_vertex));
  return ds;
}

}  // namespace msq
