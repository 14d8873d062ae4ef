#include "msq/filters.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

namespace msq {

const char* to_string(FilterStage s) {
  switch (s) {
    case FilterStage::kNone: return "none";
    case FilterStage::kNumberCount: return "number-count";
    case FilterStage::kLabelQGram: return "label-qgram";
    case FilterStage::kDegreeQGram: return "degree-qgram";
    case FilterStage::kDegreeSequence: return "degree-sequence";
  }
  return "?";
}

namespace {

std::int64_t absdiff(std::uint64_t a, std::uint64_t b) {
  return a > b ? static_cast<std::int64_t>(a - b) : static_cast<std::int64_t>(b - a);
}

std::int64_t ceil_half(std::int64_t x) { return x <= 0 ? 0 : (x + 1) / 2; }

template <class T>
std::uint64_t multiset_intersection(std::vector<T> a, std::vector<T> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::uint64_t n = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++n, ++i, ++j;
    }
  }
  return n;
}

}  // namespace

std::int64_t number_count_bound(std::uint64_t nv_g, std::uint64_t ne_g, std::uint64_t nv_h,
                                std::uint64_t ne_h) {
  return absdiff(nv_g, nv_h) + absdiff(ne_g, ne_h);
}

std::int64_t label_qgram_bound(std::uint64_t nv_g, std::uint64_t ne_g, std::uint64_t nv_h,
                               std::uint64_t ne_h, std::uint64_t common_labels) {
  return static_cast<std::int64_t>(std::max(nv_g, nv_h) + std::max(ne_g, ne_h)) -
         static_cast<std::int64_t>(common_labels);
}

std::int64_t degree_qgram_bound(std::uint64_t nv_g, std::uint64_t nv_h,
                                std::uint64_t common_degree, std::uint64_t common_vertex_labels) {
  const auto need = 2 * static_cast<std::int64_t>(std::max(nv_g, nv_h)) -
                    static_cast<std::int64_t>(common_vertex_labels) -
                    static_cast<std::int64_t>(common_degree);
  return ceil_half(need);
}

std::int64_t delta(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) {
  if (x.size() != y.size()) throw std::invalid_argument("delta: length mismatch");
  std::int64_t up = 0;
  std::int64_t down = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] <= x[i]) {
      up += x[i] - y[i];
    } else {
      down += y[i] - x[i];
    }
  }
  return ceil_half(up) + ceil_half(down);
}

DegreeProfile::DegreeProfile(const LabeledGraph& h, std::uint32_t max_exact_deletions)
    : n_vertices_(static_cast<std::uint32_t>(h.vertex_count())),
      n_edges_(static_cast<std::uint32_t>(h.edge_count())),
      max_exact_(max_exact_deletions),
      sequence_(degree_sequence(h)) {
  const std::uint32_t n = n_vertices_;
  const auto deg = h.degrees();
  std::vector<std::vector<VertexId>> nbr(n);
  for (const auto& e : h.edges()) {
    nbr[e.u].push_back(e.v);
    nbr[e.v].push_back(e.u);
  }

  const std::uint32_t kmax = std::min(max_exact_, n);
  by_k_.resize(max_exact_);
  // Outcomes are tracked as degree histograms: deleting k vertices only
  // touches their own entries and those of their neighbours.
  const std::uint32_t max_deg = sequence_.empty() ? 0 : sequence_.front();
  std::vector<std::uint32_t> base(max_deg + 1, 0);
  for (auto d : deg) ++base[d];
  std::vector<VertexId> pick;
  std::vector<std::uint8_t> gone(n, 0);
  std::vector<std::uint32_t> hist;
  std::vector<std::pair<VertexId, std::uint32_t>> hit;  // neighbour, lost edges

  for (std::uint32_t k = 1; k <= kmax; ++k) {
    std::set<std::pair<std::uint32_t, std::vector<std::uint32_t>>> seen;
    // Enumerate k-subsets in lexicographic order.
    pick.resize(k);
    for (std::uint32_t i = 0; i < k; ++i) pick[i] = i;
    while (true) {
      for (VertexId v : pick) gone[v] = 1;
      hist = base;
      hit.clear();
      std::uint32_t inner = 0;  // edges with both endpoints deleted, counted twice
      std::uint32_t touched = 0;
      for (VertexId v : pick) {
        touched += deg[v];
        --hist[deg[v]];
        for (VertexId w : nbr[v]) {
          if (gone[w]) {
            ++inner;
            continue;
          }
          auto it = std::find_if(hit.begin(), hit.end(), [w](const auto& x) { return x.first == w; });
          if (it == hit.end()) hit.emplace_back(w, 1);
          else ++it->second;
        }
      }
      for (auto [w, lost] : hit) {
        --hist[deg[w]];
        ++hist[deg[w] - lost];
      }
      seen.emplace(touched - inner / 2, hist);
      for (VertexId v : pick) gone[v] = 0;

      // next combination
      std::int64_t i = static_cast<std::int64_t>(k) - 1;
      while (i >= 0 && pick[i] == n - k + i) --i;
      if (i < 0) break;
      ++pick[i];
      for (std::uint32_t j = static_cast<std::uint32_t>(i) + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
    auto& out = by_k_[k - 1];
    for (const auto& [removed, h] : seen) {
      Deletion d{removed, {}};
      d.residual.reserve(n - k);
      for (std::uint32_t x = max_deg + 1; x-- > 0;) d.residual.insert(d.residual.end(), h[x], x);
      out.push_back(std::move(d));
    }
  }
}

const std::vector<DegreeProfile::Deletion>& DegreeProfile::deletions(std::uint32_t k) const {
  static const std::vector<Deletion> kEmpty;
  if (k == 0 || k > by_k_.size()) return kEmpty;
  return by_k_[k - 1];
}

std::int64_t degree_sequence_bound(std::span<const std::uint32_t> sigma_g,
                                   std::uint64_t common_vertex_labels, const DegreeProfile& h,
                                   DeletionCostForm form) {
  const std::size_t ng = sigma_g.size();
  const std::size_t nh = h.vertex_count();
  std::int64_t lambda = 0;
  if (nh <= ng) {
    std::vector<std::uint32_t> padded(h.sequence());
    padded.resize(ng, 0);
    lambda = delta(sigma_g, padded);
  } else {
    const auto k = static_cast<std::uint32_t>(nh - ng);
    const auto& options = h.deletions(k);
    if (!options.empty()) {
      lambda = std::numeric_limits<std::int64_t>::max();
      for (const auto& d : options) {
        std::int64_t cost = d.removed_edges;
        if (form == DeletionCostForm::kDegreeSum) {
          std::int64_t kept = 0;
          for (auto x : d.residual) kept += x;
          cost = static_cast<std::int64_t>(h.edge_count()) - kept;
        }
        lambda = std::min(lambda, cost + delta(sigma_g, d.residual));
      }
    }
  }
  return static_cast<std::int64_t>(std::max(ng, nh)) -
         static_cast<std::int64_t>(common_vertex_labels) + lambda;
}

std::uint64_t common_degree_qgrams(const LabeledGraph& g, const LabeledGraph& h) {
  return multiset_intersection(degree_qgrams(g), degree_qgrams(h));
}

std::uint64_t common_label_qgrams(const LabeledGraph& g, const LabeledGraph& h) {
  return multiset_intersection(label_qgrams(g), label_qgrams(h));
}

std::uint64_t common_vertex_labels(const LabeledGraph& g, const LabeledGraph& h) {
  return multiset_intersection(g.vertex_labels(), h.vertex_labels());
}

std::uint64_t common_edge_labels(const LabeledGraph& g, const LabeledGraph& h) {
  std::vector<Symbol> a;
  std::vector<Symbol> b;
  for (const auto& e : g.edges()) a.push_back(e.label);
  for (const auto& e : h.edges()) b.push_back(e.label);
  return multiset_intersection(std::move(a), std::move(b));
}

std::int64_t dist_number(const FourTuple& g, const FourTuple& h) {
  return number_count_bound(g.n_vertices, g.n_edges, h.n_vertices, h.n_edges);
}

std::int64_t dist_label(const LabeledGraph& g, const LabeledGraph& h) {
  return static_cast<std::int64_t>(std::max(g.vertex_count(), h.vertex_count())) -
         static_cast<std::int64_t>(common_vertex_labels(g, h)) +
         static_cast<std::int64_t>(std::max(g.edge_count(), h.edge_count())) -
         static_cast<std::int64_t>(common_edge_labels(g, h));
}

FilterVerdict degree_qgram_filter(const FourTuple& g, const FourTuple& h,
                                  std::uint64_t common_vertex_labels, std::int64_t tau) {
  const auto bound = degree_qgram_bound(g.n_vertices, h.n_vertices,
                                        common_count(g.degree, h.degree), common_vertex_labels);
  return {bound <= tau, bound};
}

FilterVerdict label_qgram_filter(const FourTuple& g, const FourTuple& h, std::int64_t tau) {
  const auto bound = label_qgram_bound(g.n_vertices, g.n_edges, h.n_vertices, h.n_edges,
                                       common_count(g.label, h.label));
  return {bound <= tau, bound};
}

FilterVerdict degree_qgram_filter(const LabeledGraph& g, const LabeledGraph& h, std::int64_t tau) {
  const auto bound = degree_qgram_bound(g.vertex_count(), h.vertex_count(),
                                        common_degree_qgrams(g, h), common_vertex_labels(g, h));
  return {bound <= tau, bound};
}

FilterVerdict label_qgram_filter(const LabeledGraph& g, const LabeledGraph& h, std::int64_t tau) {
  const auto bound = label_qgram_bound(g.vertex_count(), g.edge_count(), h.vertex_count(),
                                       h.edge_count(), common_label_qgrams(g, h));
  return {bound <= tau, bound};
}

FilterVerdict degree_sequence_filter(const LabeledGraph& g, const LabeledGraph& h,
                                     std::int64_t tau, DeletionCostForm form) {
  const DegreeProfile profile(h);
  const auto sigma = degree_sequence(g);
  const auto bound = degree_sequence_bound(sigma, common_vertex_labels(g, h), profile, form);
  return {bound <= tau, bound};
}

CascadeVerdict filter_cascade(const LabeledGraph& g, const LabeledGraph& h, std::int64_t tau) {
  return filter_cascade(g, h, DegreeProfile(h), tau);
}

CascadeVerdict filter_cascade(const LabeledGraph& g, const LabeledGraph& h,
                              const DegreeProfile& h_profile, std::int64_t tau) {
  CascadeVerdict v;
  auto stage = [&](FilterStage s, std::int64_t bound) {
    v.bound = std::max(v.bound, bound);
    if (bound > tau) {
      v.passed = false;
      v.pruned_by = s;
    }
    return v.passed;
  };
  if (!stage(FilterStage::kNumberCount,
             number_count_bound(g.vertex_count(), g.edge_count(), h.vertex_count(),
                                h.edge_count())))
    return v;
  const auto cv = common_vertex_labels(g, h);
  if (!stage(FilterStage::kLabelQGram,
             label_qgram_bound(g.vertex_count(), g.edge_count(), h.vertex_count(),
                               h.edge_count(), common_label_qgrams(g, h))))
    return v;
  if (!stage(FilterStage::kDegreeQGram,
             degree_qgram_bound(g.vertex_count(), h.vertex_count(), common_degree_qgrams(g, h),
                                cv)))
    return v;
  const auto sigma = degree_sequence(g);
  stage(FilterStage::kDegreeSequence, degree_sequence_bound(sigma, cv, h_profile));
  return v;
}

}  // namespace msq
