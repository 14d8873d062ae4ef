#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "msq/graph.hpp"
#include "msq/qgram.hpp"

namespace msq {

// Every filter is expressed as a lower bound on ged(g, h); a pair passes
// at threshold tau iff bound <= tau.
struct FilterVerdict {
  bool passed = true;
  std::int64_t bound = 0;
};

enum class FilterStage : std::uint8_t {
  kNone = 0,
  kNumberCount,
  kLabelQGram,
  kDegreeQGram,
  kDegreeSequence,
};

const char* to_string(FilterStage s);

struct CascadeVerdict {
  bool passed = true;
  FilterStage pruned_by = FilterStage::kNone;
  std::int64_t bound = 0;  // the largest bound computed before stopping
};

// ||V_g|-|V_h|| + ||E_g|-|E_h||
std::int64_t number_count_bound(std::uint64_t nv_g, std::uint64_t ne_g, std::uint64_t nv_h,
                                std::uint64_t ne_h);

// max{|V_g|,|V_h|} + max{|E_g|,|E_h|} - |L(g) n L(h)|. Equals dist_L.
std::int64_t label_qgram_bound(std::uint64_t nv_g, std::uint64_t ne_g, std::uint64_t nv_h,
                               std::uint64_t ne_h, std::uint64_t common_labels);

// Smallest tau for which |D(g) n D(h)| >= 2max{|V_g|,|V_h|} - |S_Vg n S_Vh| - 2tau holds.
std::int64_t degree_qgram_bound(std::uint64_t nv_g, std::uint64_t nv_h,
                                std::uint64_t common_degree, std::uint64_t common_vertex_labels);

// Degree-vector distance. Throws std::invalid_argument on length mismatch.
std::int64_t delta(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y);

enum class DeletionCostForm : std::uint8_t {
  kEdgeCount,      // |E_h| - sum(sigma_h1)/2, the number of deleted edges
  kDegreeSum,      // |E_h| - sum(sigma_h1); looser, never above kEdgeCount
};

/*
 * Degree information about the query graph h needed by the degree-sequence
 * bound: its degree sequence, and for each k in [1, max_exact_deletions]
 * the distinct outcomes (deleted edge count, residual degree sequence) of
 * removing k vertices from h. Residual sequences come from the induced
 * subgraph.
 */
class DegreeProfile {
 public:
  static constexpr std::uint32_t kMaxExactDeletions = 3;

  explicit DegreeProfile(const LabeledGraph& h,
                         std::uint32_t max_exact_deletions = kMaxExactDeletions);

  struct Deletion {
    std::uint32_t removed_edges = 0;
    std::vector<std::uint32_t> residual;  // sorted non-increasing
  };

  std::uint32_t vertex_count() const { return n_vertices_; }
  std::uint32_t edge_count() const { return n_edges_; }
  const std::vector<std::uint32_t>& sequence() const { return sequence_; }
  std::uint32_t max_exact_deletions() const { return max_exact_; }
  // Empty when k is 0 or beyond the exact enumeration limit.
  const std::vector<Deletion>& deletions(std::uint32_t k) const;

 private:
  std::uint32_t n_vertices_ = 0;
  std::uint32_t n_edges_ = 0;
  std::uint32_t max_exact_ = 0;
  std::vector<std::uint32_t> sequence_;
  std::vector<std::vector<Deletion>> by_k_;  // index k-1
};

// max{|V_g|,|V_h|} - |S_Vg n S_Vh| + lambda_e.
std::int64_t degree_sequence_bound(std::span<const std::uint32_t> sigma_g,
                                   std::uint64_t common_vertex_labels, const DegreeProfile& h,
                                   DeletionCostForm form = DeletionCostForm::kEdgeCount);

// Graph-level multiset intersections, independent of any vocabulary.
std::uint64_t common_degree_qgrams(const LabeledGraph& g, const LabeledGraph& h);
std::uint64_t common_label_qgrams(const LabeledGraph& g, const LabeledGraph& h);
std::uint64_t common_vertex_labels(const LabeledGraph& g, const LabeledGraph& h);
std::uint64_t common_edge_labels(const LabeledGraph& g, const LabeledGraph& h);

std::int64_t dist_number(const FourTuple& g, const FourTuple& h);
std::int64_t dist_label(const LabeledGraph& g, const LabeledGraph& h);

FilterVerdict degree_qgram_filter(const FourTuple& g, const FourTuple& h,
                                  std::uint64_t common_vertex_labels, std::int64_t tau);
FilterVerdict label_qgram_filter(const FourTuple& g, const FourTuple& h, std::int64_t tau);

FilterVerdict degree_qgram_filter(const LabeledGraph& g, const LabeledGraph& h, std::int64_t tau);
FilterVerdict label_qgram_filter(const LabeledGraph& g, const LabeledGraph& h, std::int64_t tau);
FilterVerdict degree_sequence_filter(const LabeledGraph& g, const LabeledGraph& h,
                                     std::int64_t tau,
                                     DeletionCostForm form = DeletionCostForm::kEdgeCount);

// Order: number count, label q-gram, degree q-gram, degree sequence.
CascadeVerdict filter_cascade(const LabeledGraph& g, const LabeledGraph& h, std::int64_t tau);
CascadeVerdict filter_cascade(const LabeledGraph& g, const LabeledGraph& h,
                              const DegreeProfile& h_profile, std::int64_t tau);

}  // namespace msq
