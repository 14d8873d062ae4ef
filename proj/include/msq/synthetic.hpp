#pragma once

#include <cstdint>
#include <vector>

#include "msq/graph.hpp"

namespace msq {

enum class SyntheticModel : std::uint8_t {
  // Heavy-atom skeletons: fused or linked 5/6-rings (often with alternating
  // single/double bonds) plus substituent chains, valence-limited, carbon
  // dominated with O/N and a long tail of rare elements.
  kMolecule,
  // Random spanning tree with degree <= 4, a few ring-closing edges,
  // Zipf(2) element labels and bond labels weighted 80/15/5.
  kRandomTree,
};

/*
 * Generator for sparse, molecule-like graphs. Vertex counts are
 * Gamma(4)-distributed around the mean and clamped; edge labels are bond
 * orders "1", "2", "3". Output depends only on the parameters (own sampling
 * on top of mt19937_64).
 */
struct SyntheticParams {
  std::size_t graphs = 10000;
  double mean_vertices = 25.0;
  std::uint32_t min_vertices = 2;
  std::uint32_t max_vertices = 120;
  std::uint32_t vertex_labels = 62;  // element alphabet size, at most 62
  SyntheticModel model = SyntheticModel::kMolecule;
  double rings_per_vertex = 0.11;    // cycle rank / |V| (about 0.11 for drug-like compounds)
  std::uint64_t seed = 1;
};

struct SyntheticDataset {
  LabelTables labels;
  std::vector<LabeledGraph> graphs;
};

SyntheticDataset generate_synthetic(const SyntheticParams& params);

}  // namespace msq
