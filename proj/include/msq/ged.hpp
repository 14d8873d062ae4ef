#pragma once

#include <cstdint>
#include <limits>

#include "msq/graph.hpp"

namespace msq {

struct GedOptions {
  std::uint64_t budget = 10'000'000;  // node expansions
  std::int64_t cutoff = std::numeric_limits<std::int64_t>::max();
};

enum class GedStatus : std::uint8_t {
  kExact,        // distance holds ged(g, h), which is <= cutoff
  kAboveCutoff,  // ged(g, h) > cutoff
  kExceeded,     // expansion budget ran out before a decision
};

struct GedResult {
  GedStatus status = GedStatus::kExact;
  std::int64_t distance = 0;
  std::uint64_t expansions = 0;
};

/*
 * Exact graph edit distance under unit costs, by best-first search over
 * partial mappings of h's vertices (taken in descending degree order) onto
 * g's vertices or deletion. The heuristic is the label-count bound on the
 * unmapped remainder of both graphs. Branches whose cost plus heuristic
 * exceeds the cutoff are dropped.
 */
GedResult ged_exact(const LabeledGraph& g, const LabeledGraph& h, const GedOptions& opts = {});

// The heuristic value at the empty mapping (for admissibility checks).
std::int64_t ged_root_heuristic(const LabeledGraph& g, const LabeledGraph& h);

}  // namespace msq
