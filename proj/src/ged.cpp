#include "msq/ged.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <unordered_map>
#include <vector>

namespace msq {
namespace {

// Hard cap on stored search nodes, independent of the expansion budget.
constexpr std::size_t kMaxStoredNodes = std::size_t{1} << 24;

struct LocalGraph {
  std::size_t n = 0;
  std::vector<std::uint32_t> vlabel;
  std::vector<std::uint16_t> adj;  // n*n; 0 = no edge, else local label + 1
  struct E {
    std::uint32_t a, b, label;
  };
  std::vector<E> edges;

  std::uint16_t at(std::size_t a, std::size_t b) const { return adj[a * n + b]; }
};

struct Problem {
  LocalGraph h;  // reindexed in expansion order
  LocalGraph g;
  std::size_t n_vlabels = 0;
  std::size_t n_elabels = 0;
  // hv_rem[d * n_vlabels + l]: label-l vertices among h positions [d, nh)
  std::vector<std::uint32_t> hv_rem;
  // he_rem[d * n_elabels + l]: label-l h edges not inside positions [0, d)
  std::vector<std::uint32_t> he_rem;
  std::vector<std::uint32_t> he_rem_total;
  std::vector<std::uint32_t> gv_total;
};

Problem make_problem(const LabeledGraph& g, const LabeledGraph& h) {
  Problem p;
  std::unordered_map<Symbol, std::uint32_t> vmap;
  std::unordered_map<Symbol, std::uint32_t> emap;
  auto vl = [&](Symbol s) { return vmap.emplace(s, vmap.size()).first->second; };
  auto el = [&](Symbol s) { return emap.emplace(s, emap.size()).first->second; };

  const auto hdeg = h.degrees();
  std::vector<VertexId> order(h.vertex_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](VertexId a, VertexId b) { return hdeg[a] > hdeg[b]; });
  std::vector<std::uint32_t> pos(h.vertex_count());
  for (std::uint32_t k = 0; k < order.size(); ++k) pos[order[k]] = k;

  auto fill = [&](LocalGraph& lg, const LabeledGraph& src, const std::vector<std::uint32_t>* perm) {
    lg.n = src.vertex_count();
    lg.vlabel.assign(lg.n, 0);
    lg.adj.assign(lg.n * lg.n, 0);
    for (VertexId v = 0; v < lg.n; ++v) lg.vlabel[perm ? (*perm)[v] : v] = vl(src.vertex_label(v));
    for (const auto& e : src.edges()) {
      const std::uint32_t a = perm ? (*perm)[e.u] : e.u;
      const std::uint32_t b = perm ? (*perm)[e.v] : e.v;
      const std::uint32_t lab = el(e.label);
      lg.adj[a * lg.n + b] = lg.adj[b * lg.n + a] = static_cast<std::uint16_t>(lab + 1);
      lg.edges.push_back({a, b, lab});
    }
  };
  fill(p.h, h, &pos);
  fill(p.g, g, nullptr);
  p.n_vlabels = vmap.size();
  p.n_elabels = emap.size();

  const std::size_t nh = p.h.n;
  p.hv_rem.assign((nh + 1) * p.n_vlabels, 0);
  for (std::size_t d = nh; d-- > 0;) {
    std::copy_n(p.hv_rem.begin() + (d + 1) * p.n_vlabels, p.n_vlabels,
                p.hv_rem.begin() + d * p.n_vlabels);
    ++p.hv_rem[d * p.n_vlabels + p.h.vlabel[d]];
  }
  p.he_rem.assign((nh + 1) * p.n_elabels, 0);
  p.he_rem_total.assign(nh + 1, 0);
  for (const auto& e : p.h.edges) {
    const std::size_t last = std::max(e.a, e.b);  // edge leaves the remainder at depth last+1
    for (std::size_t d = 0; d <= last; ++d) {
      ++p.he_rem[d * p.n_elabels + e.label];
      ++p.he_rem_total[d];
    }
  }
  p.gv_total.assign(p.n_vlabels, 0);
  for (auto l : p.g.vlabel) ++p.gv_total[l];
  return p;
}

std::int64_t label_gap(const std::uint32_t* a, const std::uint32_t* b, std::size_t n,
                       std::uint64_t total_a, std::uint64_t total_b) {
  std::uint64_t common = 0;
  for (std::size_t i = 0; i < n; ++i) common += std::min(a[i], b[i]);
  return static_cast<std::int64_t>(std::max(total_a, total_b) - common);
}

struct Node {
  std::uint32_t parent;
  std::int32_t target;  // g vertex, or -1 for deletion
  std::uint32_t depth;
  std::int64_t cost;
};

struct Entry {
  std::int64_t f;
  std::uint32_t depth;
  std::uint32_t index;
  bool operator<(const Entry& o) const {  // max-heap order: "less" means lower priority
    if (f != o.f) return f > o.f;
    if (depth != o.depth) return depth < o.depth;
    return index > o.index;
  }
};

}  // namespace

std::int64_t ged_root_heuristic(const LabeledGraph& g, const LabeledGraph& h) {
  const Problem p = make_problem(g, h);
  std::vector<std::uint32_t> ge(p.n_elabels, 0);
  for (const auto& e : p.g.edges) ++ge[e.label];
  return label_gap(p.hv_rem.data(), p.gv_total.data(), p.n_vlabels, p.h.n, p.g.n) +
         label_gap(p.he_rem.data(), ge.data(), p.n_elabels, p.he_rem_total[0], p.g.edges.size());
}

GedResult ged_exact(const LabeledGraph& g, const LabeledGraph& h, const GedOptions& opts) {
  const Problem p = make_problem(g, h);
  const std::size_t nh = p.h.n;
  const std::size_t ng = p.g.n;
  const std::size_t LV = p.n_vlabels;
  const std::size_t LE = p.n_elabels;

  GedResult res;
  if (nh == 0) {
    const auto d = static_cast<std::int64_t>(ng + p.g.edges.size());
    res.distance = d;
    res.status = d <= opts.cutoff ? GedStatus::kExact : GedStatus::kAboveCutoff;
    return res;
  }

  std::vector<Node> nodes;
  std::priority_queue<Entry> open;
  nodes.push_back({0, -1, 0, 0});
  open.push({ged_root_heuristic(g, h), 0, 0});
  if (open.top().f > opts.cutoff) {
    res.status = GedStatus::kAboveCutoff;
    return res;
  }

  std::vector<std::int32_t> map(nh, -1);
  std::vector<std::uint8_t> used(ng, 0);
  std::vector<std::uint32_t> gv_unused(LV);
  std::vector<std::uint32_t> ge_rem(LE);

  while (!open.empty()) {
    const Entry top = open.top();
    open.pop();
    const Node cur = nodes[top.index];
    if (cur.depth == nh) {
      res.status = GedStatus::kExact;
      res.distance = cur.cost;
      return res;
    }
    if (++res.expansions > opts.budget || nodes.size() > kMaxStoredNodes) {
      res.status = GedStatus::kExceeded;
      return res;
    }

    // Rebuild the partial mapping of this node.
    std::fill(used.begin(), used.end(), 0);
    for (std::uint32_t i = top.index; nodes[i].depth > 0; i = nodes[i].parent) {
      map[nodes[i].depth - 1] = nodes[i].target;
      if (nodes[i].target >= 0) used[nodes[i].target] = 1;
    }
    const std::size_t d = cur.depth;
    std::size_t unused_count = 0;
    std::copy(p.gv_total.begin(), p.gv_total.end(), gv_unused.begin());
    for (std::size_t v = 0; v < ng; ++v) {
      if (used[v]) {
        --gv_unused[p.g.vlabel[v]];
      } else {
        ++unused_count;
      }
    }
    std::fill(ge_rem.begin(), ge_rem.end(), 0);
    std::size_t ge_rem_total = 0;
    for (const auto& e : p.g.edges) {
      if (!used[e.a] || !used[e.b]) {
        ++ge_rem[e.label];
        ++ge_rem_total;
      }
    }

    const std::uint32_t hl = p.h.vlabel[d];
    const bool last = d + 1 == nh;
    for (std::int32_t t = -1; t < static_cast<std::int32_t>(ng); ++t) {
      if (t >= 0 && used[t]) continue;
      std::int64_t c = cur.cost + (t < 0 ? 1 : (p.g.vlabel[t] != hl));
      for (std::size_t k = 0; k < d; ++k) {
        const std::uint16_t eh = p.h.at(d, k);
        const std::uint16_t eg = (t >= 0 && map[k] >= 0) ? p.g.at(t, map[k]) : 0;
        if (eh && eg) {
          c += eh != eg;
        } else if (eh || eg) {
          c += 1;
        }
      }
      // g edges from t to already-used vertices leave the remainder.
      std::size_t moved = 0;
      if (t >= 0) {
        for (std::size_t x = 0; x < ng; ++x) {
          if (!used[x]) continue;
          if (const auto eg = p.g.at(t, x)) {
            --ge_rem[eg - 1];
            ++moved;
          }
        }
      }
      const std::size_t g_unused_after = unused_count - (t >= 0);
      std::int64_t f = c;
      if (last) {
        // Insert every unused g vertex and every g edge still unaccounted for.
        c += static_cast<std::int64_t>(g_unused_after + ge_rem_total - moved);
        f = c;
      } else {
        if (t >= 0) --gv_unused[p.g.vlabel[t]];
        f += label_gap(p.hv_rem.data() + (d + 1) * LV, gv_unused.data(), LV, nh - d - 1,
                       g_unused_after);
        f += label_gap(p.he_rem.data() + (d + 1) * LE, ge_rem.data(), LE,
                       p.he_rem_total[d + 1], ge_rem_total - moved);
        if (t >= 0) ++gv_unused[p.g.vlabel[t]];
      }
      if (t >= 0) {
        for (std::size_t x = 0; x < ng; ++x)
          if (used[x])
            if (const auto eg = p.g.at(t, x)) ++ge_rem[eg - 1];
      }
      if (f > opts.cutoff) continue;
      const auto idx = static_cast<std::uint32_t>(nodes.size());
      nodes.push_back({top.index, t, static_cast<std::uint32_t>(d + 1), c});
      open.push({f, static_cast<std::uint32_t>(d + 1), idx});
    }
  }
  res.status = GedStatus::kAboveCutoff;
  return res;
}

}  // namespace msq
