// Acceptance checks 1-9. Prints one PASS/FAIL line per criterion; exits
// nonzero if any fails.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include "msq/filters.hpp"
#include "msq/gamma.hpp"
#include "msq/index.hpp"
#include "msq/synthetic.hpp"
#include "oracle.hpp"

using namespace msq;
using Ids = std::vector<GraphId>;
using Clock = std::chrono::steady_clock;

namespace {

struct Checker {
  std::vector<std::string> failures;
  std::ostringstream notes;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 8) failures.push_back(what);
    if (!ok && failures.size() == 8) failures.push_back("...");
  }
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int prec = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string ids_str(const Ids& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

FilterStage stage_of(const SearchTrace& t, GraphId g) {
  for (auto [id, s] : t.pruned)
    if (id == g) return s;
  return FilterStage::kNone;
}

// ---- shared synthetic dataset (criteria 5, 6, 9) ----

struct Synthetic {
  SyntheticDataset ds;
  std::optional<MsqIndex> index;
  double build_seconds = 0;
};

Synthetic& synthetic() {
  static Synthetic s = [] {
    Synthetic out;
    out.ds = generate_synthetic(SyntheticParams{});
    const auto t0 = Clock::now();
    out.index = build_index(out.ds.graphs, out.ds.labels);
    out.build_seconds = seconds_since(t0);
    return out;
  }();
  return s;
}

// ---- criteria ----

void worked_example(Checker& c) {
  const auto f = testing::load_example();
  const std::int64_t expect[] = {3, 4, 3};
  for (std::size_t i = 0; i < 3; ++i) {
    const auto r = ged_exact(f.graphs[i], f.h);
    c.expect(r.status == GedStatus::kExact && r.distance == expect[i],
             "ged(g" + std::to_string(i + 1) + ",h)=" + std::to_string(r.distance));
    c.expect(testing::ged_brute(f.graphs[i], f.h) == expect[i], "brute ged disagrees");
  }
  const auto idx = build_index(f.graphs, f.tables);
  const auto r3 = query(idx, f.h, {3});
  c.expect(r3.answers == Ids{0, 2}, "tau=3 answers " + ids_str(r3.answers));

  SearchTrace t;
  const auto cand = search(idx, prepare_query(idx, f.h), 2, &t);
  c.expect(cand.empty(), "tau=2 candidates " + ids_str(cand));
  c.expect(stage_of(t, 0) == FilterStage::kLabelQGram, "g1 not removed by the label filter");
  c.expect(stage_of(t, 1) == FilterStage::kDegreeQGram, "g2 not removed by the degree q-gram filter");
  c.expect(stage_of(t, 2) == FilterStage::kDegreeSequence, "g3 not removed by the degree sequence");
  c.expect(common_degree_qgrams(f.graphs[1], f.h) == 0, "g2 shares degree q-grams with h");
  const auto bound = degree_qgram_bound(4, 4, 0, common_vertex_labels(f.graphs[1], f.h));
  c.expect(bound > 2, "g2 degree q-gram bound " + std::to_string(bound));
  const auto ds = degree_sequence_bound(degree_sequence(f.graphs[2]),
                                        common_vertex_labels(f.graphs[2], f.h), DegreeProfile(f.h));
  c.expect(ds == 3, "g3 degree-sequence bound " + std::to_string(ds));
  c.notes << "answers(tau=3)=" << ids_str(r3.answers) << ", candidates(tau=2)=" << ids_str(cand);
}

void succinct_structure(Checker& c) {
  const auto f = testing::load_example();
  IndexParams p;
  p.fanout = 2;
  p.block = 4;
  const auto idx = build_index(f.graphs, f.tables, testing::example_vocabulary(f.tables), p);
  if (idx.regions().size() != 1) {
    c.expect(false, "expected one region");
    return;
  }
  const auto& t = idx.regions().begin()->second;
  std::string b;
  for (std::uint64_t i = 0; i < t.bits(Vec::kD).size(); ++i) b += t.bits(Vec::kD)[i] ? '1' : '0';
  c.expect(b == "11111111100101110011000001001111", "B_D=" + b);
  const std::vector<std::uint64_t> psi = {3, 1, 1, 1, 1, 1, 1, 3, 1, 1, 1, 1, 1, 1, 3, 1, 1, 1, 1, 1};
  c.expect(t.psi(Vec::kD).to_vector() == psi, "Psi_D differs");
  const std::uint64_t begin[] = {0, 7, 14, 19, 26, 32};
  for (std::size_t n = 0; n < 5; ++n)
    c.expect(t.slice_begin(Vec::kD, n) == begin[n] && t.slice_end(Vec::kD, n) == begin[n + 1],
             "node " + std::to_string(n) + " boundaries");
  c.expect(t.bits(Vec::kD).rank1(19) == 14, "rank1(B_D,19)");
  c.expect(t.psi(Vec::kD).at(14) == 3, "Psi_D[14]");
  c.expect(t.psi(Vec::kD).block_start(3) == 16 && !t.psi(Vec::kD).block_is_fixed(3), "SB/flag of block 3");
  c.expect(t.graph_id(3) == 1 && t.f_access(3, Vec::kD, 0) == 3, "F_D[0] of g2");
  c.notes << "B_D=" << b << " rank1(B_D,19)=" << t.bits(Vec::kD).rank1(19)
          << " Psi_D[14]=" << t.psi(Vec::kD).at(14);
}

void no_false_negatives(Checker& c) {
  std::mt19937_64 rng(42);
  std::size_t dbs = 0, checks = 0, answers = 0;
  for (; dbs < 100; ++dbs) {
    testing::RandomGraphShape shape;
    shape.max_vertices = 6;
    shape.vertex_labels = 1 + rng() % 4;
    shape.edge_labels = 1 + rng() % 2;
    shape.edge_probability = 0.2 + 0.1 * (rng() % 5);
    const std::size_t n = 20 + rng() % 181;
    auto db = testing::random_database(rng(), n, 4, shape);
    IndexParams p;
    p.fanout = 2 + rng() % 8;
    p.block = 1 + rng() % 20;
    const auto idx = build_index(db.graphs, db.tables, p);
    for (const auto& h : db.queries) {
      std::vector<std::int64_t> d;
      for (const auto& g : db.graphs) d.push_back(testing::ged_brute(g, h));
      for (std::int64_t tau = 0; tau <= 4; ++tau) {
        Ids truth;
        for (std::size_t i = 0; i < d.size(); ++i)
          if (d[i] <= tau) truth.push_back(static_cast<GraphId>(i));
        const auto r = query(idx, h, {tau});
        c.expect(r.unverified.empty(), "verification budget exhausted");
        c.expect(r.answers == truth, "db " + std::to_string(dbs) + " tau " + std::to_string(tau) +
                                         ": got " + ids_str(r.answers) + " want " + ids_str(truth));
        ++checks;
        answers += truth.size();
      }
    }
  }
  c.notes << dbs << " databases, " << checks << " (query, tau) checks, " << answers << " answers";
}

void filter_soundness(Checker& c) {
  std::mt19937_64 rng(7);
  std::size_t pairs = 0, tight = 0;
  for (; pairs < 5000; ++pairs) {
    testing::RandomGraphShape shape{1, 6, 1 + static_cast<std::uint32_t>(rng() % 4),
                                  1 + static_cast<std::uint32_t>(rng() % 3), 0.15 + 0.15 * (rng() % 5)};
    const auto g = testing::random_graph(rng, shape);
    const auto h = testing::random_graph(rng, shape);
    const auto d = testing::ged_brute(g, h);
    const auto nv_g = g.vertex_count(), nv_h = h.vertex_count();
    const auto dn = number_count_bound(nv_g, g.edge_count(), nv_h, h.edge_count());
    const auto dl = dist_label(g, h);
    const auto cvl = common_vertex_labels(g, h);
    const auto dq = degree_qgram_bound(nv_g, nv_h, common_degree_qgrams(g, h), cvl);
    const auto ds = degree_sequence_bound(degree_sequence(g), cvl, DegreeProfile(h));
    const std::string tag = "pair " + std::to_string(pairs) + " ged " + std::to_string(d);
    c.expect(dn <= d, tag + " dist_N " + std::to_string(dn));
    c.expect(dl <= d, tag + " dist_L " + std::to_string(dl));
    c.expect(dq <= d, tag + " degree q-gram " + std::to_string(dq));
    c.expect(ds <= d, tag + " degree sequence " + std::to_string(ds));
    tight += std::max({dn, dl, dq, ds}) == d;
  }
  std::size_t perms = 0;
  for (std::size_t len = 1; len <= 7; ++len) {
    for (int t = 0; t < 30; ++t) {
      std::vector<std::uint32_t> x(len), y(len);
      for (auto& v : x) v = rng() % 6;
      for (auto& v : y) v = rng() % 6;
      std::sort(x.begin(), x.end(), std::greater<>());
      std::sort(y.begin(), y.end(), std::greater<>());
      const auto best = delta(x, y);
      std::vector<std::uint32_t> z(len);
      std::iota(z.begin(), z.end(), 0u);
      do {
        std::vector<std::uint32_t> py(len);
        for (std::size_t i = 0; i < len; ++i) py[i] = y[z[i]];
        c.expect(delta(x, py) >= best, "sorted alignment not minimal at length " + std::to_string(len));
        ++perms;
      } while (std::next_permutation(z.begin(), z.end()));
    }
  }
  c.notes << pairs << " pairs (" << tight << " with a tight bound), " << perms << " permutations";
}

struct CostCheck {
  std::uint64_t sequences = 0, entries = 0, hybrid = 0, fixed = 0, gamma = 0;
};

// Costs recomputed from the decoded values, not taken from the encoder.
void check_sequence(Checker& c, const HybridSequence& h, CostCheck& acc) {
  const auto v = h.to_vector();
  const std::uint32_t b = h.block_size();
  std::uint64_t fixed = 0, gamma = 0;
  for (std::size_t s = 0; s < v.size(); s += b) {
    const std::size_t e = std::min<std::size_t>(v.size(), s + b);
    std::uint64_t mx = 0;
    for (std::size_t i = s; i < e; ++i) {
      mx = std::max(mx, v[i]);
      gamma += gamma_length(v[i]);
    }
    fixed += (e - s) * bit_width_of(mx);
  }
  c.expect(h.s_bits() <= std::min(fixed, gamma), "hybrid larger than a pure coding");
  ++acc.sequences;
  acc.entries += v.size();
  acc.hybrid += h.s_bits();
  acc.fixed += fixed;
  acc.gamma += gamma;
}

void compression(Checker& c) {
  CostCheck small;
  {
    const auto f = testing::load_example();
    for (std::uint32_t b : {1u, 4u, 16u}) {
      IndexParams p;
      p.block = b;
      const auto idx = build_index(f.graphs, f.tables, p);
      for (const auto& [r, t] : idx.regions())
        for (Vec x : {Vec::kD, Vec::kL}) check_sequence(c, t.psi(x), small);
    }
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      auto db = testing::random_database(seed, 200, 0, {});
      IndexParams p;
      p.block = static_cast<std::uint32_t>(seed * 3);
      const auto idx = build_index(db.graphs, db.tables, p);
      for (const auto& [r, t] : idx.regions())
        for (Vec x : {Vec::kD, Vec::kL}) check_sequence(c, t.psi(x), small);
    }
  }
  auto& syn = synthetic();
  CostCheck d, l;
  for (const auto& [r, t] : syn.index->regions()) {
    check_sequence(c, t.psi(Vec::kD), d);
    check_sequence(c, t.psi(Vec::kL), l);
  }
  const double bd = double(d.hybrid) / double(d.entries);
  const double bl = double(l.hybrid) / double(l.entries);
  const double all = double(d.hybrid + l.hybrid) / double(d.entries + l.entries);
  c.expect(bd >= 3 && bd <= 7, "Psi_D averages " + fmt(bd) + " bits per entry");
  c.expect(bl >= 3 && bl <= 7, "Psi_L averages " + fmt(bl) + " bits per entry");
  c.notes << (small.sequences + d.sequences + l.sequences) << " sequences hybrid<=min(fixed,gamma); "
          << "synthetic bits/entry Psi_D " << fmt(bd) << " (fixed " << fmt(double(d.fixed) / d.entries)
          << ", gamma " << fmt(double(d.gamma) / d.entries) << "), Psi_L " << fmt(bl) << " (fixed "
          << fmt(double(l.fixed) / l.entries) << ", gamma " << fmt(double(l.gamma) / l.entries)
          << "), both " << fmt(all);

  // For reference only: the plain random-tree model, which lacks repeated ring environments.
  SyntheticParams tp;
  tp.model = SyntheticModel::kRandomTree;
  const auto tree = generate_synthetic(tp);
  const auto tidx = build_index(tree.graphs, tree.labels);
  CostCheck td, tl;
  for (const auto& [r, t] : tidx.regions()) {
    check_sequence(c, t.psi(Vec::kD), td);
    check_sequence(c, t.psi(Vec::kL), tl);
  }
  c.notes << "; random-tree model (not judged) Psi_D " << fmt(double(td.hybrid) / td.entries) << ", Psi_L "
          << fmt(double(tl.hybrid) / tl.entries);
}

void space_reduction(Checker& c) {
  const auto st = index_stats(*synthetic().index);
  const double ratio = double(st.succinct.total()) / double(st.plain.total());
  c.expect(ratio <= 0.5, "succinct/plain = " + fmt(ratio, 3));
  c.notes << "succinct " << st.succinct.total() << " B vs plain " << st.plain.total() << " B, ratio "
          << fmt(ratio, 3) << " (reduction " << fmt(100 * (1 - ratio), 1) << "%)";
}

void region_reduction(Checker& c) {
  std::mt19937_64 rng(17);
  std::size_t covered = 0;
  for (int probe = 0; probe < 10000; ++probe) {
    const PartitionParams p{static_cast<std::int64_t>(rng() % 6), static_cast<std::int64_t>(rng() % 6),
                            1 + static_cast<std::int64_t>(rng() % 8)};
    const std::int64_t hv = rng() % 40, he = rng() % 50, tau = rng() % 7;
    const auto rect = query_region(hv, he, tau, p);
    for (int k = 0; k < 20; ++k) {
      const std::int64_t gv = std::max<std::int64_t>(0, hv + static_cast<std::int64_t>(rng() % 15) - 7);
      const std::int64_t ge = std::max<std::int64_t>(0, he + static_cast<std::int64_t>(rng() % 15) - 7);
      if (number_count_bound(gv, ge, hv, he) > tau) continue;
      ++covered;
      c.expect(rect.contains(subregion_of(gv, ge, p)), "rectangle misses a graph within tau");
    }
  }
  std::size_t searches = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    SyntheticParams sp;
    sp.graphs = 500;
    sp.mean_vertices = 8 + seed;
    sp.vertex_labels = 6;
    sp.seed = seed;
    const auto ds = generate_synthetic(sp);
    IndexParams ip;
    ip.l = 1 + seed % 5;
    const auto idx = build_index(ds.graphs, ds.labels, ip);
    for (int qi = 0; qi < 10; ++qi) {
      const auto& h = ds.graphs[(qi * 37 + seed) % ds.graphs.size()];
      const auto q = prepare_query(idx, h);
      for (std::int64_t tau = 0; tau <= 5; ++tau) {
        const auto a = search(idx, q, tau);
        c.expect(a == search_all(idx, q, tau), "rectangle search differs from whole scan");
        c.expect(a == testing::cascade_scan(ds.graphs, h, tau), "tree search differs from filter scan");
        ++searches;
      }
    }
  }
  c.notes << "10000 probes (" << covered << " in-range graphs covered), " << searches
          << " rectangle-vs-whole searches identical";
}

void persistence(Checker& c) {
  auto db = testing::random_database(2718, 400, 25, {});
  const auto idx = build_index(db.graphs, db.tables);
  const auto path = std::filesystem::temp_directory_path() / "msq_acceptance.idx";
  save_index(idx, path.string());
  const auto loaded = load_index(path.string());
  std::filesystem::remove(path);
  std::size_t compared = 0;
  for (const auto& h : db.queries)
    for (std::int64_t tau = 0; tau <= 4; ++tau) {
      c.expect(query(idx, h, {tau}).same_sets(query(loaded, h, {tau})), "loaded index answers differ");
      ++compared;
    }
  const auto bytes = serialize_index(idx);
  c.expect(serialize_index(build_index(db.graphs, db.tables)) == bytes, "rebuild not byte-identical");
  c.expect(serialize_index(loaded) == bytes, "re-serialized index differs");
  c.notes << compared << " (query, tau) results identical; " << bytes.size() << "-byte index rebuilt identically";
}

void performance(Checker& c) {
  auto& syn = synthetic();
  const auto& idx = *syn.index;
  c.expect(syn.build_seconds < 30, "build took " + fmt(syn.build_seconds) + " s");
  // Queries: database graphs with a couple of random edits.
  std::mt19937_64 rng(99);
  double worst = 0, total = 0;
  std::size_t cand = 0;
  const int nq = 100;
  for (int i = 0; i < nq; ++i) {
    const auto& src = syn.ds.graphs[rng() % syn.ds.graphs.size()];
    LabeledGraph h(0);
    for (auto l : src.vertex_labels()) h.add_vertex(rng() % 10 == 0 ? static_cast<Symbol>(rng() % 5) : l);
    for (const auto& e : src.edges())
      if (rng() % 15 != 0) h.add_edge(e.u, e.v, e.label);
    const auto t0 = Clock::now();
    const auto q = prepare_query(idx, h);
    const auto r = search(idx, q, 3);
    const double ms = seconds_since(t0) * 1e3;
    worst = std::max(worst, ms);
    total += ms;
    cand += r.size();
  }
  c.expect(worst < 50, "slowest tau=3 filter took " + fmt(worst) + " ms");
  c.notes << syn.ds.graphs.size() << "-graph build " << fmt(syn.build_seconds) << " s; tau=3 filter mean "
          << fmt(total / nq, 3) << " ms, max " << fmt(worst, 3) << " ms, mean candidates "
          << fmt(double(cand) / nq, 1);
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Checker&)>> criteria[] = {
      {"worked example", worked_example},
      {"succinct structure", succinct_structure},
      {"no false negatives", no_false_negatives},
      {"filter soundness", filter_soundness},
      {"compression", compression},
      {"space reduction", space_reduction},
      {"region reduction", region_reduction},
      {"persistence", persistence},
      {"performance", performance},
  };
  int failed = 0, n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    Checker c;
    const auto t0 = Clock::now();
    try {
      fn(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    const bool ok = c.failures.empty();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " " << n << " " << name << " (" << fmt(seconds_since(t0), 1)
              << " s): " << c.notes.str() << "\n";
    for (const auto& f : c.failures) std::cout << "    " << f << "\n";
    std::cout.flush();
  }
  std::cout << (n - failed) << "/" << n << " criteria passed\n";
  return failed ? 1 : 0;
}
