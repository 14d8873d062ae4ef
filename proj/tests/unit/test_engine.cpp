#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "msq/index.hpp"
#include "msq/synthetic.hpp"
#include "oracle.hpp"

using namespace msq;
using Ids = std::vector<GraphId>;

namespace {

MsqIndex example_index(const testing::Example& f, IndexParams p = {}) {
  return build_index(f.graphs, f.tables, p);
}

FilterStage stage_of(const SearchTrace& t, GraphId g) {
  for (auto [id, s] : t.pruned)
    if (id == g) return s;
  return FilterStage::kNone;
}

Ids brute_answers(const std::vector<LabeledGraph>& graphs, const LabeledGraph& h, std::int64_t tau) {
  Ids out;
  for (const auto& g : graphs)
    if (testing::ged_brute(g, h) <= tau) out.push_back(g.id());
  return out;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("worked example at tau = 3") {
  const auto f = testing::load_example();
  const auto idx = example_index(f);
  const auto r = query(idx, f.h, {3});
  CHECK(r.candidates == Ids{0, 2});
  CHECK(r.answers == Ids{0, 2});
  CHECK(r.unverified.empty());

  SearchTrace t;
  search(idx, prepare_query(idx, f.h), 3, &t);
  CHECK(stage_of(t, 1) == FilterStage::kDegreeSequence);
}

TEST_CASE("worked example at tau = 2 prunes every graph at a leaf") {
  const auto f = testing::load_example();
  const auto idx = example_index(f);
  SearchTrace t;
  const auto cand = search(idx, prepare_query(idx, f.h), 2, &t);
  CHECK(cand.empty());
  CHECK(t.internal_pruned == 0);
  CHECK(stage_of(t, 0) == FilterStage::kLabelQGram);
  CHECK(stage_of(t, 1) == FilterStage::kDegreeQGram);
  CHECK(stage_of(t, 2) == FilterStage::kDegreeSequence);
  CHECK(query(idx, f.h, {2}).answers.empty());
}

TEST_CASE("index statistics of the worked example") {
  const auto f = testing::load_example();
  const auto idx = example_index(f);
  const auto s = index_stats(idx);
  CHECK(s.graphs == 3);
  CHECK(s.vocab_degree == 7);
  CHECK(s.vocab_label == 4);
  CHECK(s.regions == 1);
  CHECK(s.nodes == 4);
  CHECK(s.psi_d_entries == 16);
  CHECK(idx.partition() == PartitionParams{3, 2, 4});
}

TEST_CASE("a database graph finds itself at tau = 0") {
  const auto f = testing::load_example();
  const auto idx = example_index(f);
  for (const auto& g : f.graphs) {
    const auto r = query(idx, g, {0});
    CHECK(r.answers == Ids{g.id()});
  }
}

TEST_CASE("query labels unknown to the index") {
  const auto f = testing::load_example();
  const auto idx = example_index(f);
  std::istringstream in("t # 0\nv 0 Z\nv 1 A\ne 0 1 _\n");
  const auto qs = parse_queries(idx, in);
  REQUIRE(qs.size() == 1);
  const auto q = prepare_query(idx, qs[0]);
  CHECK(q.unmatched > 0);
  // ged(Z-A, C-A-A) = relabel + add vertex + add edge
  const auto r = query(idx, qs[0], {3});
  CHECK(r.answers == Ids{0});
  CHECK(query(idx, qs[0], {2}).answers.empty());
}

TEST_CASE("tree search agrees with the graph-level filters") {
  const testing::RandomGraphShape shape;
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    auto db = testing::random_database(seed, 80, 6, shape);
    IndexParams p;
    p.fanout = 2 + seed % 7;
    p.block = 1 + seed % 17;
    p.l = 1 + seed % 5;
    const auto idx = build_index(db.graphs, db.tables, p);
    for (const auto& h : db.queries) {
      const auto q = prepare_query(idx, h);
      for (std::int64_t tau = 0; tau <= 4; ++tau) {
        const auto oracle = testing::cascade_scan(db.graphs, h, tau);
        CHECK(search_all(idx, q, tau) == oracle);
        CHECK(search(idx, q, tau) == oracle);
        for (const auto& [r, tree] : idx.regions()) {
          const auto plain = idx.plain_tree(r);
          SearchTrace a, b;
          CHECK(search_qtree(idx, tree, q, tau, &a) == search_plain(idx, plain, q, tau, &b));
          CHECK(a.pruned == b.pruned);
          CHECK(a.nodes_visited == b.nodes_visited);
        }
      }
    }
  }
}

TEST_CASE("pruning an internal node never drops a passing graph") {
  const testing::RandomGraphShape shape;
  std::uint64_t internal = 0;
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    auto db = testing::random_database(seed, 120, 6, shape);
    IndexParams p;
    p.fanout = 3;
    p.l = 16;  // few regions, deeper trees
    const auto idx = build_index(db.graphs, db.tables, p);
    for (const auto& h : db.queries) {
      const auto q = prepare_query(idx, h);
      for (std::int64_t tau = 0; tau <= 3; ++tau) {
        const auto oracle = testing::cascade_scan(db.graphs, h, tau);
        const std::set<GraphId> pass(oracle.begin(), oracle.end());
        for (const auto& [r, tree] : idx.regions()) {
          SearchTrace t;
          const auto cand = search_qtree(idx, tree, q, tau, &t);
          internal += t.internal_pruned;
          for (auto [g, why] : t.pruned) CHECK(pass.count(g) == 0);
          CHECK(cand.size() + t.pruned.size() == tree.leaf_count());
        }
      }
    }
  }
  CHECK(internal > 0);
}

TEST_CASE("answers match brute-force distances") {
  testing::RandomGraphShape shape;
  shape.max_vertices = 5;
  for (std::uint64_t seed = 7; seed < 19; ++seed) {
    auto db = testing::random_database(seed, 60, 4, shape);
    const auto idx = build_index(db.graphs, db.tables);
    for (const auto& h : db.queries) {
      for (std::int64_t tau = 0; tau <= 4; ++tau) {
        const auto r = query(idx, h, {tau, 10'000'000, static_cast<unsigned>(seed % 3)});
        CHECK(r.unverified.empty());
        CHECK(r.answers == brute_answers(db.graphs, h, tau));
        CHECK(std::includes(r.candidates.begin(), r.candidates.end(), r.answers.begin(),
                            r.answers.end()));
      }
    }
  }
}

TEST_CASE("regions cover the database exactly once") {
  SyntheticParams sp;
  sp.graphs = 400;
  sp.mean_vertices = 12;
  const auto ds = generate_synthetic(sp);
  const auto idx = build_index(ds.graphs, ds.labels);
  CHECK(idx.regions().size() > 5);
  std::vector<int> seen(ds.graphs.size(), 0);
  for (const auto& [r, tree] : idx.regions()) {
    for (auto g : tree.leaves()) {
      ++seen[g];
      const auto& gr = idx.graph(g);
      CHECK(subregion_of(gr.vertex_count(), gr.edge_count(), idx.partition()) == r);
    }
  }
  CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
}

TEST_CASE("candidate counts grow with tau") {
  SyntheticParams sp;
  sp.graphs = 2000;
  sp.seed = 5;
  const auto ds = generate_synthetic(sp);
  const auto idx = build_index(ds.graphs, ds.labels);
  for (int qi = 0; qi < 20; ++qi) {
    const auto q = prepare_query(idx, ds.graphs[qi * 97]);
    Ids prev;
    for (std::int64_t tau = 1; tau <= 5; ++tau) {
      const auto c = search(idx, q, tau);
      CHECK(std::includes(c.begin(), c.end(), prev.begin(), prev.end()));
      prev = c;
    }
  }
}

TEST_CASE("single-graph index") {
  const auto f = testing::load_example();
  auto g3 = f.graphs[2];
  g3.set_id(0);
  const auto idx = build_index({g3}, f.tables);
  REQUIRE(idx.regions().size() == 1);
  const auto& t = idx.regions().begin()->second;
  CHECK(t.node_count() == 1);
  const auto enc = encode_four_tuple(idx.graph(0), idx.vocab().degree, idx.vocab().label);
  CHECK(t.tuple(0) == enc.tuple);
  // B_X spans exactly the trimmed vectors; Psi_X holds their nonzeros
  CHECK(t.bits(Vec::kD).size() == enc.tuple.degree.size());
  CHECK(t.psi(Vec::kD).size() ==
        static_cast<std::uint64_t>(std::count_if(enc.tuple.degree.begin(), enc.tuple.degree.end(),
                                                 [](auto v) { return v != 0; })));
  CHECK(t.bits(Vec::kL).size() == enc.tuple.label.size());
  CHECK(query(idx, g3, {0}).answers == Ids{0});
}

TEST_CASE("serialization round trip") {
  auto db = testing::random_database(77, 150, 8, {});
  const auto idx = build_index(db.graphs, db.tables);
  const auto bytes = serialize_index(idx);
  const auto back = deserialize_index(bytes);
  CHECK(back == idx);
  CHECK(serialize_index(back) == bytes);
  CHECK(serialize_index(build_index(db.graphs, db.tables)) == bytes);
  for (const auto& h : db.queries)
    for (std::int64_t tau = 0; tau <= 4; ++tau)
      CHECK(query(back, h, {tau}).same_sets(query(idx, h, {tau})));

  const auto path = std::filesystem::temp_directory_path() / "msq_engine_roundtrip.idx";
  save_index(idx, path.string());
  CHECK(load_index(path.string()) == idx);
  std::filesystem::remove(path);
  CHECK_THROWS(load_index(path.string()));
}

TEST_CASE("corrupt index files are rejected") {
  const auto f = testing::load_example();
  const auto bytes = serialize_index(example_index(f));

  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_WITH_AS(deserialize_index(bad), doctest::Contains("magic"), FormatError);

  bad = bytes;
  bad[4] = 9;
  CHECK_THROWS_WITH_AS(deserialize_index(bad), doctest::Contains("version"), FormatError);

  for (std::size_t pos = 6; pos < bytes.size(); pos += 7) {
    bad = bytes;
    bad[pos] ^= 0x20;
    CHECK_THROWS_AS(deserialize_index(bad), FormatError);
  }
  for (std::size_t n = 0; n < bytes.size(); n += 5) {
    const std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + n);
    CHECK_THROWS_AS(deserialize_index(cut), FormatError);
  }
  bad = bytes;
  bad.push_back(0);
  CHECK_THROWS_AS(deserialize_index(bad), FormatError);
}

TEST_CASE("invalid build input") {
  CHECK_THROWS_AS(build_index({}, LabelTables{}), std::invalid_argument);
  const auto f = testing::load_example();
  IndexParams p;
  p.fanout = 1;
  CHECK_THROWS_AS(build_index(f.graphs, f.tables, p), std::invalid_argument);
  auto shuffled = f.graphs;
  std::swap(shuffled[0], shuffled[1]);
  CHECK_THROWS_AS(build_index(shuffled, f.tables), std::invalid_argument);
}

}
