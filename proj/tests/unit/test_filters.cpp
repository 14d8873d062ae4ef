#include <doctest.h>

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>
#include <set>

#include "msq/filters.hpp"
#include "oracle.hpp"

using namespace msq;
using V = std::vector<std::uint32_t>;

TEST_SUITE("filters") {

TEST_CASE("worked filter outcomes at tau = 2") {
  auto f = testing::load_example();
  const auto& h = f.h;
  const auto& g1 = f.graphs[0];
  const auto& g2 = f.graphs[1];
  const auto& g3 = f.graphs[2];

  // g1 fails the label filter: 4 + 4 - 5 common labels.
  CHECK(common_label_qgrams(g1, h) == 5);
  CHECK(label_qgram_filter(g1, h, 2).bound == 3);
  CHECK_FALSE(label_qgram_filter(g1, h, 2).passed);

  // g2 shares no degree q-gram with h; needs 2*4 - 3 - 2*2 = 1.
  CHECK(common_degree_qgrams(g2, h) == 0);
  CHECK(common_vertex_labels(g2, h) == 3);
  CHECK_FALSE(degree_qgram_filter(g2, h, 2).passed);
  CHECK(label_qgram_filter(g2, h, 2).passed);

  // g3 passes both counting filters but not the degree sequence one.
  CHECK(label_qgram_filter(g3, h, 2).passed);
  CHECK(degree_qgram_filter(g3, h, 2).passed);
  CHECK(degree_sequence_filter(g3, h, 2).bound == 3);
  CHECK_FALSE(degree_sequence_filter(g3, h, 2).passed);
  CHECK(degree_sequence_filter(g3, h, 3).passed);

  CHECK(filter_cascade(g2, h, 2).pruned_by == FilterStage::kDegreeQGram);
  CHECK(filter_cascade(g3, h, 2).pruned_by == FilterStage::kDegreeSequence);
  CHECK(filter_cascade(g1, h, 3).passed);
  CHECK(filter_cascade(g3, h, 3).passed);
  CHECK(filter_cascade(g2, h, 3).pruned_by == FilterStage::kDegreeSequence);
}

TEST_CASE("delta") {
  CHECK(delta(V{3, 2, 2, 1}, V{2, 2, 2, 2}) == 2);
  CHECK(delta(V{}, V{}) == 0);
  CHECK(delta(V{5, 0}, V{0, 0}) == 3);
  CHECK(delta(V{4, 4}, V{1, 1}) == 3);
  CHECK_THROWS_AS(delta(V{1}, V{1, 2}), std::invalid_argument);
}

TEST_CASE("delta is symmetric") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 2000; ++t) {
    const std::size_t n = rng() % 8;
    V x(n), y(n);
    for (auto& v : x) v = rng() % 6;
    for (auto& v : y) v = rng() % 6;
    CHECK(delta(x, y) == delta(y, x));
  }
}

TEST_CASE("sorted alignment minimises delta over permutations") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng() % 5;
    V x(n), y(n);
    for (auto& v : x) v = rng() % 5;
    for (auto& v : y) v = rng() % 5;
    std::sort(x.begin(), x.end(), std::greater<>());
    std::sort(y.begin(), y.end(), std::greater<>());
    const auto sorted = delta(x, y);
    V z = y;
    std::sort(z.begin(), z.end());
    do CHECK(delta(x, z) >= sorted);
    while (std::next_permutation(z.begin(), z.end()));
  }
}

TEST_CASE("number count and label bounds") {
  CHECK(number_count_bound(3, 2, 4, 4) == 3);
  CHECK(number_count_bound(4, 4, 4, 4) == 0);
  CHECK(label_qgram_bound(3, 2, 4, 4, 5) == 3);
  CHECK(degree_qgram_bound(4, 4, 0, 3) == 3);
  CHECK(degree_qgram_bound(4, 4, 4, 4) == 0);
}

TEST_CASE("deletion profile of a triangle with a pendant vertex") {
  LabeledGraph h;
  for (int i = 0; i < 4; ++i) h.add_vertex(0);
  h.add_edge(0, 1, 0);
  h.add_edge(1, 2, 0);
  h.add_edge(0, 2, 0);
  h.add_edge(2, 3, 0);
  DegreeProfile p(h);
  CHECK(p.sequence() == V{3, 2, 2, 1});
  // Removing vertex 3 costs one edge and leaves a triangle.
  const auto& one = p.deletions(1);
  CHECK(std::any_of(one.begin(), one.end(), [](const auto& d) {
    return d.removed_edges == 1 && d.residual == V{2, 2, 2};
  }));
  // Removing vertex 2 costs three edges and leaves a single edge plus isolated vertex.
  CHECK(std::any_of(one.begin(), one.end(), [](const auto& d) {
    return d.removed_edges == 3 && d.residual == V{1, 1, 0};
  }));
  CHECK(p.deletions(0).empty());
  CHECK(p.deletions(4).empty());
  // Any single survivor is isolated and all four edges are gone.
  REQUIRE(p.deletions(3).size() == 1);
  CHECK(p.deletions(3)[0].removed_edges == 4);
  CHECK(p.deletions(3)[0].residual == V{0});
}

TEST_CASE("deletion outcomes match induced subgraphs") {
  std::mt19937_64 rng(404);
  testing::RandomGraphShape shape{1, 8, 2, 2, 0.45};
  for (int t = 0; t < 200; ++t) {
    const auto h = testing::random_graph(rng, shape);
    const DegreeProfile p(h);
    const auto n = static_cast<std::uint32_t>(h.vertex_count());
    for (std::uint32_t k = 1; k <= 3; ++k) {
      std::set<std::pair<std::uint32_t, V>> naive;
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::uint32_t>(std::popcount(mask)) != k) continue;
        LabeledGraph rest;
        std::vector<int> map(n, -1);
        for (std::uint32_t v = 0; v < n; ++v)
          if (!(mask >> v & 1)) map[v] = static_cast<int>(rest.add_vertex(h.vertex_label(v)));
        std::uint32_t removed = 0;
        for (const auto& e : h.edges()) {
          if (map[e.u] < 0 || map[e.v] < 0) ++removed;
          else rest.add_edge(map[e.u], map[e.v], e.label);
        }
        naive.emplace(removed, degree_sequence(rest));
      }
      std::set<std::pair<std::uint32_t, V>> got;
      for (const auto& d : p.deletions(k)) got.emplace(d.removed_edges, d.residual);
      CHECK(got == naive);
      CHECK(got.size() == p.deletions(k).size());
    }
  }
}

TEST_CASE("bounds are sound against exhaustive edit distance") {
  std::mt19937_64 rng(2024);
  testing::RandomGraphShape shape{1, 5, 3, 2, 0.5};
  for (int t = 0; t < 300; ++t) {
    const auto g = testing::random_graph(rng, shape);
    const auto h = testing::random_graph(rng, shape);
    const auto d = testing::ged_brute(g, h);
    const DegreeProfile p(h);
    CHECK(number_count_bound(g.vertex_count(), g.edge_count(), h.vertex_count(), h.edge_count()) <= d);
    CHECK(dist_label(g, h) <= d);
    CHECK(degree_qgram_filter(g, h, d).passed);
    const auto sigma = degree_sequence(g);
    const auto cv = common_vertex_labels(g, h);
    const auto b1 = degree_sequence_bound(sigma, cv, p, DeletionCostForm::kEdgeCount);
    const auto b2 = degree_sequence_bound(sigma, cv, p, DeletionCostForm::kDegreeSum);
    CHECK(b1 <= d);
    CHECK(b2 <= b1);
  }
}

TEST_CASE("passing is monotone in tau") {
  std::mt19937_64 rng(99);
  testing::RandomGraphShape shape{1, 6, 3, 2, 0.4};
  for (int t = 0; t < 300; ++t) {
    const auto g = testing::random_graph(rng, shape);
    const auto h = testing::random_graph(rng, shape);
    const auto d = testing::ged_brute(g, h);
    bool before = false;
    for (std::int64_t tau = 0; tau <= d + 2; ++tau) {
      const bool now = filter_cascade(g, h, tau).passed;
      if (before) CHECK(now);
      if (tau >= d) CHECK(now);
      before = now;
    }
  }
}

}
