#include "msq/index.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace msq {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

bool same_tables(const LabelTables& a, const LabelTables& b) {
  return a.vertex.names() == b.vertex.names() && a.edge.names() == b.edge.names();
}

template <class V>
bool same_vocab(const V& a, const V& b) {
  return a.entries() == b.entries() && a.frequencies() == b.frequencies();
}

std::vector<std::pair<GraphId, FourTuple>> leaves_of(const std::vector<LabeledGraph>& graphs,
                                                     const Vocabularies& vocab,
                                                     std::span<const GraphId> ids) {
  std::vector<std::pair<GraphId, FourTuple>> leaves;
  leaves.reserve(ids.size());
  for (GraphId id : ids) {
    auto enc = encode_four_tuple(graphs.at(id), vocab.degree, vocab.label);
    if (enc.unmatched)
      throw std::invalid_argument("vocabulary does not cover graph " + std::to_string(id));
    leaves.emplace_back(id, std::move(enc.tuple));
  }
  std::sort(leaves.begin(), leaves.end(), [](const auto& a, const auto& b) {
    return std::tie(a.second.n_vertices, a.second.n_edges, a.first) <
           std::tie(b.second.n_vertices, b.second.n_edges, b.first);
  });
  return leaves;
}

std::map<RegionId, std::vector<GraphId>> buckets_of(const std::vector<LabeledGraph>& graphs,
                                                    const PartitionParams& part) {
  std::map<RegionId, std::vector<GraphId>> buckets;
  for (const auto& g : graphs) {
    buckets[subregion_of(static_cast<std::int64_t>(g.vertex_count()),
                         static_cast<std::int64_t>(g.edge_count()), part)]
        .push_back(g.id());
  }
  return buckets;
}

// Node access for the succinct layout.
struct SuccinctView {
  const SuccinctTree& t;
  using Node = std::size_t;

  Node root() const { return SuccinctTree::root(); }
  bool is_leaf(Node n) const { return t.is_leaf(n); }
  template <class F>
  void for_children(Node n, F&& f) const {
    const std::size_t end = t.subtree_end(n);
    for (std::size_t c = n + 1; c < end; c = t.subtree_end(c)) f(c);
  }
  template <class F>
  void for_leaves(Node n, F&& f) const {
    const std::size_t end = t.subtree_end(n);
    for (std::size_t k = n; k < end; ++k)
      if (t.is_leaf(k)) f(t.graph_id(k));
  }
  std::uint32_t nv(Node n) const { return t.n_vertices(n); }
  std::uint32_t ne(Node n) const { return t.n_edges(n); }
  std::uint32_t f(Node n, Vec x, std::uint32_t id) const { return t.f_access(n, x, id); }
  std::vector<std::uint32_t> degree_vector(Node n) const { return t.slice(n, Vec::kD); }
  GraphId graph_id(Node n) const { return t.graph_id(n); }
};

// Node access for the pointer tree.
struct PlainView {
  const QGramTreeNode& r;
  using Node = const QGramTreeNode*;

  Node root() const { return &r; }
  bool is_leaf(Node n) const { return n->is_leaf(); }
  template <class F>
  void for_children(Node n, F&& f) const {
    for (const auto& c : n->children) f(&c);
  }
  template <class F>
  void for_leaves(Node n, F&& f) const {
    if (n->is_leaf()) {
      f(*n->graph_id);
      return;
    }
    for (const auto& c : n->children) for_leaves(&c, f);
  }
  std::uint32_t nv(Node n) const { return n->tuple.n_vertices; }
  std::uint32_t ne(Node n) const { return n->tuple.n_edges; }
  std::uint32_t f(Node n, Vec x, std::uint32_t id) const {
    const auto& v = x == Vec::kD ? n->tuple.degree : n->tuple.label;
    return id < v.size() ? v[id] : 0;
  }
  std::vector<std::uint32_t> degree_vector(Node n) const { return n->tuple.degree; }
  GraphId graph_id(Node n) const { return *n->graph_id; }
};

template <class View>
class TreeSearch {
 public:
  TreeSearch(const View& view, const MsqIndex& index, const PreparedQuery& q, std::int64_t tau,
             SearchTrace* trace)
      : v_(view), index_(index), q_(q), tau_(tau), trace_(trace) {}

  std::vector<GraphId> run() {
    visit(v_.root());
    std::sort(out_.begin(), out_.end());
    return std::move(out_);
  }

 private:
  void prune(typename View::Node n, FilterStage why) {
    if (!trace_) return;
    if (!v_.is_leaf(n)) ++trace_->internal_pruned;
    v_.for_leaves(n, [&](GraphId g) { trace_->pruned.emplace_back(g, why); });
  }

  void visit(typename View::Node n) {
    if (trace_) ++trace_->nodes_visited;
    const std::int64_t nv = v_.nv(n);
    const std::int64_t ne = v_.ne(n);
    const std::int64_t hv = q_.tuple.n_vertices;
    const std::int64_t he = q_.tuple.n_edges;
    const std::int64_t max_v = std::max(nv, hv);

    std::int64_t c_l = 0;
    std::uint64_t common_vl = 0;
    for (auto [id, c] : q_.label_nz) {
      const std::uint32_t m = std::min(v_.f(n, Vec::kL, id), c);
      c_l += m;
      if (index_.vertex_label_id()[id]) common_vl += m;
    }
    if (c_l < max_v + std::max(ne, he) - tau_) return prune(n, FilterStage::kLabelQGram);

    std::int64_t c_d = 0;
    for (auto [id, c] : q_.degree_nz) c_d += std::min(v_.f(n, Vec::kD, id), c);
    if (c_d < max_v - 2 * tau_) return prune(n, FilterStage::kDegreeQGram);

    if (!v_.is_leaf(n)) {
      v_.for_children(n, [&](typename View::Node c) { visit(c); });
      return;
    }
    if (degree_qgram_bound(nv, hv, c_d, common_vl) > tau_)
      return prune(n, FilterStage::kDegreeQGram);

    // sigma_w from the degree q-gram counts and each id's degree.
    std::vector<std::uint32_t> sigma;
    sigma.reserve(nv);
    const auto f = v_.degree_vector(n);
    const auto& deg = index_.degree_of_id();
    for (std::size_t id = 0; id < f.size(); ++id) sigma.insert(sigma.end(), f[id], deg[id]);
    std::sort(sigma.begin(), sigma.end(), std::greater<>());
    if (degree_sequence_bound(sigma, common_vl, q_.profile) > tau_)
      return prune(n, FilterStage::kDegreeSequence);
    out_.push_back(v_.graph_id(n));
  }

  const View& v_;
  const MsqIndex& index_;
  const PreparedQuery& q_;
  std::int64_t tau_;
  SearchTrace* trace_;
  std::vector<GraphId> out_;
};

}  // namespace

void MsqIndex::finish() {
  degree_of_id_.clear();
  for (const auto& q : vocab_.degree.entries())
    degree_of_id_.push_back(static_cast<std::uint32_t>(q.edge_labels.size()));
  vertex_label_id_.clear();
  for (const auto& q : vocab_.label.entries())
    vertex_label_id_.push_back(q.kind == LabelKind::kVertex ? 1 : 0);
}

bool MsqIndex::operator==(const MsqIndex& o) const {
  return partition_ == o.partition_ && block_ == o.block_ && fanout_ == o.fanout_ &&
         same_tables(labels_, o.labels_) && same_vocab(vocab_.degree, o.vocab_.degree) &&
         same_vocab(vocab_.label, o.vocab_.label) && graphs_ == o.graphs_ &&
         regions_ == o.regions_;
}

QGramTreeNode MsqIndex::plain_tree(RegionId r) const {
  std::vector<GraphId> ids;
  for (const auto& g : graphs_) {
    if (subregion_of(static_cast<std::int64_t>(g.vertex_count()),
                     static_cast<std::int64_t>(g.edge_count()), partition_) == r)
      ids.push_back(g.id());
  }
  if (ids.empty()) throw std::out_of_range("no graphs in region");
  return build_tree(leaves_of(graphs_, vocab_, ids), fanout_);
}

std::vector<std::pair<GraphId, FourTuple>> region_leaves(const MsqIndex& index,
                                                         std::span<const GraphId> ids) {
  return leaves_of(index.graphs(), index.vocab(), ids);
}

MsqIndex assemble_index(std::vector<LabeledGraph> graphs, LabelTables labels, Vocabularies vocab,
                        PartitionParams partition, std::uint32_t block, std::uint32_t fanout,
                        std::map<RegionId, SuccinctTree> regions) {
  MsqIndex idx;
  idx.graphs_ = std::move(graphs);
  idx.labels_ = std::move(labels);
  idx.vocab_ = std::move(vocab);
  idx.partition_ = partition;
  idx.block_ = block;
  idx.fanout_ = fanout;
  idx.regions_ = std::move(regions);
  idx.finish();
  return idx;
}

MsqIndex build_index(std::vector<LabeledGraph> graphs, LabelTables labels,
                     const IndexParams& params) {
  Vocabularies vocab = build_vocab(graphs);
  return build_index(std::move(graphs), std::move(labels), std::move(vocab), params);
}

MsqIndex build_index(std::vector<LabeledGraph> graphs, LabelTables labels, Vocabularies vocab,
                     const IndexParams& params) {
  if (graphs.empty()) throw std::invalid_argument("cannot index an empty dataset");
  if (params.l < 1) throw std::invalid_argument("partition length must be >= 1");
  if (params.block < 1) throw std::invalid_argument("block size must be >= 1");
  if (params.fanout < 2) throw std::invalid_argument("tree fan-out must be >= 2");
  for (std::size_t i = 0; i < graphs.size(); ++i)
    if (graphs[i].id() != i) throw std::invalid_argument("graph ids must equal their positions");

  PartitionParams part = default_partition(graphs);
  part.l = params.l;
  if (params.x0) part.x0 = *params.x0;
  if (params.y0) part.y0 = *params.y0;

  std::map<RegionId, SuccinctTree> regions;
  for (const auto& [r, ids] : buckets_of(graphs, part)) {
    const QGramTreeNode root = build_tree(leaves_of(graphs, vocab, ids), params.fanout);
    regions.emplace(r, SuccinctTree::build(root, params.block));
  }
  return assemble_index(std::move(graphs), std::move(labels), std::move(vocab), part,
                        params.block, params.fanout, std::move(regions));
}

PreparedQuery prepare_query(const MsqIndex& index, const LabeledGraph& h) {
  auto enc = encode_four_tuple(h, index.vocab().degree, index.vocab().label);
  PreparedQuery q{h, std::move(enc.tuple), {}, {}, DegreeProfile(h), enc.unmatched};
  for (std::uint32_t i = 0; i < q.tuple.degree.size(); ++i)
    if (q.tuple.degree[i]) q.degree_nz.emplace_back(i, q.tuple.degree[i]);
  for (std::uint32_t i = 0; i < q.tuple.label.size(); ++i)
    if (q.tuple.label[i]) q.label_nz.emplace_back(i, q.tuple.label[i]);
  return q;
}

std::vector<LabeledGraph> parse_queries(const MsqIndex& index, std::istream& in) {
  LabelTables tables = index.labels();
  return parse_dataset(in, tables);
}

std::vector<LabeledGraph> parse_queries_file(const MsqIndex& index, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open query file: " + path);
  return parse_queries(index, in);
}

std::vector<GraphId> search_qtree(const MsqIndex& index, const SuccinctTree& tree,
                                  const PreparedQuery& q, std::int64_t tau, SearchTrace* trace) {
  const SuccinctView view{tree};
  return TreeSearch<SuccinctView>(view, index, q, tau, trace).run();
}

std::vector<GraphId> search_plain(const MsqIndex& index, const QGramTreeNode& tree,
                                  const PreparedQuery& q, std::int64_t tau, SearchTrace* trace) {
  const PlainView view{tree};
  return TreeSearch<PlainView>(view, index, q, tau, trace).run();
}

std::vector<GraphId> search(const MsqIndex& index, const PreparedQuery& q, std::int64_t tau,
                            SearchTrace* trace) {
  const QueryRegion rect = query_region(q.tuple.n_vertices, q.tuple.n_edges, tau, index.partition());
  std::vector<GraphId> out;
  const auto& regions = index.regions();
  auto it = regions.lower_bound({rect.i1, std::numeric_limits<std::int64_t>::min()});
  for (; it != regions.end() && it->first.i <= rect.i2; ++it) {
    if (!rect.contains(it->first)) continue;
    auto part = search_qtree(index, it->second, q, tau, trace);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<GraphId> search_all(const MsqIndex& index, const PreparedQuery& q, std::int64_t tau) {
  std::vector<GraphId> out;
  for (const auto& [r, tree] : index.regions()) {
    auto part = search_qtree(index, tree, q, tau);
    out.insert(out.end(), part.begin(), part.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

QueryResult query(const MsqIndex& index, const LabeledGraph& h, const QueryOptions& opts) {
  if (opts.tau < 0) throw std::invalid_argument("tau must be >= 0");
  QueryResult res;
  auto t0 = Clock::now();
  const PreparedQuery q = prepare_query(index, h);
  res.candidates = search(index, q, opts.tau);
  res.filter_ms = ms_since(t0);

  t0 = Clock::now();
  const std::size_t n = res.candidates.size();
  std::vector<GedStatus> status(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < n;) {
      const GedOptions go{opts.budget, opts.tau};
      status[k] = ged_exact(index.graph(res.candidates[k]), h, go).status;
    }
  };
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (status[k] == GedStatus::kExact) res.answers.push_back(res.candidates[k]);
    else if (status[k] == GedStatus::kExceeded) res.unverified.push_back(res.candidates[k]);
  }
  res.verify_ms = ms_since(t0);
  return res;
}

IndexStats index_stats(const MsqIndex& index) {
  IndexStats s;
  s.graphs = index.size();
  s.regions = index.regions().size();
  s.vocab_degree = index.vocab().degree.size();
  s.vocab_label = index.vocab().label.size();
  auto add_space = [](VectorSpace& a, const VectorSpace& b) {
    a.b += b.b, a.b_rank += b.b_rank, a.s += b.s, a.sb += b.sb, a.flag += b.flag, a.words += b.words;
  };
  auto add_cost = [](CodingCost& a, const CodingCost& b) {
    a.fixed_bits += b.fixed_bits, a.gamma_bits += b.gamma_bits, a.hybrid_bits += b.hybrid_bits;
  };
  auto add_bytes = [](TreeBytes& a, const TreeBytes& b) {
    a.nodes += b.nodes, a.degree += b.degree, a.label += b.label;
  };
  const auto buckets = buckets_of(index.graphs(), index.partition());
  for (const auto& [r, t] : index.regions()) {
    s.nodes += t.node_count();
    s.psi_d_entries += t.psi(Vec::kD).size();
    s.psi_l_entries += t.psi(Vec::kL).size();
    add_cost(s.psi_d, t.psi(Vec::kD).cost());
    add_cost(s.psi_l, t.psi(Vec::kL).cost());
    add_space(s.space_d, t.space(Vec::kD));
    add_space(s.space_l, t.space(Vec::kL));
    s.node_bits += t.node_bits();
    add_bytes(s.succinct, t.bytes());
    const auto& ids = buckets.at(r);
    add_bytes(s.plain, plain_tree_bytes(build_tree(
                           leaves_of(index.graphs(), index.vocab(), ids), index.fanout())));
  }
  return s;
}

}  // namespace msq
