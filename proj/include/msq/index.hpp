#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msq/filters.hpp"
#include "msq/ged.hpp"
#include "msq/graph.hpp"
#include "msq/partition.hpp"
#include "msq/qgram.hpp"
#include "msq/qtree.hpp"
#include "msq/succinct_tree.hpp"

namespace msq {

inline constexpr std::uint16_t kIndexFormatVersion = 1;

struct IndexParams {
  // Unset anchors default to the smallest |V| and |E| in the database.
  std::optional<std::int64_t> x0;
  std::optional<std::int64_t> y0;
  std::int64_t l = 4;
  std::uint32_t block = 16;
  std::uint32_t fanout = 8;
};

class MsqIndex {
 public:
  const PartitionParams& partition() const { return partition_; }
  std::uint32_t block() const { return block_; }
  std::uint32_t fanout() const { return fanout_; }
  const LabelTables& labels() const { return labels_; }
  const Vocabularies& vocab() const { return vocab_; }
  const std::map<RegionId, SuccinctTree>& regions() const { return regions_; }
  const std::vector<LabeledGraph>& graphs() const { return graphs_; }
  const LabeledGraph& graph(GraphId id) const { return graphs_.at(id); }
  std::size_t size() const { return graphs_.size(); }

  // Degree of each degree q-gram id; whether each label q-gram id is a vertex label.
  const std::vector<std::uint32_t>& degree_of_id() const { return degree_of_id_; }
  const std::vector<std::uint8_t>& vertex_label_id() const { return vertex_label_id_; }

  // Plain (pointer) tree of one region, rebuilt exactly as at build time.
  QGramTreeNode plain_tree(RegionId r) const;

  bool operator==(const MsqIndex& o) const;

 private:
  friend MsqIndex assemble_index(std::vector<LabeledGraph>, LabelTables, Vocabularies,
                                 PartitionParams, std::uint32_t, std::uint32_t,
                                 std::map<RegionId, SuccinctTree>);
  void finish();

  PartitionParams partition_;
  std::uint32_t block_ = 16;
  std::uint32_t fanout_ = 8;
  LabelTables labels_;
  Vocabularies vocab_;
  std::vector<LabeledGraph> graphs_;
  std::map<RegionId, SuccinctTree> regions_;
  std::vector<std::uint32_t> degree_of_id_;
  std::vector<std::uint8_t> vertex_label_id_;
};

// Graph ids must equal positions (as produced by parse_dataset).
MsqIndex build_index(std::vector<LabeledGraph> graphs, LabelTables labels,
                     const IndexParams& params = {});
// Same, with caller-supplied q-gram id assignment; every q-gram of the
// database must be present.
MsqIndex build_index(std::vector<LabeledGraph> graphs, LabelTables labels, Vocabularies vocab,
                     const IndexParams& params = {});

// Internal constructor shared by build and load.
MsqIndex assemble_index(std::vector<LabeledGraph> graphs, LabelTables labels, Vocabularies vocab,
                        PartitionParams partition, std::uint32_t block, std::uint32_t fanout,
                        std::map<RegionId, SuccinctTree> regions);

// Leaves in tree order: sorted by (|V|, |E|, id).
std::vector<std::pair<GraphId, FourTuple>> region_leaves(const MsqIndex& index,
                                                         std::span<const GraphId> ids);

// Query graph encoded against an index's vocabularies.
struct PreparedQuery {
  LabeledGraph graph;
  FourTuple tuple;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> degree_nz;  // (id, count)
  std::vector<std::pair<std::uint32_t, std::uint32_t>> label_nz;
  DegreeProfile profile;
  std::uint32_t unmatched = 0;
};

// h must use the index's symbol ids (see parse_queries).
PreparedQuery prepare_query(const MsqIndex& index, const LabeledGraph& h);

// Parses query graphs, interning their labels into a copy of the index's
// symbol tables so known labels keep their ids and unknown ones get new ids.
std::vector<LabeledGraph> parse_queries(const MsqIndex& index, std::istream& in);
std::vector<LabeledGraph> parse_queries_file(const MsqIndex& index, const std::string& path);

struct SearchTrace {
  std::uint64_t nodes_visited = 0;
  std::uint64_t internal_pruned = 0;
  // Every leaf that did not become a candidate, with the first test it failed.
  // Leaves under a pruned internal node get that node's failing test.
  std::vector<std::pair<GraphId, FilterStage>> pruned;
};

// Tree search in one region's tree. Candidates sorted ascending.
std::vector<GraphId> search_qtree(const MsqIndex& index, const SuccinctTree& tree,
                                  const PreparedQuery& q, std::int64_t tau,
                                  SearchTrace* trace = nullptr);
// The same traversal over the uncompressed tree (reference).
std::vector<GraphId> search_plain(const MsqIndex& index, const QGramTreeNode& tree,
                                  const PreparedQuery& q, std::int64_t tau,
                                  SearchTrace* trace = nullptr);

// Union over the regions inside the query rectangle.
std::vector<GraphId> search(const MsqIndex& index, const PreparedQuery& q, std::int64_t tau,
                            SearchTrace* trace = nullptr);
// Union over every region (no rectangle reduction).
std::vector<GraphId> search_all(const MsqIndex& index, const PreparedQuery& q, std::int64_t tau);

struct QueryOptions {
  std::int64_t tau = 0;
  std::uint64_t budget = 10'000'000;
  unsigned threads = 1;  // 0 = hardware concurrency
};

struct QueryResult {
  std::vector<GraphId> candidates;
  std::vector<GraphId> answers;
  std::vector<GraphId> unverified;  // exact search ran out of budget
  double filter_ms = 0;
  double verify_ms = 0;

  // Equality ignores timings.
  bool same_sets(const QueryResult& o) const {
    return candidates == o.candidates && answers == o.answers && unverified == o.unverified;
  }
};

QueryResult query(const MsqIndex& index, const LabeledGraph& h, const QueryOptions& opts);

struct IndexStats {
  std::size_t graphs = 0;
  std::size_t regions = 0;
  std::size_t nodes = 0;
  std::size_t vocab_degree = 0;
  std::size_t vocab_label = 0;
  std::uint64_t psi_d_entries = 0;
  std::uint64_t psi_l_entries = 0;
  CodingCost psi_d;
  CodingCost psi_l;
  VectorSpace space_d;
  VectorSpace space_l;
  std::uint64_t node_bits = 0;
  TreeBytes succinct;  // S_a', S_b', S_c'
  TreeBytes plain;     // S_a, S_b, S_c
};

IndexStats index_stats(const MsqIndex& index);

// Serialized form; build -> serialize is deterministic.
std::vector<std::uint8_t> serialize_index(const MsqIndex& index);
MsqIndex deserialize_index(std::span<const std::uint8_t> bytes);
void save_index(const MsqIndex& index, const std::string& path);
MsqIndex load_index(const std::string& path);

}  // namespace msq
