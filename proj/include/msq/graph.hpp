#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace msq {

using Symbol = std::uint32_t;
using VertexId = std::uint32_t;
using GraphId = std::uint32_t;

// Interns label strings to dense integer ids in first-seen order.
class SymbolTable {
 public:
  Symbol intern(std::string_view name);
  bool contains(std::string_view name) const;
  Symbol find(std::string_view name) const;  // throws std::out_of_range
  const std::string& name(Symbol s) const { return names_.at(s); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, Symbol> ids_;
};

struct LabelTables {
  SymbolTable vertex;
  SymbolTable edge;
};

struct Edge {
  VertexId u = 0;
  VertexId v = 0;
  Symbol label = 0;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/*
 * Simple undirected graph with labeled vertices and labeled edges.
 * Invariants (checked by add_edge): no self-loops, no parallel edges,
 * every endpoint refers to an existing vertex.
 */
class LabeledGraph {
 public:
  LabeledGraph() = default;
  explicit LabeledGraph(GraphId id) : id_(id) {}

  GraphId id() const { return id_; }
  void set_id(GraphId id) { id_ = id; }

  VertexId add_vertex(Symbol label);
  void add_edge(VertexId u, VertexId v, Symbol label);

  std::size_t vertex_count() const { return vertex_labels_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  Symbol vertex_label(VertexId v) const { return vertex_labels_[v]; }
  const std::vector<Symbol>& vertex_labels() const { return vertex_labels_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool has_edge(VertexId u, VertexId v) const;
  std::vector<std::uint32_t> degrees() const;

  // Per-vertex incident edge labels, each list sorted ascending.
  std::vector<std::vector<Symbol>> incident_labels() const;

  friend bool operator==(const LabeledGraph& a, const LabeledGraph& b);

 private:
  GraphId id_ = 0;
  std::vector<Symbol> vertex_labels_;
  std::vector<Edge> edges_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Reads the `t # id` / `v i label` / `e u v label` transaction format.
// Labels are interned into `tables`; graph ids are assigned consecutively
// from `first_id` in file order. `t # -1` terminates the stream.
std::vector<LabeledGraph> parse_dataset(std::istream& in, LabelTables& tables,
                                        GraphId first_id = 0);
std::vector<LabeledGraph> parse_dataset_file(const std::string& path,
                                             LabelTables& tables);

void write_dataset(std::ostream& out, const std::vector<LabeledGraph>& graphs,
                   const LabelTables& tables);

// Degrees sorted non-increasing.
std::vector<std::uint32_t> degree_sequence(const LabeledGraph& g);

}  // namespace msq
