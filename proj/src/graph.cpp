#include "msq/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace msq {

Symbol SymbolTable::intern(std::string_view name) {
  auto it = ids_.find(std::string(name));
  if (it != ids_.end()) return it->second;
  const auto id = static_cast<Symbol>(names_.size());
  names_.emplace_back(name);
  ids_.emplace(names_.back(), id);
  return id;
}

bool SymbolTable::contains(std::string_view name) const {
  return ids_.count(std::string(name)) != 0;
}

Symbol SymbolTable::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  if (it == ids_.end()) throw std::out_of_range("unknown symbol: " + std::string(name));
  return it->second;
}

VertexId LabeledGraph::add_vertex(Symbol label) {
  vertex_labels_.push_back(label);
  return static_cast<VertexId>(vertex_labels_.size() - 1);
}

void LabeledGraph::add_edge(VertexId u, VertexId v, Symbol label) {
  if (u >= vertex_count() || v >= vertex_count())
    throw GraphError("edge references undeclared vertex");
  if (u == v) throw GraphError("self-loop");
  if (has_edge(u, v)) throw GraphError("duplicate edge");
  edges_.push_back({u, v, label});
}

bool LabeledGraph::has_edge(VertexId u, VertexId v) const {
  return std::any_of(edges_.begin(), edges_.end(), [&](const Edge& e) {
    return (e.u == u && e.v == v) || (e.u == v && e.v == u);
  });
}

std::vector<std::uint32_t> LabeledGraph::degrees() const {
  std::vector<std::uint32_t> deg(vertex_count(), 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg;
}

std::vector<std::vector<Symbol>> LabeledGraph::incident_labels() const {
  std::vector<std::vector<Symbol>> adj(vertex_count());
  for (const auto& e : edges_) {
    adj[e.u].push_back(e.label);
    adj[e.v].push_back(e.label);
  }
  for (auto& labels : adj) std::sort(labels.begin(), labels.end());
  return adj;
}

bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
  if (a.id_ != b.id_ || a.vertex_labels_ != b.vertex_labels_) return false;
  if (a.edges_.size() != b.edges_.size()) return false;
  for (std::size_t i = 0; i < a.edges_.size(); ++i) {
    const auto& x = a.edges_[i];
    const auto& y = b.edges_[i];
    if (x.u != y.u || x.v != y.v || x.label != y.label) return false;
  }
  return true;
}

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_index(std::string_view tok, std::uint64_t& out) {
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
  return ec == std::errc() && ptr == tok.data() + tok.size();
}

}  // namespace

std::vector<LabeledGraph> parse_dataset(std::istream& in, LabelTables& tables,
                                        GraphId first_id) {
  std::vector<LabeledGraph> graphs;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto tok = split_ws(line);
    if (tok.empty() || tok[0].front() == '#') continue;
    if (tok[0] == "t") {
      if (tok.size() >= 3 && tok[2] == "-1") break;
      graphs.emplace_back(static_cast<GraphId>(first_id + graphs.size()));
      continue;
    }
    if (graphs.empty()) throw ParseError(lineno, "record before first 't' line");
    auto& g = graphs.back();
    if (tok[0] == "v") {
      std::uint64_t idx = 0;
      if (tok.size() != 3 || !parse_index(tok[1], idx))
        throw ParseError(lineno, "expected 'v <index> <label>'");
      if (idx != g.vertex_count())
        throw ParseError(lineno, "vertex indices must be contiguous from 0");
      g.add_vertex(tables.vertex.intern(tok[2]));
    } else if (tok[0] == "e") {
      std::uint64_t u = 0;
      std::uint64_t v = 0;
      if (tok.size() < 3 || tok.size() > 4 || !parse_index(tok[1], u) ||
          !parse_index(tok[2], v))
        throw ParseError(lineno, "expected 'e <u> <v> [label]'");
      const Symbol label = tables.edge.intern(tok.size() == 4 ? tok[3] : "_");
      try {
        g.add_edge(static_cast<VertexId>(u), static_cast<VertexId>(v), label);
      } catch (const GraphError& err) {
        throw ParseError(lineno, err.what());
      }
    } else {
      throw ParseError(lineno, "unknown record type '" + std::string(tok[0]) + "'");
    }
  }
  return graphs;
}

std::vector<LabeledGraph> parse_dataset_file(const std::string& path,
                                             LabelTables& tables) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_dataset(in, tables);
}

void write_dataset(std::ostream& out, const std::vector<LabeledGraph>& graphs,
                   const LabelTables& tables) {
  for (const auto& g : graphs) {
    out << "t # " << g.id() << '\n';
    for (VertexId v = 0; v < g.vertex_count(); ++v)
      out << "v " << v << ' ' << tables.vertex.name(g.vertex_label(v)) << '\n';
    for (const auto& e : g.edges())
      out << "e " << e.u << ' ' << e.v << ' ' << tables.edge.name(e.label) << '\n';
  }
}

std::vector<std::uint32_t> degree_sequence(const LabeledGraph& g) {
  auto deg = g.degrees();
  std::sort(deg.begin(), deg.end(), std::greater<>());
  return deg;
}

}  // namespace msq
