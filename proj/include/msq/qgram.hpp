#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "msq/graph.hpp"

namespace msq {

// Degree structure of one vertex: its label, the multiset of incident edge
// labels (sorted) and its degree.
struct DegreeQGram {
  Symbol vertex_label = 0;
  std::vector<Symbol> edge_labels;
  std::uint32_t degree = 0;

  bool operator==(const DegreeQGram& o) const {
    return vertex_label == o.vertex_label && edge_labels == o.edge_labels;
  }
  // Lexicographic order of the serialization (vertex label, degree, edge labels...).
  std::strong_ordering operator<=>(const DegreeQGram& o) const {
    if (auto c = vertex_label <=> o.vertex_label; c != 0) return c;
    if (auto c = degree <=> o.degree; c != 0) return c;
    return std::lexicographical_compare_three_way(edge_labels.begin(), edge_labels.end(),
                                                  o.edge_labels.begin(), o.edge_labels.end());
  }
};

enum class LabelKind : std::uint8_t { kVertex = 0, kEdge = 1 };

struct LabelQGram {
  LabelKind kind = LabelKind::kVertex;
  Symbol label = 0;

  bool operator==(const LabelQGram&) const = default;
  auto operator<=>(const LabelQGram&) const = default;
};

struct DegreeQGramHash {
  std::size_t operator()(const DegreeQGram& q) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ q.vertex_label;
    for (Symbol s : q.edge_labels) h = (h ^ s) * 0x100000001b3ULL + 0x7f4a7c15;
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

struct LabelQGramHash {
  std::size_t operator()(const LabelQGram& q) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t{q.label} << 1) |
                                      static_cast<std::uint64_t>(q.kind));
  }
};

std::vector<DegreeQGram> degree_qgrams(const LabeledGraph& g);
std::vector<LabelQGram> label_qgrams(const LabeledGraph& g);

/*
 * Catalog of distinct q-grams. Ids are dense and 0-based. When built from
 * counts, id order is descending total occurrence with ties broken by the
 * key's ordering.
 */
template <class Key, class Hash>
class Vocabulary {
 public:
  using key_type = Key;

  Vocabulary() = default;

  static Vocabulary from_counts(const std::unordered_map<Key, std::uint64_t, Hash>& counts) {
    std::vector<std::pair<Key, std::uint64_t>> items(counts.begin(), counts.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    Vocabulary v;
    for (auto& [key, n] : items) v.push(std::move(key), n);
    return v;
  }

  // Takes the id order as given. Frequencies default to zero.
  static Vocabulary from_entries(std::vector<Key> keys, std::vector<std::uint64_t> freq = {}) {
    if (!freq.empty() && freq.size() != keys.size())
      throw std::invalid_argument("frequency list length mismatch");
    Vocabulary v;
    for (std::size_t i = 0; i < keys.size(); ++i)
      v.push(std::move(keys[i]), freq.empty() ? 0 : freq[i]);
    return v;
  }

  std::optional<std::uint32_t> find(const Key& key) const {
    auto it = ids_.find(key);
    if (it == ids_.end()) return std::nullopt;
    return it->second;
  }
  const Key& at(std::uint32_t id) const { return entries_.at(id); }
  std::uint64_t frequency(std::uint32_t id) const { return freq_.at(id); }
  std::size_t size() const { return entries_.size(); }
  const std::vector<Key>& entries() const { return entries_; }
  const std::vector<std::uint64_t>& frequencies() const { return freq_; }

 private:
  void push(Key key, std::uint64_t n) {
    const auto id = static_cast<std::uint32_t>(entries_.size());
    if (!ids_.emplace(key, id).second) throw std::invalid_argument("duplicate vocabulary entry");
    entries_.push_back(std::move(key));
    freq_.push_back(n);
  }

  std::vector<Key> entries_;
  std::vector<std::uint64_t> freq_;
  std::unordered_map<Key, std::uint32_t, Hash> ids_;
};

using DegreeVocabulary = Vocabulary<DegreeQGram, DegreeQGramHash>;
using LabelVocabulary = Vocabulary<LabelQGram, LabelQGramHash>;

struct Vocabularies {
  DegreeVocabulary degree;
  LabelVocabulary label;
};

Vocabularies build_vocab(std::span<const LabeledGraph> graphs);

/*
 * (F_D, F_L, n_v, n_e). Frequency vectors are trimmed: their length is one
 * past the largest id with a nonzero count.
 */
struct FourTuple {
  std::vector<std::uint32_t> degree;
  std::vector<std::uint32_t> label;
  std::uint32_t n_vertices = 0;
  std::uint32_t n_edges = 0;

  bool operator==(const FourTuple&) const = default;
};

struct TupleEncoding {
  FourTuple tuple;
  // q-grams of the graph with no id in the vocabularies (degree + label).
  std::uint32_t unmatched = 0;
};

TupleEncoding encode_four_tuple(const LabeledGraph& g, const DegreeVocabulary& vd,
                                const LabelVocabulary& vl);

// Sum over ids of min(a[i], b[i]).
std::uint64_t common_count(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b);

// Common count restricted to label ids that are vertex labels.
std::uint64_t common_vertex_labels(std::span<const std::uint32_t> a,
                                   std::span<const std::uint32_t> b, const LabelVocabulary& vl);

}  // namespace msq
