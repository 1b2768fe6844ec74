#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace flowpotts {

using Vertex = std::uint32_t;

// Oriented edge; (tail, head) order is the canonical flow orientation.
struct Edge {
  Vertex tail;
  Vertex head;

  bool is_loop() const { return tail == head; }
  friend bool operator==(const Edge&, const Edge&) = default;
};

// Spanning edge subset, one bit per edge position.
using EdgeSubset = boost::dynamic_bitset<>;

// Finite multigraph with parallel edges and loops. Edge identity is the
// position in the edge list. Immutable after construction.
class Multigraph {
 public:
  Multigraph() = default;
  Multigraph(std::size_t vertex_count, std::vector<Edge> edges);
  Multigraph(std::size_t vertex_count, std::initializer_list<Edge> edges)
      : Multigraph(vertex_count, std::vector<Edge>(edges)) {}

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  const Edge& edge(std::size_t i) const { return edges_.at(i); }

  bool has_loops() const;
  // Loops add 2 to their vertex.
  std::vector<std::size_t> degrees() const;

  EdgeSubset no_edges() const { return EdgeSubset(edges_.size()); }
  EdgeSubset all_edges() const { return ~EdgeSubset(edges_.size()); }

  friend bool operator==(const Multigraph&, const Multigraph&) = default;

 private:
  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
};

// Per-base-edge multiplicities m(e).
struct MultiplicityVector {
  std::vector<std::uint32_t> counts;

  MultiplicityVector() = default;
  explicit MultiplicityVector(std::vector<std::uint32_t> c) : counts(std::move(c)) {}
  MultiplicityVector(std::initializer_list<std::uint32_t> c) : counts(c) {}

  std::size_t size() const { return counts.size(); }
  std::uint64_t total() const;
  std::uint32_t operator[](std::size_t i) const { return counts[i]; }
  friend bool operator==(const MultiplicityVector&, const MultiplicityVector&) = default;
};

// Sorted set of vertices; used for sources ∂m.
class SourceSet {
 public:
  SourceSet() = default;
  SourceSet(std::initializer_list<Vertex> vs);
  explicit SourceSet(std::vector<Vertex> vs);

  static SourceSet from_mask(std::uint64_t mask);
  std::uint64_t mask() const;  // requires every vertex < 64

  std::size_t size() const { return vertices_.size(); }
  bool empty() const { return vertices_.empty(); }
  bool contains(Vertex v) const;
  const std::vector<Vertex>& vertices() const { return vertices_; }

  SourceSet symmetric_difference(const SourceSet& other) const;

  friend bool operator==(const SourceSet&, const SourceSet&) = default;

 private:
  std::vector<Vertex> vertices_;
};

std::ostream& operator<<(std::ostream& os, const SourceSet& s);

struct RankCorank {
  std::size_t rank;
  std::size_t corank;
  friend bool operator==(const RankCorank&, const RankCorank&) = default;
};

// Disjoint-set forest over vertices.
class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n);
  std::size_t find(std::size_t v);
  bool unite(std::size_t a, std::size_t b);  // true if two classes merged
  std::size_t classes() const { return classes_; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
  std::size_t classes_;
};

// k(V, active); isolated vertices count as components.
std::size_t component_count(const Multigraph& g, const EdgeSubset& active);
// Same for graphs with at most 64 edges, active edges given as a bit mask.
std::size_t component_count(const Multigraph& g, std::uint64_t active_mask);

RankCorank rank_corank(const Multigraph& g, const EdgeSubset& active);

// G_m: each base edge replaced by m(e) parallel copies in base orientation.
Multigraph expand(const Multigraph& g, const MultiplicityVector& m);

// G^{x,y}: one extra edge (x, y) appended last.
Multigraph add_pair_edge(const Multigraph& g, Vertex x, Vertex y);

// Spanning subgraph (V, S) keeping only the edges in S, in order.
Multigraph restrict_edges(const Multigraph& g, std::uint64_t edge_mask);

// Same graph with the orientation of every edge i with flip[i] reversed.
Multigraph reorient(const Multigraph& g, const std::vector<bool>& flip);

bool is_even(const Multigraph& g);

// ∂m: vertices whose total incident multiplicity is odd.
SourceSet source_set(const Multigraph& g, const MultiplicityVector& m);

// x ↔ y in G_m. True when x == y.
bool connected_in(const Multigraph& g, const MultiplicityVector& m, Vertex x, Vertex y);

// Graph-distance from `source` (unreachable vertices get SIZE_MAX).
std::vector<std::size_t> bfs_distances(const Multigraph& g, Vertex source);

// True iff x, z ∉ W and every x–z path meets W.
bool separates(const Multigraph& g, const std::vector<Vertex>& W, Vertex x, Vertex z);

// --- text format and named graphs ---------------------------------------

// "n m" header then m lines "tail head", 0-based.
Multigraph parse_graph(std::istream& in);
Multigraph parse_graph_text(const std::string& text);
std::string format_graph(const Multigraph& g);

// k2, digon, triangle, path:<n>, cycle:<n>, k4, ladder:<n>.
Multigraph builtin_graph(const std::string& name);
bool is_builtin_graph_name(const std::string& name);

Multigraph load_graph_file(const std::string& path);

}  // namespace flowpotts
