#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace ersketch {

using Vertex = std::uint32_t;

struct Edge {
  Vertex u = 0;
  Vertex v = 0;
  double w = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Read-only CSR view over an adjacency structure. Isolated rows allowed.
struct AdjacencyView {
  std::span<const std::size_t> offsets;  // size n + 1
  std::span<const Vertex> targets;
  std::span<const double> weights;

  std::size_t vertex_count() const noexcept { return offsets.empty() ? 0 : offsets.size() - 1; }
  std::size_t row_begin(Vertex u) const noexcept { return offsets[u]; }
  std::size_t row_size(Vertex u) const noexcept { return offsets[u + 1] - offsets[u]; }
};

/// Owning CSR adjacency built from an undirected edge list. Parallel edges are
/// merged by weight addition and rows are sorted by neighbor id. This is the
/// unchecked building block; `WeightedGraph` adds the graph invariants.
class CsrAdjacency {
 public:
  CsrAdjacency() = default;
  CsrAdjacency(std::size_t n, std::span<const Edge> edges);

  AdjacencyView view() const noexcept { return {offsets_, targets_, weights_}; }
  std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::span<const double> degrees() const noexcept { return degrees_; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> targets_;
  std::vector<double> weights_;
  std::vector<double> degrees_;
};

/// Symmetric, positively weighted, simple undirected graph with no isolated
/// vertices. Immutable once built.
class WeightedGraph {
 public:
  WeightedGraph() = default;

  std::size_t vertex_count() const noexcept { return adjacency_.vertex_count(); }
  std::size_t edge_count() const noexcept { return edge_count_; }

  std::span<const Vertex> neighbors(Vertex u) const noexcept;
  std::span<const double> weights(Vertex u) const noexcept;
  double degree(Vertex u) const noexcept { return adjacency_.degrees()[u]; }
  std::span<const double> degrees() const noexcept { return adjacency_.degrees(); }
  double total_degree() const noexcept { return total_degree_; }

  double min_weight() const noexcept { return w_min_; }
  double max_weight() const noexcept { return w_max_; }
  /// W = w_max / w_min (weights normalized so the lightest edge is 1).
  double weight_ratio() const noexcept { return w_max_ / w_min_; }

  /// Weight of edge (u, v), 0 when absent.
  double edge_weight(Vertex u, Vertex v) const noexcept;

  /// Undirected edges with u < v in ascending (u, v) order.
  std::vector<Edge> edges() const;

  AdjacencyView view() const noexcept { return adjacency_.view(); }

  friend WeightedGraph build_graph(std::size_t n, std::span<const Edge> edges);

 private:
  CsrAdjacency adjacency_;
  std::size_t edge_count_ = 0;
  double total_degree_ = 0.0;
  double w_min_ = 0.0;
  double w_max_ = 0.0;
};

/// Build a graph on vertices 0..n-1. Rejects self-loops, non-positive or
/// non-finite weights, out-of-range ids and isolated vertices.
WeightedGraph build_graph(std::size_t n, std::span<const Edge> edges);

/// As above with n = 1 + largest id mentioned.
WeightedGraph build_graph(std::span<const Edge> edges);

bool is_connected(const WeightedGraph& g);

/// Ascending, duplicate-free set of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  /// Sorts the ids; rejects duplicates.
  explicit VertexSet(std::vector<Vertex> ids);

  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  std::span<const Vertex> ids() const noexcept { return ids_; }
  Vertex operator[](std::size_t i) const noexcept { return ids_[i]; }
  bool contains(Vertex u) const noexcept;

  /// Vertices of 0..n-1 not in this set.
  VertexSet complement(std::size_t n) const;
  /// Membership mask of length n.
  std::vector<bool> mask(std::size_t n) const;

  auto begin() const noexcept { return ids_.begin(); }
  auto end() const noexcept { return ids_.end(); }

  friend bool operator==(const VertexSet&, const VertexSet&) = default;

 private:
  std::vector<Vertex> ids_;
};

/// Eliminate x: neighbors u, v of x gain weight w_ux * w_vx / d_x. The result
/// lives on V \ {x}; ids above x shift down by one.
WeightedGraph schur_complement_eliminate_vertex(const WeightedGraph& g, Vertex x);

/// Schur complement onto `keep`, eliminating V \ keep one vertex at a time in
/// ascending id order. Vertex i of the result is keep[i].
WeightedGraph schur_complement(const WeightedGraph& g, const VertexSet& keep);

/// Same, with an explicit elimination order (a permutation of V \ keep).
WeightedGraph schur_complement(const WeightedGraph& g, const VertexSet& keep,
                               std::span<const Vertex> elimination_order);

/// Edge-list text format: `u v w` per line, `#` starts a comment.
std::vector<Edge> read_edge_list(std::istream& in);
WeightedGraph read_graph(std::istream& in);
void write_edge_list(std::ostream& out, const WeightedGraph& g);

}  // namespace ersketch
