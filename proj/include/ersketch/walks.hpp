#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "ersketch/alias.hpp"
#include "ersketch/graph.hpp"
#include "ersketch/random.hpp"

namespace ersketch {

/// Lazy walk operator X = I/2 + A D^{-1}/2. Laziness is not configurable.
struct LazyWalkConfig {
  static constexpr double laziness = 0.5;
  std::size_t max_length = 0;
};

/// A Markov chain we can walk on: non-lazy transitions plus the degrees that
/// define its stationary distribution.
template <class M>
concept WalkModel = requires(const M& m, Vertex u, CounterRng& rng) {
  { m.vertex_count() } -> std::convertible_to<std::size_t>;
  { m.degree(u) } -> std::convertible_to<double>;
  { m.step(u, rng) } -> std::same_as<Vertex>;
};

/// Explicit graph plus its alias sampler. Holds references; both must outlive it.
class GraphWalk {
 public:
  GraphWalk(const WeightedGraph& graph, const AliasSampler& sampler)
      : graph_(&graph), sampler_(&sampler) {}

  std::size_t vertex_count() const noexcept { return graph_->vertex_count(); }
  double degree(Vertex u) const noexcept { return graph_->degree(u); }
  /// Max/min edge weight ratio of the walked graph.
  double weight_ratio() const noexcept { return graph_->weight_ratio(); }

  template <UniformSource Rng>
  Vertex step(Vertex u, Rng& rng) const {
    return sampler_->sample_neighbor(u, rng);
  }

 private:
  const WeightedGraph* graph_;
  const AliasSampler* sampler_;
};

/// Walks on the Schur complement that eliminates one extra vertex x, without
/// materializing the clique x leaves behind.
///
/// The base graph G[V \ {x}] may contain isolated vertices; `eliminated`
/// holds d'_u = w_ux. Eliminating x adds edge weight d'_u d'_v / d_x, so a
/// vertex gains degree d''_u = d'_u - d'_u^2 / d_x. A non-lazy step leaves
/// through a base edge with probability d_u / (d_u + d''_u), otherwise it
/// picks v != u proportional to d'_v (rejection on the global d' table).
class SchurWalker {
 public:
  /// Stepping from u retries a clique draw on average 1 / (1 - d'_u / d_x)
  /// times; vertices above this share make walking impractical.
  static constexpr double kMaxEliminatedShare = 0.999;

  SchurWalker(std::size_t n, std::span<const Edge> base_edges, std::vector<double> eliminated);
  // The sampler points into base_; moves keep vector buffers, copies would not.
  SchurWalker(const SchurWalker&) = delete;
  SchurWalker& operator=(const SchurWalker&) = delete;
  SchurWalker(SchurWalker&&) = default;
  SchurWalker& operator=(SchurWalker&&) = default;

  std::size_t vertex_count() const noexcept { return n_; }
  double degree(Vertex u) const noexcept { return base_degree(u) + clique_degree_[u]; }
  double base_degree(Vertex u) const noexcept { return base_.degrees()[u]; }
  double eliminated_weight(Vertex u) const noexcept { return eliminated_[u]; }
  double clique_degree(Vertex u) const noexcept { return clique_degree_[u]; }
  double eliminated_degree() const noexcept { return eliminated_total_; }
  /// Max/min edge weight ratio of the implied Schur complement.
  double weight_ratio() const noexcept { return weight_ratio_; }
  AdjacencyView base() const noexcept { return base_.view(); }

  /// Explicit Schur complement edges (base plus clique), u < v, merged.
  std::vector<Edge> explicit_edges() const;

  template <UniformSource Rng>
  Vertex step(Vertex u, Rng& rng) const {
    const double base = base_degree(u);
    if (rng.uniform01() * (base + clique_degree_[u]) < base) {
      return sampler_.sample_neighbor(u, rng);
    }
    return clique_step(u, rng);
  }

  template <UniformSource Rng>
  Vertex clique_step(Vertex u, Rng& rng) const {
    while (true) {
      const Vertex v = sample_alias(clique_table_, rng);
      if (v != u) return v;
    }
  }

 private:
  std::size_t n_;
  CsrAdjacency base_;
  AliasSampler sampler_;
  std::vector<double> eliminated_;
  std::vector<double> clique_degree_;
  double eliminated_total_ = 0.0;
  double weight_ratio_ = 1.0;
  AliasTable<double> clique_table_;
};

/// One lazy step: stay with probability 1/2, else move along an edge.
template <UniformSource Rng>
Vertex lazy_step(const AliasSampler& sampler, Vertex u, Rng& rng) {
  if (rng.uniform01() < LazyWalkConfig::laziness) return u;
  return sampler.sample_neighbor(u, rng);
}

template <UniformSource Rng>
Vertex lazy_step(const WeightedGraph&, const AliasSampler& sampler, Vertex u, Rng& rng) {
  return lazy_step(sampler, u, rng);
}

template <UniformSource Rng>
Vertex schur_lazy_step(const SchurWalker& walker, Vertex u, Rng& rng) {
  if (rng.uniform01() < LazyWalkConfig::laziness) return u;
  return walker.step(u, rng);
}

/// Endpoint of an l-step lazy walk from u. The number of moving steps of a
/// lazy walk is Binomial(l, 1/2), so we draw that count first and then take
/// exactly that many non-lazy steps; the endpoint law is unchanged.
template <WalkModel M>
Vertex walk_endpoint(const M& model, Vertex u, std::size_t length, CounterRng& rng) {
  auto moves = rng.fair_coin_count(length);
  while (moves-- > 0) u = model.step(u, rng);
  return u;
}

inline Vertex walk_endpoint(const WeightedGraph& g, const AliasSampler& sampler, Vertex u,
                            std::size_t length, CounterRng& rng) {
  return walk_endpoint(GraphWalk(g, sampler), u, length, rng);
}

/// pi_u = d_u / sum_v d_v. Throws on disconnected graphs.
std::vector<double> stationary_distribution(const WeightedGraph& g);

template <WalkModel M>
std::vector<double> stationary_distribution_of(const M& model) {
  std::vector<double> pi(model.vertex_count());
  double total = 0.0;
  for (Vertex u = 0; u < pi.size(); ++u) total += (pi[u] = model.degree(u));
  for (double& p : pi) p /= total;
  return pi;
}

}  // namespace ersketch
