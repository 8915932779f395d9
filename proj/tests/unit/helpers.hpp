#pragma once

#include <cmath>
#include <vector>

#include "ersketch/ddmatrix.hpp"
#include "ersketch/generators.hpp"
#include "ersketch/graph.hpp"
#include "ersketch/random.hpp"

namespace test {

using ersketch::Edge;
using ersketch::Vertex;
using ersketch::WeightedGraph;

inline WeightedGraph complete(std::size_t n, double w = 1.0) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) edges.push_back({u, v, w});
  return ersketch::build_graph(n, edges);
}

inline WeightedGraph path(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u + 1 < n; ++u) edges.push_back({u, u + 1, 1.0});
  return ersketch::build_graph(n, edges);
}

inline WeightedGraph cycle(std::size_t n) {
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) edges.push_back({u, static_cast<Vertex>((u + 1) % n), 1.0});
  return ersketch::build_graph(n, edges);
}

inline WeightedGraph single_edge(double w = 1.0) {
  const Edge e{0, 1, w};
  return ersketch::build_graph(2, std::span<const Edge>(&e, 1));
}

/// Connected graph: random spanning tree plus extra random edges, weights
/// uniform in [lo, hi].
inline WeightedGraph random_connected(std::size_t n, double extra_p, std::uint64_t seed,
                                      double lo = 1.0, double hi = 10.0) {
  auto rng = ersketch::CounterRng::stream(seed, {77});
  std::vector<Edge> edges;
  std::vector<std::vector<bool>> used(n, std::vector<bool>(n, false));
  auto weight = [&] { return lo + (hi - lo) * rng.uniform01(); };
  for (Vertex v = 1; v < n; ++v) {
    const auto u = static_cast<Vertex>(rng.below(v));
    edges.push_back({u, v, weight()});
    used[u][v] = used[v][u] = true;
  }
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (!used[u][v] && rng.uniform01() < extra_p) edges.push_back({u, v, weight()});
  return ersketch::build_graph(n, edges);
}

inline WeightedGraph random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  ersketch::GraphGeneratorSpec spec;
  spec.kind = ersketch::GraphKind::RandomRegular;
  spec.n = n;
  spec.degree = d;
  spec.seed = seed;
  return ersketch::generate(spec);
}

/// Random (1+alpha)-DD matrix: off-diagonal magnitudes in [0.5, 1.5] with
/// density p, diagonal (1+alpha) times the row sum plus `extra` (tight at 0).
inline ersketch::DDMatrix random_dd(std::size_t n, double alpha, double p, std::uint64_t seed,
                                    double extra = 0.0) {
  auto rng = ersketch::CounterRng::stream(seed, {91});
  std::vector<Edge> off;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v)
      if (rng.uniform01() < p) off.push_back({u, v, 0.5 + rng.uniform01()});
  std::vector<double> sums(n, 0.0);
  for (const auto& e : off) {
    sums[e.u] += e.w;
    sums[e.v] += e.w;
  }
  std::vector<double> diag(n);
  for (Vertex u = 0; u < n; ++u) diag[u] = (1.0 + alpha) * sums[u] + extra + (sums[u] == 0.0);
  return ersketch::DDMatrix(std::move(diag), std::move(off));
}

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace test
