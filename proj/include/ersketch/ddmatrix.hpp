#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ersketch/graph.hpp"
#include "ersketch/random.hpp"
#include "ersketch/sketch.hpp"

namespace ersketch {

struct MatrixEntry {
  Vertex row = 0;
  Vertex col = 0;
  double value = 0.0;
};

/// Symmetric matrix with positive diagonal and non-positive off-diagonals.
/// Off-diagonals are stored as edges u < v with w = |M_uv|.
class DDMatrix {
 public:
  DDMatrix() = default;
  /// Symmetric entries may be given once or twice (then they must agree).
  /// Zero off-diagonals are dropped.
  DDMatrix(std::size_t n, std::span<const MatrixEntry> entries);
  DDMatrix(std::vector<double> diagonal, std::vector<Edge> off_diagonal);

  std::size_t size() const noexcept { return diagonal_.size(); }
  double diagonal(Vertex u) const noexcept { return diagonal_[u]; }
  std::span<const double> diagonals() const noexcept { return diagonal_; }
  /// |M_uv| for u < v.
  std::span<const Edge> off_diagonal() const noexcept { return off_; }
  /// sum_{v != u} |M_uv|.
  double off_sum(Vertex u) const noexcept { return off_sum_[u]; }
  /// M_uu - off_sum(u).
  double slack(Vertex u) const noexcept { return diagonal_[u] - off_sum_[u]; }
  bool is_diagonal() const noexcept { return off_.empty(); }

  /// Largest alpha with M_uu >= (1 + alpha) off_sum(u) for all u; +inf when
  /// there are no off-diagonals. May be negative.
  double alpha() const noexcept { return alpha_; }
  /// Row attaining alpha(), if any row has off-diagonal mass.
  std::optional<Vertex> tightest_row() const noexcept { return tightest_; }

  Eigen::MatrixXd to_dense() const;

 private:
  void finish();

  std::vector<double> diagonal_;
  std::vector<Edge> off_;
  std::vector<double> off_sum_;
  double alpha_ = 0.0;
  std::optional<Vertex> tightest_;
};

/// Row-wise M_uu >= (1 + alpha) sum |M_uv|, with slack 1e-12 M_uu.
bool validate_dd(const DDMatrix& m, double alpha);

/// Dense entry point: rejects positive off-diagonals and asymmetry.
bool validate_dd(const Eigen::MatrixXd& m, double alpha);
DDMatrix dd_from_dense(const Eigen::MatrixXd& m);

/// Principal submatrix L[S, S] of a graph Laplacian as a DD matrix.
DDMatrix laplacian_block(const WeightedGraph& g, const VertexSet& rows);

struct LaplacianCompletion {
  WeightedGraph graph;  // n + 1 vertices
  Vertex x = 0;         // the added vertex, always n
  std::vector<double> slack;
};

/// Add vertex x with w_ux = M_uu - sum |M_uv| so every row sums to zero.
LaplacianCompletion complete_to_laplacian(const DDMatrix& m);

/// The walker over the implicit Sc(L_M, V \ {x}).
SchurWalker dd_schur_walker(const DDMatrix& m);

/// Lower bound on nu2 of the Schur complement: alpha / (1 + alpha), 1 for
/// diagonal matrices.
double dd_nu2_lower_bound(const DDMatrix& m);

/// Sketch of effective resistances in the completion between original
/// vertices, from walks on the implicit Schur complement.
SigmaSketch dd_effective_resistance_sketch(const DDMatrix& m, double epsilon,
                                           const SketchOptions& options,
                                           double c_t0 = kDefaultCt0, double c_s = kDefaultCs);

/// Every u in S has sum_{v not in S} w_uv >= alpha sum_{v in S} w_uv.
bool is_dd_subset(const WeightedGraph& g, const VertexSet& subset, double alpha);

/// Random DD subset of size >= n/8 where attainable. Samples each vertex with
/// probability 1/(2(1+alpha)), drops all violators, retries; after
/// kDdSubsetAttempts falls back to a greedy maximal valid set.
inline constexpr int kDdSubsetAttempts = 64;
VertexSet find_dd_subset(const WeightedGraph& g, double alpha, CounterRng& rng);

/// Text format: first line n, then `u v value` lines; `#` comments.
DDMatrix read_dd_matrix(std::istream& in);
void write_dd_matrix(std::ostream& out, const DDMatrix& m);

}  // namespace ersketch
