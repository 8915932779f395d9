#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "ersketch/graph.hpp"

namespace ersketch::oracle {

/// Dense paths refuse graphs above this size.
inline constexpr std::size_t kOracleCap = 2048;

/// Throws CapabilityError when n exceeds kOracleCap.
void check_cap(std::size_t n);

Eigen::MatrixXd laplacian(const WeightedGraph& g);
/// N = D^{-1/2} L D^{-1/2}.
Eigen::MatrixXd normalized_laplacian(const WeightedGraph& g);
/// X = I/2 + A D^{-1}/2 (column stochastic).
Eigen::MatrixXd lazy_walk_matrix(const WeightedGraph& g);

/// Effective resistances from a dense pseudoinverse computed once.
class ResistanceOracle {
 public:
  explicit ResistanceOracle(const WeightedGraph& g);
  double operator()(Vertex u, Vertex v) const;
  const Eigen::MatrixXd& pseudoinverse() const noexcept { return pinv_; }

 private:
  Eigen::MatrixXd pinv_;
};

/// R(u, v) through the eigendecomposition pseudoinverse.
double exact_effective_resistance(const WeightedGraph& g, Vertex u, Vertex v);
/// R(u, v) by solving L x = 1_u - 1_v with vertex 0 grounded.
double exact_effective_resistance_solve(const WeightedGraph& g, Vertex u, Vertex v);

/// Smallest T with sum_{t >= T} e^{-t nu2 / 2} n d_max / d_min <= tol.
std::size_t sigma_truncation_length(const WeightedGraph& g, double nu2, double tol = 1e-12);

/// sigma_u = 1/2 sum_{t < t_max} (X^t 1_u - pi).
Eigen::VectorXd exact_sigma(const WeightedGraph& g, Vertex u, std::size_t t_max);
/// Column u is sigma_u.
Eigen::MatrixXd exact_sigma_matrix(const WeightedGraph& g, std::size_t t_max);

/// Spectrum of N, ascending.
std::vector<double> exact_spectrum_normalized(const WeightedGraph& g);
/// Second smallest eigenvalue of N.
double exact_nu2(const WeightedGraph& g);
/// Second smallest eigenvalue of D^{-1/2} L D^{-1/2} for an arbitrary
/// Laplacian-like matrix and positive degree vector.
double normalized_nu2(const Eigen::MatrixXd& lap, const Eigen::VectorXd& degrees);

/// X^t 1_u.
Eigen::VectorXd exact_walk_distribution(const WeightedGraph& g, Vertex u, std::size_t t);

struct LogAbsDet {
  double log_abs = 0.0;
  int sign = 0;  // 0 for singular
};

/// log |det M| by LU with partial pivoting.
LogAbsDet log_abs_det(const Eigen::MatrixXd& m);

/// Log weighted spanning-tree count: log det of L with row and column
/// `removed` deleted. Throws ValidationError on disconnected graphs.
double matrix_tree_log_count(const WeightedGraph& g, Vertex removed = 0);
/// sum log lambda_i(L) over nonzero eigenvalues minus log n.
double log_tree_count_from_spectrum(const WeightedGraph& g);

/// C - B^T F^{-1} B for the index set `keep`, rows ordered as `keep`.
Eigen::MatrixXd dense_schur_complement(const Eigen::MatrixXd& m, const VertexSet& keep);

/// Principal submatrix on `rows`.
Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& m, const VertexSet& rows);

}  // namespace ersketch::oracle
