#include "ersketch/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "ersketch/errors.hpp"

namespace ersketch::oracle {

void check_cap(std::size_t n) {
  if (n > kOracleCap) {
    throw CapabilityError("dense oracle limited to n <= " + std::to_string(kOracleCap) + " (got " +
                          std::to_string(n) + ")");
  }
}

Eigen::MatrixXd laplacian(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  check_cap(g.vertex_count());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    lap(u, u) = g.degree(u);
    const auto nbrs = g.neighbors(u);
    const auto ws = g.weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) lap(u, nbrs[k]) = -ws[k];
  }
  return lap;
}

Eigen::MatrixXd normalized_laplacian(const WeightedGraph& g) {
  Eigen::MatrixXd lap = laplacian(g);
  Eigen::VectorXd s(lap.rows());
  for (Vertex u = 0; u < g.vertex_count(); ++u) s(u) = 1.0 / std::sqrt(g.degree(u));
  return s.asDiagonal() * lap * s.asDiagonal();
}

Eigen::MatrixXd lazy_walk_matrix(const WeightedGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  check_cap(g.vertex_count());
  Eigen::MatrixXd x = 0.5 * Eigen::MatrixXd::Identity(n, n);
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    const auto nbrs = g.neighbors(u);
    const auto ws = g.weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) x(nbrs[k], u) += 0.5 * ws[k] / g.degree(u);
  }
  return x;
}

namespace {

void require_connected(const WeightedGraph& g) {
  if (!is_connected(g)) throw ValidationError("graph is disconnected");
}

void require_vertex(const WeightedGraph& g, Vertex u) {
  if (u >= g.vertex_count()) throw ValidationError("vertex out of range");
}

}  // namespace

ResistanceOracle::ResistanceOracle(const WeightedGraph& g) {
  require_connected(g);
  const Eigen::MatrixXd lap = laplacian(g);
  const Eigen::Index n = lap.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
  const auto& vals = eig.eigenvalues();
  const auto& vecs = eig.eigenvectors();
  const double cutoff = 1e-12 * std::max(1.0, vals.maxCoeff());
  Eigen::VectorXd inv(n);
  for (Eigen::Index i = 0; i < n; ++i) inv(i) = vals(i) > cutoff ? 1.0 / vals(i) : 0.0;
  pinv_ = vecs * inv.asDiagonal() * vecs.transpose();
}

double ResistanceOracle::operator()(Vertex u, Vertex v) const {
  const auto n = static_cast<Vertex>(pinv_.rows());
  if (u >= n || v >= n) throw ValidationError("vertex out of range");
  return pinv_(u, u) + pinv_(v, v) - 2.0 * pinv_(u, v);
}

double exact_effective_resistance(const WeightedGraph& g, Vertex u, Vertex v) {
  require_vertex(g, u);
  require_vertex(g, v);
  return ResistanceOracle(g)(u, v);
}

double exact_effective_resistance_solve(const WeightedGraph& g, Vertex u, Vertex v) {
  require_vertex(g, u);
  require_vertex(g, v);
  require_connected(g);
  if (u == v) return 0.0;
  const Eigen::MatrixXd lap = laplacian(g);
  const Eigen::Index n = lap.rows();
  // Ground vertex 0: the reduced Laplacian is nonsingular and potentials are
  // unique up to the constant we fixed.
  const Eigen::MatrixXd reduced = lap.bottomRightCorner(n - 1, n - 1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n - 1);
  if (u != 0) b(u - 1) += 1.0;
  if (v != 0) b(v - 1) -= 1.0;
  const Eigen::VectorXd x = reduced.ldlt().solve(b);
  const double xu = u == 0 ? 0.0 : x(u - 1);
  const double xv = v == 0 ? 0.0 : x(v - 1);
  return xu - xv;
}

std::size_t sigma_truncation_length(const WeightedGraph& g, double nu2, double tol) {
  if (!(nu2 > 0.0)) throw ValidationError("truncation length needs nu2 > 0");
  double d_min = g.degree(0);
  double d_max = g.degree(0);
  for (double d : g.degrees()) {
    d_min = std::min(d_min, d);
    d_max = std::max(d_max, d);
  }
  const double c = static_cast<double>(g.vertex_count()) * d_max / d_min;
  const double ratio = c / (tol * (1.0 - std::exp(-nu2 / 2.0)));
  return static_cast<std::size_t>(std::max(1.0, std::ceil(2.0 / nu2 * std::log(ratio))));
}

Eigen::MatrixXd exact_sigma_matrix(const WeightedGraph& g, std::size_t t_max) {
  const Eigen::MatrixXd x = lazy_walk_matrix(g);
  const Eigen::Index n = x.rows();
  Eigen::VectorXd pi(n);
  for (Vertex u = 0; u < g.vertex_count(); ++u) pi(u) = g.degree(u) / g.total_degree();
  Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd stationary = pi * Eigen::RowVectorXd::Ones(n);
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t t = 0; t < t_max; ++t) {
    sum += power - stationary;
    power = x * power;
  }
  return 0.5 * sum;
}

Eigen::VectorXd exact_sigma(const WeightedGraph& g, Vertex u, std::size_t t_max) {
  require_vertex(g, u);
  const Eigen::MatrixXd x = lazy_walk_matrix(g);
  const Eigen::Index n = x.rows();
  Eigen::VectorXd pi(n);
  for (Vertex v = 0; v < g.vertex_count(); ++v) pi(v) = g.degree(v) / g.total_degree();
  Eigen::VectorXd p = Eigen::VectorXd::Zero(n);
  p(u) = 1.0;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  for (std::size_t t = 0; t < t_max; ++t) {
    sum += p - pi;
    p = x * p;
  }
  return 0.5 * sum;
}

std::vector<double> exact_spectrum_normalized(const WeightedGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normalized_laplacian(g),
                                                     Eigen::EigenvaluesOnly);
  const auto& vals = eig.eigenvalues();
  return {vals.data(), vals.data() + vals.size()};
}

double exact_nu2(const WeightedGraph& g) {
  if (g.vertex_count() < 2) throw ValidationError("nu2 needs at least two vertices");
  return exact_spectrum_normalized(g)[1];
}

double normalized_nu2(const Eigen::MatrixXd& lap, const Eigen::VectorXd& degrees) {
  if (lap.rows() < 2 || lap.rows() != degrees.size()) {
    throw ValidationError("normalized_nu2 needs a square matrix of size >= 2 and matching degrees");
  }
  check_cap(static_cast<std::size_t>(lap.rows()));
  const Eigen::VectorXd s = degrees.cwiseSqrt().cwiseInverse();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s.asDiagonal() * lap * s.asDiagonal(),
                                                     Eigen::EigenvaluesOnly);
  return eig.eigenvalues()(1);
}

Eigen::VectorXd exact_walk_distribution(const WeightedGraph& g, Vertex u, std::size_t t) {
  require_vertex(g, u);
  const Eigen::MatrixXd x = lazy_walk_matrix(g);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(x.rows());
  p(u) = 1.0;
  for (std::size_t k = 0; k < t; ++k) p = x * p;
  return p;
}

LogAbsDet log_abs_det(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ValidationError("determinant of a non-square matrix");
  check_cap(static_cast<std::size_t>(m.rows()));
  if (m.rows() == 0) return {0.0, 1};
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const Eigen::MatrixXd& packed = lu.matrixLU();
  LogAbsDet out;
  out.sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const double d = packed(i, i);
    if (d == 0.0) return {0.0, 0};
    if (d < 0.0) out.sign = -out.sign;
    out.log_abs += std::log(std::abs(d));
  }
  return out;
}

double matrix_tree_log_count(const WeightedGraph& g, Vertex removed) {
  require_vertex(g, removed);
  if (!is_connected(g)) throw ValidationError("graph is disconnected: it has no spanning trees");
  const Eigen::MatrixXd lap = laplacian(g);
  const Eigen::Index n = lap.rows();
  if (n == 1) return 0.0;
  std::vector<Vertex> rest;
  rest.reserve(static_cast<std::size_t>(n - 1));
  for (Vertex u = 0; u < n; ++u) {
    if (u != removed) rest.push_back(u);
  }
  const auto det = log_abs_det(principal_submatrix(lap, VertexSet(std::move(rest))));
  if (det.sign <= 0) throw ValidationError("reduced Laplacian is not positive definite");
  return det.log_abs;
}

double log_tree_count_from_spectrum(const WeightedGraph& g) {
  if (!is_connected(g)) throw ValidationError("graph is disconnected: it has no spanning trees");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(laplacian(g), Eigen::EigenvaluesOnly);
  const auto& vals = eig.eigenvalues();
  double sum = 0.0;
  for (Eigen::Index i = 1; i < vals.size(); ++i) sum += std::log(vals(i));
  return sum - std::log(static_cast<double>(g.vertex_count()));
}

Eigen::MatrixXd principal_submatrix(const Eigen::MatrixXd& m, const VertexSet& rows) {
  const auto k = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd out(k, k);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) out(i, j) = m(rows[i], rows[j]);
  }
  return out;
}

Eigen::MatrixXd dense_schur_complement(const Eigen::MatrixXd& m, const VertexSet& keep) {
  const auto n = static_cast<std::size_t>(m.rows());
  if (keep.empty() || keep.ids().back() >= n) throw ValidationError("invalid keep set");
  const VertexSet drop = keep.complement(n);
  const Eigen::MatrixXd c = principal_submatrix(m, keep);
  if (drop.empty()) return c;
  Eigen::MatrixXd f = principal_submatrix(m, drop);
  Eigen::MatrixXd b(static_cast<Eigen::Index>(drop.size()), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < drop.size(); ++i) {
    for (std::size_t j = 0; j < keep.size(); ++j) {
      b(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(drop[i], keep[j]);
    }
  }
  return c - b.transpose() * f.partialPivLu().solve(b);
}

}  // namespace ersketch::oracle
