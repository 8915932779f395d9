#include <cmath>
#include <string>
#include <vector>

#include "ersketch/errors.hpp"
#include "ersketch/random.hpp"
#include "ersketch/sketch.hpp"

namespace ersketch {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void project_out(std::vector<double>& x, const std::vector<double>& unit) {
  const double c = dot(x, unit);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] -= c * unit[i];
}

}  // namespace

SpectralGapEstimate estimate_spectral_gap_detailed(const WeightedGraph& g, double tol,
                                                   std::size_t max_iterations) {
  if (!(tol > 0.0 && tol < 1.0)) throw ValidationError("spectral gap tolerance must lie in (0, 1)");
  if (!is_connected(g)) throw ValidationError("spectral gap needs a connected graph");
  const std::size_t n = g.vertex_count();

  std::vector<double> top(n);
  std::vector<double> inv_sqrt_degree(n);
  for (Vertex u = 0; u < n; ++u) {
    top[u] = std::sqrt(g.degree(u) / g.total_degree());
    inv_sqrt_degree[u] = 1.0 / std::sqrt(g.degree(u));
  }

  // B = I - N/2 = I/2 + D^{-1/2} A D^{-1/2} / 2 is PSD with top eigenpair
  // (1, D^{1/2} 1); on the complement its largest eigenvalue is 1 - nu2/2.
  auto apply = [&](const std::vector<double>& x, std::vector<double>& y) {
    for (Vertex u = 0; u < n; ++u) {
      double acc = 0.0;
      const auto nbrs = g.neighbors(u);
      const auto ws = g.weights(u);
      for (std::size_t k = 0; k < nbrs.size(); ++k) acc += ws[k] * inv_sqrt_degree[nbrs[k]] * x[nbrs[k]];
      y[u] = 0.5 * x[u] + 0.5 * inv_sqrt_degree[u] * acc;
    }
  };

  CounterRng rng(0x5eed5eed5eedULL);
  std::vector<double> x(n);
  for (double& xi : x) xi = rng.uniform01() - 0.5;
  project_out(x, top);
  double norm = std::sqrt(dot(x, x));
  if (norm == 0.0) throw ConvergenceError("spectral gap: degenerate start vector");
  for (double& xi : x) xi /= norm;

  constexpr std::size_t kWindow = 100;
  std::vector<double> y(n);
  std::vector<double> history;
  history.reserve(1024);
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    apply(x, y);
    const double rayleigh = dot(x, y);
    const double nu2 = 2.0 * (1.0 - rayleigh);
    history.push_back(nu2);
    project_out(y, top);
    norm = std::sqrt(dot(y, y));
    if (norm == 0.0) {
      // Complement subspace is all eigenvalue 0 of B (nu2 = 2 everywhere).
      return {2.0 * (1.0 - tol / 2.0), 2.0, it};
    }
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / norm;
    if (history.size() > kWindow) {
      const double change = std::abs(history[history.size() - 1 - kWindow] - nu2);
      if (change <= 1e-4 * tol * std::abs(nu2)) {
        const double clipped = std::min(2.0, std::max(nu2, 0.0));
        return {clipped * (1.0 - tol / 2.0), clipped, it};
      }
    }
  }
  throw ConvergenceError("spectral gap estimate did not converge within " +
                         std::to_string(max_iterations) + " iterations (last nu2 " +
                         std::to_string(history.empty() ? 0.0 : history.back()) + ")");
}

}  // namespace ersketch
