#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ersketch/graph.hpp"
#include "ersketch/walks.hpp"

namespace ersketch {

struct SketchParams {
  double epsilon = 0.0;
  double nu2 = 0.0;
  std::size_t t0 = 0;     // walk lengths 0 .. t0-1
  std::size_t walks = 0;  // s: walks per (vertex, length)
  double threshold = 0.0; // entries with |value| <= threshold are dropped
  double c_t0 = 2.0;
  double c_s = 4.0;
};

inline constexpr double kDefaultCt0 = 2.0;
inline constexpr double kDefaultCs = 4.0;

/// t0 = ceil(c_t0 / nu2 * ln(n W / (eps nu2))), s = ceil(c_s / eps^2 * t0 * ln n),
/// threshold = eps / 4. Both counts are floored at 1.
SketchParams compute_params(std::size_t n, double weight_ratio, double epsilon, double nu2,
                            double c_t0 = kDefaultCt0, double c_s = kDefaultCs);

using SparseVector = std::unordered_map<Vertex, double>;

/// Per-vertex sparse sigma vectors plus what is needed to answer queries.
class SigmaSketch {
 public:
  SigmaSketch() = default;
  SigmaSketch(SketchParams params, std::uint64_t seed, std::vector<double> degrees,
              std::vector<SparseVector> sigma);

  std::size_t vertex_count() const noexcept { return degrees_.size(); }
  const SketchParams& params() const noexcept { return params_; }
  std::uint64_t seed() const noexcept { return seed_; }
  double degree(Vertex u) const noexcept { return degrees_[u]; }
  std::span<const double> degrees() const noexcept { return degrees_; }

  /// sigma_u[v], 0 when not stored.
  double value(Vertex u, Vertex v) const noexcept {
    const auto& row = sigma_[u];
    const auto it = row.find(v);
    return it == row.end() ? 0.0 : it->second;
  }
  std::size_t entry_count(Vertex u) const noexcept { return sigma_[u].size(); }
  double mean_entry_count() const noexcept;
  std::size_t max_entry_count() const noexcept;
  const SparseVector& row(Vertex u) const noexcept { return sigma_[u]; }
  /// Row entries sorted by vertex id.
  std::vector<std::pair<Vertex, double>> sorted_row(Vertex u) const;

  friend bool operator==(const SigmaSketch&, const SigmaSketch&);

 private:
  SketchParams params_;
  std::uint64_t seed_ = 0;
  std::vector<double> degrees_;
  std::vector<SparseVector> sigma_;
};

struct SketchOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

/// S_u / s: visit frequencies summed over lengths 0..t0-1, as a dense vector.
/// This is the raw accumulator before stationary subtraction and dropping.
template <WalkModel M>
std::vector<double> sample_visit_sums(const M& model, Vertex u, const SketchParams& params,
                                      std::uint64_t seed);

/// Sketch every vertex of a walk model. Output is independent of `workers`.
template <WalkModel M>
SigmaSketch build_sketch(const M& model, const SketchParams& params, const SketchOptions& options);

/// Connected-graph entry point: builds the alias sampler and sketches G.
SigmaSketch build_sketch(const WeightedGraph& g, const SketchParams& params,
                         const SketchOptions& options);

/// Effective resistance estimate from the four stored entries, clamped below
/// at 1/2 (1/d_u + 1/d_v). Returns 0 for u == v.
double query(const SigmaSketch& sketch, Vertex u, Vertex v);

/// The same four-term estimate on dense sigma vectors, without clamping.
double four_term_resistance(std::span<const double> sigma_u, std::span<const double> sigma_v,
                            double degree_u, double degree_v, Vertex u, Vertex v);

using VertexPair = std::pair<Vertex, Vertex>;

struct BatchQueryResult {
  std::vector<double> values;  // NaN where the pair was rejected
  std::vector<std::pair<std::size_t, std::string>> errors;
};

BatchQueryResult query_batch(const SigmaSketch& sketch, std::span<const VertexPair> pairs);

struct SpectralGapEstimate {
  double value = 0.0;      // conservative (shrunk) estimate
  double raw = 0.0;        // 2 (1 - Rayleigh quotient)
  std::size_t iterations = 0;
};

/// nu2 of D^{-1/2} L D^{-1/2} via power iteration on I - N/2 with the known
/// top eigenvector D^{1/2} 1 projected out. The returned value is shrunk by
/// tol/2 so that it errs low. Throws ConvergenceError at the iteration cap.
SpectralGapEstimate estimate_spectral_gap_detailed(const WeightedGraph& g, double tol,
                                                   std::size_t max_iterations = 200000);

inline double estimate_spectral_gap(const WeightedGraph& g, double tol) {
  return estimate_spectral_gap_detailed(g, tol).value;
}

}  // namespace ersketch
