#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ersketch/ddmatrix.hpp"
#include "ersketch/graph.hpp"
#include "ersketch/random.hpp"
#include "ersketch/sketch.hpp"

namespace ersketch {

/// Sample count and accuracies for one determinant-preserving sparsification
/// of an n-vertex graph at error delta.
struct SparsifyParams {
  double delta = 0.0;
  std::size_t samples = 0;   // s = ceil(n^{1.5} / delta)
  double epsilon_r = 0.0;    // n^{-1/4} delta^{1/2}
  double reweight = 1.0;     // exp(n^2 / (2 (n - 1) s))

  static SparsifyParams for_size(std::size_t n, double delta);
};

using ResistanceFn = std::function<double(Vertex, Vertex)>;

/// Draw `samples` edges i.i.d. with p_e proportional to w_e R(e), give each
/// draw weight w_e / (s p_e) times `reweight`, and merge repeats.
WeightedGraph det_sparsify(const WeightedGraph& g, const ResistanceFn& reff,
                           const SparsifyParams& params, CounterRng& rng);

/// Log of det(L) with row and column 0 removed, by dense LU.
double exact_log_det_plus(const WeightedGraph& g);

struct DeterminantConfig {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t base_case_cap = 64;
  double alpha = 1.0;
  /// delta per sparsification = delta / (c_levels * planned depth).
  double c_levels = 1.0;
  /// Below this estimated nu2 the input is treated as a non-expander.
  double nu2_floor = 0.01;
  bool abort_below_floor = false;
  double spectral_tolerance = 0.05;
  double c_t0 = kDefaultCt0;
  double c_s = kDefaultCs;
};

enum class Branch { Root, Left, Right, Base, Dd };
std::string to_string(Branch b);

struct TraceEntry {
  std::size_t level = 0;
  Branch branch = Branch::Root;
  std::size_t n = 0;           // size of the graph (or block) handled
  std::size_t samples = 0;     // sparsifier samples, 0 when exact
  double epsilon = 0.0;        // resistance accuracy used, 0 when exact
  double delta = 0.0;          // error allocated to this step
  double nu2 = 0.0;            // spectral gap used, 0 when not needed
  double log_value = 0.0;      // contribution (left / base) in log domain
};

struct LogDetEstimate {
  double log_value = 0.0;
  double delta_spent = 0.0;    // sum of per-step allocations
  double delta_per_level = 0.0;
  std::size_t planned_depth = 0;
  std::size_t max_level = 0;
  std::vector<TraceEntry> trace;
  std::vector<std::string> warnings;
};

/// Planned number of sparsifying levels: ceil(log(n / cap) / log(4/3)), at least 1.
std::size_t planned_depth(std::size_t n, std::size_t cap);

/// Estimate log det+(L_G) (log weighted spanning-tree count). `nu2` is
/// estimated by power iteration when absent.
LogDetEstimate det_approx(const WeightedGraph& g, double delta, const DeterminantConfig& config,
                          std::optional<double> nu2 = std::nullopt);

/// Estimate log det(M) for a (1+alpha)-DD matrix with alpha > 0.
LogDetEstimate dd_det_approx(const DDMatrix& m, double delta, const DeterminantConfig& config);

}  // namespace ersketch
