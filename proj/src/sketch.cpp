#include "ersketch/sketch.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "ersketch/errors.hpp"

namespace ersketch {

SketchParams compute_params(std::size_t n, double weight_ratio, double epsilon, double nu2,
                            double c_t0, double c_s) {
  if (n < 2) throw ValidationError("sketch parameters need n >= 2");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ValidationError("epsilon must lie in (0, 1]");
  if (!(nu2 > 0.0 && nu2 <= 2.0)) throw ValidationError("nu2 must lie in (0, 2]");
  if (!(weight_ratio >= 1.0) || !std::isfinite(weight_ratio)) {
    throw ValidationError("weight ratio W must be >= 1");
  }
  if (!(c_t0 > 0.0) || !(c_s > 0.0)) throw ValidationError("sketch constants must be positive");

  SketchParams p;
  p.epsilon = epsilon;
  p.nu2 = nu2;
  p.c_t0 = c_t0;
  p.c_s = c_s;
  const double nd = static_cast<double>(n);
  const double log_term = std::log(nd * weight_ratio / (epsilon * nu2));
  p.t0 = static_cast<std::size_t>(std::max(1.0, std::ceil(c_t0 / nu2 * log_term)));
  p.walks = static_cast<std::size_t>(std::max(
      1.0, std::ceil(c_s / (epsilon * epsilon) * static_cast<double>(p.t0) * std::log(nd))));
  p.threshold = epsilon / 4.0;
  return p;
}

SigmaSketch::SigmaSketch(SketchParams params, std::uint64_t seed, std::vector<double> degrees,
                         std::vector<SparseVector> sigma)
    : params_(params), seed_(seed), degrees_(std::move(degrees)), sigma_(std::move(sigma)) {
  if (degrees_.size() != sigma_.size()) {
    throw ValidationError("sketch needs one sigma row per degree");
  }
  for (std::size_t u = 0; u < sigma_.size(); ++u) {
    if (!(degrees_[u] > 0.0) || !std::isfinite(degrees_[u])) {
      throw ValidationError("sketch degree must be positive and finite");
    }
    for (const auto& [v, x] : sigma_[u]) {
      if (v >= sigma_.size()) throw ValidationError("sketch entry references a vertex out of range");
      if (!std::isfinite(x)) throw ValidationError("sketch entry is not finite");
    }
  }
}

double SigmaSketch::mean_entry_count() const noexcept {
  if (sigma_.empty()) return 0.0;
  std::size_t total = 0;
  for (const auto& row : sigma_) total += row.size();
  return static_cast<double>(total) / static_cast<double>(sigma_.size());
}

std::size_t SigmaSketch::max_entry_count() const noexcept {
  std::size_t best = 0;
  for (const auto& row : sigma_) best = std::max(best, row.size());
  return best;
}

std::vector<std::pair<Vertex, double>> SigmaSketch::sorted_row(Vertex u) const {
  std::vector<std::pair<Vertex, double>> out(sigma_[u].begin(), sigma_[u].end());
  std::sort(out.begin(), out.end());
  return out;
}

bool operator==(const SigmaSketch& a, const SigmaSketch& b) {
  const auto& pa = a.params_;
  const auto& pb = b.params_;
  return pa.epsilon == pb.epsilon && pa.nu2 == pb.nu2 && pa.t0 == pb.t0 && pa.walks == pb.walks &&
         pa.threshold == pb.threshold && a.seed_ == b.seed_ && a.degrees_ == b.degrees_ &&
         a.sigma_ == b.sigma_;
}

namespace {

// Walk counts for one source vertex. Walk (i, l) draws from its own stream
// keyed by (seed, u, i * t0 + l). Length-0 walks end at u deterministically.
//
// kLanes walks advance side by side so their dependency chains overlap; each
// lane still consumes only its own stream, so endpoints do not depend on the
// interleaving.
constexpr std::size_t kLanes = 8;

template <WalkModel M>
void accumulate_counts(const M& model, Vertex u, const SketchParams& params, std::uint64_t seed,
                       std::vector<std::uint64_t>& counts) {
  std::fill(counts.begin(), counts.end(), 0);
  counts[u] += params.walks;
  const std::size_t t0 = params.t0;
  if (t0 < 2) return;
  const std::uint64_t source_key = CounterRng::derive_key(seed, {u});

  struct Lane {
    CounterRng rng{0};
    Vertex at = 0;
    std::uint64_t left = 0;
  };
  std::array<Lane, kLanes> lanes;
  // Next walk to start is (i, l); walks run i-major, l = 1 .. t0-1.
  std::size_t i = 0;
  std::size_t l = 1;

  // Start the next walk with at least one move in `lane`; false when done.
  auto refill = [&](Lane& lane) {
    while (i < params.walks) {
      const std::uint64_t id = i * t0 + l;
      lane.rng = CounterRng(CounterRng::extend(source_key, id));
      lane.left = lane.rng.fair_coin_count(l);
      if (++l == t0) {
        l = 1;
        ++i;
      }
      lane.at = u;
      if (lane.left > 0) return true;
      ++counts[u];
    }
    return false;
  };

  std::size_t active = 0;
  for (auto& lane : lanes) {
    if (refill(lane)) ++active;
    else lane.left = 0;
  }
  while (active > 0) {
    for (auto& lane : lanes) {
      if (lane.left == 0) continue;
      lane.at = model.step(lane.at, lane.rng);
      if (--lane.left == 0) {
        ++counts[lane.at];
        if (!refill(lane)) --active;
      }
    }
  }
}

}  // namespace

template <WalkModel M>
std::vector<double> sample_visit_sums(const M& model, Vertex u, const SketchParams& params,
                                      std::uint64_t seed) {
  std::vector<std::uint64_t> counts(model.vertex_count());
  accumulate_counts(model, u, params, seed, counts);
  std::vector<double> sums(counts.size());
  const auto s = static_cast<double>(params.walks);
  for (std::size_t v = 0; v < counts.size(); ++v) sums[v] = static_cast<double>(counts[v]) / s;
  return sums;
}

template <WalkModel M>
SigmaSketch build_sketch(const M& model, const SketchParams& params, const SketchOptions& options) {
  const std::size_t n = model.vertex_count();
  if (n < 2) throw ValidationError("sketch needs at least two vertices");
  if (params.t0 < 1 || params.walks < 1) throw ValidationError("sketch needs t0 >= 1 and s >= 1");

  std::vector<double> degrees(n);
  for (Vertex u = 0; u < n; ++u) degrees[u] = model.degree(u);
  const std::vector<double> pi = stationary_distribution_of(model);

  std::vector<SparseVector> sigma(n);
  const unsigned workers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(n)));

  auto run = [&](unsigned worker) {
    std::vector<std::uint64_t> counts(n);
    const auto s = static_cast<double>(params.walks);
    const auto t0 = static_cast<double>(params.t0);
    for (std::size_t u = worker; u < n; u += workers) {
      accumulate_counts(model, static_cast<Vertex>(u), params, options.seed, counts);
      SparseVector row;
      for (Vertex v = 0; v < n; ++v) {
        const double value = 0.5 * (static_cast<double>(counts[v]) / s - t0 * pi[v]);
        if (std::abs(value) > params.threshold) row.emplace(v, value);
      }
      sigma[u] = std::move(row);
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  return SigmaSketch(params, options.seed, std::move(degrees), std::move(sigma));
}

template std::vector<double> sample_visit_sums(const GraphWalk&, Vertex, const SketchParams&,
                                               std::uint64_t);
template std::vector<double> sample_visit_sums(const SchurWalker&, Vertex, const SketchParams&,
                                               std::uint64_t);
template SigmaSketch build_sketch(const GraphWalk&, const SketchParams&, const SketchOptions&);
template SigmaSketch build_sketch(const SchurWalker&, const SketchParams&, const SketchOptions&);

SigmaSketch build_sketch(const WeightedGraph& g, const SketchParams& params,
                         const SketchOptions& options) {
  if (!is_connected(g)) throw ValidationError("sketch requires a connected graph");
  const AliasSampler sampler = build_alias(g);
  return build_sketch(GraphWalk(g, sampler), params, options);
}

double four_term_resistance(std::span<const double> sigma_u, std::span<const double> sigma_v,
                            double degree_u, double degree_v, Vertex u, Vertex v) {
  return sigma_u[u] / degree_u - sigma_u[v] / degree_v + sigma_v[v] / degree_v -
         sigma_v[u] / degree_u;
}

double query(const SigmaSketch& sketch, Vertex u, Vertex v) {
  const std::size_t n = sketch.vertex_count();
  if (u >= n || v >= n) throw ValidationError("query vertex out of range");
  if (u == v) return 0.0;
  const double du = sketch.degree(u);
  const double dv = sketch.degree(v);
  const double estimate = sketch.value(u, u) / du - sketch.value(u, v) / dv +
                          sketch.value(v, v) / dv - sketch.value(v, u) / du;
  const double floor = 0.5 * (1.0 / du + 1.0 / dv);
  return std::max(estimate, floor);
}

BatchQueryResult query_batch(const SigmaSketch& sketch, std::span<const VertexPair> pairs) {
  BatchQueryResult result;
  result.values.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [u, v] = pairs[i];
    if (u >= sketch.vertex_count() || v >= sketch.vertex_count()) {
      result.values.push_back(std::numeric_limits<double>::quiet_NaN());
      result.errors.emplace_back(i, "vertex out of range");
      continue;
    }
    if (u == v) result.errors.emplace_back(i, "degenerate pair (u == v)");
    result.values.push_back(query(sketch, u, v));
  }
  return result;
}

}  // namespace ersketch
