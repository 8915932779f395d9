#include "ersketch/determinant.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ersketch/alias.hpp"
#include "ersketch/errors.hpp"
#include "ersketch/oracle.hpp"

namespace ersketch {

SparsifyParams SparsifyParams::for_size(std::size_t n, double delta) {
  if (n < 2) throw ValidationError("sparsification needs n >= 2");
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0, 1]");
  const double nd = static_cast<double>(n);
  SparsifyParams p;
  p.delta = delta;
  p.samples = static_cast<std::size_t>(std::ceil(std::pow(nd, 1.5) / delta));
  p.epsilon_r = std::min(1.0, std::pow(nd, -0.25) * std::sqrt(delta));
  p.reweight = std::exp(nd * nd / (2.0 * (nd - 1.0) * static_cast<double>(p.samples)));
  return p;
}

WeightedGraph det_sparsify(const WeightedGraph& g, const ResistanceFn& reff,
                           const SparsifyParams& params, CounterRng& rng) {
  if (params.samples == 0) throw ValidationError("sparsifier needs at least one sample");
  if (!(params.reweight > 0.0) || !std::isfinite(params.reweight)) {
    throw ValidationError("sparsifier reweight factor must be positive");
  }
  const auto edges = g.edges();
  std::vector<double> leverage(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double r = reff(edges[i].u, edges[i].v);
    if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("resistance estimate must be positive");
    leverage[i] = edges[i].w * r;
  }
  double total = 0.0;
  for (double x : leverage) total += x;

  const auto table = build_alias_table<double>(leverage);
  std::vector<std::uint64_t> hits(edges.size(), 0);
  for (std::size_t k = 0; k < params.samples; ++k) ++hits[sample_alias(table, rng)];

  const auto s = static_cast<double>(params.samples);
  std::vector<Edge> sampled;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (hits[i] == 0) continue;
    const double p = leverage[i] / total;
    sampled.push_back({edges[i].u, edges[i].v,
                       edges[i].w * static_cast<double>(hits[i]) / (s * p) * params.reweight});
  }
  WeightedGraph h;
  try {
    h = build_graph(g.vertex_count(), sampled);
  } catch (const ValidationError& e) {
    throw ConvergenceError(std::string("sparsifier lost a vertex (") + e.what() +
                           "); increase the sample count");
  }
  if (!is_connected(h)) throw ConvergenceError("sparsifier is disconnected; increase the sample count");
  return h;
}

double exact_log_det_plus(const WeightedGraph& g) { return oracle::matrix_tree_log_count(g, 0); }

std::string to_string(Branch b) {
  switch (b) {
    case Branch::Root: return "root";
    case Branch::Left: return "left";
    case Branch::Right: return "right";
    case Branch::Base: return "base";
    case Branch::Dd: return "dd";
  }
  return "?";
}

std::size_t planned_depth(std::size_t n, std::size_t cap) {
  if (n <= cap || cap == 0) return 1;
  const double d = std::ceil(std::log(static_cast<double>(n) / static_cast<double>(cap)) /
                             std::log(4.0 / 3.0));
  return std::max<std::size_t>(1, static_cast<std::size_t>(d));
}

namespace {

enum Tag : std::uint64_t {
  kSubset = 1,
  kLeft = 2,
  kRightSketch = 3,
  kRightSample = 4,
  kRight = 5,
  kDdSketch = 6,
  kDdSample = 7,
  kDdNext = 8,
};

class Recursion {
 public:
  Recursion(const DeterminantConfig& config, double delta_level, std::size_t guard,
            LogDetEstimate& out)
      : config_(config), delta_level_(delta_level), guard_(guard), out_(out) {}

  double graph(const WeightedGraph& g, std::uint64_t key, std::size_t level, Branch branch,
               std::optional<double> nu2_hint) {
    check_depth(level);
    const std::size_t n = g.vertex_count();
    if (!is_connected(g)) throw ValidationError("graph is disconnected: it has no spanning trees");
    if (n <= config_.base_case_cap) {
      const double value = exact_log_det_plus(g);
      record({level, Branch::Base, n, 0, 0.0, 0.0, 0.0, value});
      return value;
    }

    const double nu2 = checked_nu2(g, nu2_hint);
    CounterRng subset_rng = CounterRng::stream(key, {kSubset});
    const VertexSet v2 = find_dd_subset(g, config_.alpha, subset_rng);
    const VertexSet v1 = v2.complement(n);
    if (v1.empty()) throw ConvergenceError("DD subset covers the whole graph");
    record({level, branch, n, 0, 0.0, 0.0, nu2, 0.0});

    // det+(L) = det(L[V2, V2]) * det+(Sc(L, V1)).
    const double left = block(laplacian_block(g, v2), CounterRng::derive_key(key, {kLeft}), level + 1);

    const WeightedGraph schur = schur_complement(g, v1);
    const auto sp = SparsifyParams::for_size(v1.size(), delta_level_);
    // Resistances among V1 are the same in G and in Sc(G, V1), so they come
    // from a sketch of G.
    const auto params = compute_params(n, g.weight_ratio(), sp.epsilon_r, nu2, config_.c_t0, config_.c_s);
    const SigmaSketch sketch =
        build_sketch(g, params, {CounterRng::derive_key(key, {kRightSketch}), config_.workers});
    const ResistanceFn reff = [&](Vertex a, Vertex b) { return query(sketch, v1[a], v1[b]); };
    CounterRng sample_rng = CounterRng::stream(key, {kRightSample});
    const WeightedGraph sparse = det_sparsify(schur, reff, sp, sample_rng);
    out_.delta_spent += sp.delta;
    record({level + 1, Branch::Right, v1.size(), sp.samples, sp.epsilon_r, sp.delta, nu2, 0.0});

    const double right = graph(sparse, CounterRng::derive_key(key, {kRight}), level + 1,
                               Branch::Right, std::nullopt);
    return left + right;
  }

  // log det(M) for a DD block: M is the [x-removed] cofactor of its
  // completion, which equals d_x det+(Sc(L_M, V \ {x})).
  double block(const DDMatrix& m, std::uint64_t key, std::size_t level, Branch branch = Branch::Left) {
    check_depth(level);
    const std::size_t k = m.size();
    if (m.is_diagonal()) {
      double value = 0.0;
      for (double d : m.diagonals()) value += std::log(d);
      record({level, branch, k, 0, 0.0, 0.0, 0.0, value});
      return value;
    }
    if (k <= config_.base_case_cap) {
      const auto det = oracle::log_abs_det(m.to_dense());
      if (det.sign <= 0) throw ValidationError("DD block is not positive definite");
      record({level, branch, k, 0, 0.0, 0.0, 0.0, det.log_abs});
      return det.log_abs;
    }
    const SchurWalker walker = dd_schur_walker(m);
    const double log_dx = std::log(walker.eliminated_degree());
    const WeightedGraph schur = build_graph(k, walker.explicit_edges());
    const auto sp = SparsifyParams::for_size(k, delta_level_);
    const double nu2 = dd_nu2_lower_bound(m);
    const auto params = compute_params(k, walker.weight_ratio(), sp.epsilon_r, nu2, config_.c_t0, config_.c_s);
    const SigmaSketch sketch =
        build_sketch(walker, params, {CounterRng::derive_key(key, {kDdSketch}), config_.workers});
    const ResistanceFn reff = [&](Vertex a, Vertex b) { return query(sketch, a, b); };
    CounterRng sample_rng = CounterRng::stream(key, {kDdSample});
    const WeightedGraph sparse = det_sparsify(schur, reff, sp, sample_rng);
    out_.delta_spent += sp.delta;
    record({level, branch, k, sp.samples, sp.epsilon_r, sp.delta, nu2, log_dx});
    return log_dx + graph(sparse, CounterRng::derive_key(key, {kDdNext}), level + 1, Branch::Root,
                          std::nullopt);
  }

 private:
  double checked_nu2(const WeightedGraph& g, std::optional<double> hint) {
    double nu2 = hint ? *hint : estimate_spectral_gap(g, config_.spectral_tolerance);
    if (nu2 < config_.nu2_floor) {
      std::ostringstream msg;
      msg << "estimated nu2 " << nu2 << " is below the floor " << config_.nu2_floor << " on n="
          << g.vertex_count();
      if (config_.abort_below_floor) throw ValidationError(msg.str() + " (non-expander input)");
      out_.warnings.push_back(msg.str() + "; continuing with long walks");
      nu2 = std::max(nu2, 1e-6);
    }
    return std::min(nu2, 2.0);
  }

  void check_depth(std::size_t level) {
    if (level <= guard_) return;
    std::ostringstream msg;
    msg << "recursion exceeded depth guard " << guard_ << "; transcript:";
    for (const auto& t : out_.trace) {
      msg << " [" << t.level << ' ' << to_string(t.branch) << " n=" << t.n << ']';
    }
    throw ConvergenceError(msg.str());
  }

  void record(const TraceEntry& entry) {
    out_.trace.push_back(entry);
    out_.max_level = std::max(out_.max_level, entry.level);
  }

  const DeterminantConfig& config_;
  double delta_level_;
  std::size_t guard_;
  LogDetEstimate& out_;
};

void check_config(double delta, const DeterminantConfig& config) {
  if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("delta must lie in (0, 1]");
  if (config.base_case_cap < 2) throw ValidationError("base case cap must be >= 2");
  if (!(config.alpha > 0.0)) throw ValidationError("alpha must be positive");
  if (!(config.c_levels > 0.0)) throw ValidationError("c_levels must be positive");
}

std::size_t depth_guard(std::size_t n) {
  return static_cast<std::size_t>(std::ceil(4.0 * std::log2(static_cast<double>(std::max<std::size_t>(n, 2)))));
}

}  // namespace

LogDetEstimate det_approx(const WeightedGraph& g, double delta, const DeterminantConfig& config,
                          std::optional<double> nu2) {
  check_config(delta, config);
  if (g.vertex_count() < 2) throw ValidationError("need at least two vertices");
  LogDetEstimate out;
  out.planned_depth = planned_depth(g.vertex_count(), config.base_case_cap);
  out.delta_per_level = delta / (config.c_levels * static_cast<double>(out.planned_depth));
  Recursion rec(config, out.delta_per_level, depth_guard(g.vertex_count()), out);
  out.log_value = rec.graph(g, CounterRng::derive_key(config.seed, {0}), 0, Branch::Root, nu2);
  return out;
}

LogDetEstimate dd_det_approx(const DDMatrix& m, double delta, const DeterminantConfig& config) {
  check_config(delta, config);
  if (!m.is_diagonal() && !(m.alpha() > 0.0)) {
    throw ValidationError("matrix is not (1+alpha)-DD for any alpha > 0 (row " +
                          std::to_string(m.tightest_row().value_or(0)) + ")");
  }
  LogDetEstimate out;
  // One extra level for the completion step.
  out.planned_depth = planned_depth(m.size(), config.base_case_cap) + 1;
  out.delta_per_level = delta / (config.c_levels * static_cast<double>(out.planned_depth));
  Recursion rec(config, out.delta_per_level, depth_guard(m.size() + 1), out);
  out.log_value = rec.block(m, CounterRng::derive_key(config.seed, {0}), 0, Branch::Dd);
  return out;
}

}  // namespace ersketch
