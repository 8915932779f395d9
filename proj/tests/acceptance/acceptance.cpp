// Acceptance suite: one PASS/FAIL line per criterion on stdout, progress on
// stderr. Exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "ersketch/alias.hpp"
#include "ersketch/ddmatrix.hpp"
#include "ersketch/determinant.hpp"
#include "ersketch/oracle.hpp"
#include "ersketch/sketch.hpp"
#include "ersketch/sketch_io.hpp"
#include "helpers.hpp"

using namespace ersketch;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::map<int, Outcome> results;

void report(int id, bool pass, const std::string& detail) {
  results[id] = {pass, detail};
  std::fprintf(stderr, "[criterion %d done] %s\n", id, pass ? "pass" : "FAIL");
}

std::string fmt(const char* f, auto... args) {
  char buf[1024];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Fact 1 floor, accumulated over every oracle pair any suite evaluates.
struct FloorTally {
  std::size_t pairs = 0;
  std::size_t violations = 0;
  double worst = INFINITY;  // min of R - floor

  void check(const WeightedGraph& g, const oracle::ResistanceOracle& r) {
    const auto n = static_cast<Vertex>(g.vertex_count());
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) add(g, u, v, r(u, v));
  }
  void add(const WeightedGraph& g, Vertex u, Vertex v, double r) {
    const double gap = r - 0.5 * (1.0 / g.degree(u) + 1.0 / g.degree(v));
    ++pairs;
    violations += gap < -1e-12;
    worst = std::min(worst, gap);
  }
} floor_tally;

double four_term(const WeightedGraph& g, const Eigen::MatrixXd& sigma, Vertex u, Vertex v) {
  const Eigen::VectorXd su = sigma.col(u);
  const Eigen::VectorXd sv = sigma.col(v);
  return four_term_resistance({su.data(), static_cast<std::size_t>(su.size())},
                              {sv.data(), static_cast<std::size_t>(sv.size())}, g.degree(u),
                              g.degree(v), u, v);
}

std::vector<WeightedGraph> small_graphs(std::size_t count, std::size_t max_n, std::uint64_t seed) {
  std::vector<WeightedGraph> out;
  auto rng = CounterRng::stream(seed, {});
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = 5 + rng.below(max_n - 4);
    const double p = 0.05 + 0.5 * rng.uniform01();
    out.push_back(test::random_connected(n, p, seed * 1000 + i, 1.0, 10.0));
  }
  return out;
}

VertexSet random_keep(std::size_t n, CounterRng& rng) {
  std::vector<Vertex> keep;
  const double p = 0.2 + 0.6 * rng.uniform01();
  for (Vertex u = 0; u < n; ++u)
    if (rng.uniform01() < p) keep.push_back(u);
  while (keep.size() < 2) {
    const auto u = static_cast<Vertex>(rng.below(n));
    if (std::find(keep.begin(), keep.end(), u) == keep.end()) keep.push_back(u);
  }
  if (keep.size() == n) keep.pop_back();
  std::sort(keep.begin(), keep.end());
  return VertexSet(keep);
}

// ---------------------------------------------------------------------------

void exact_sigma_suite() {
  const auto start = Clock::now();
  const auto graphs = small_graphs(20, 30, 1);
  double worst_rel = 0.0;
  std::size_t pairs = 0;
  double worst_l1_margin = INFINITY;
  bool l1_ok = true;
  for (const auto& g : graphs) {
    const auto n = static_cast<Vertex>(g.vertex_count());
    const double nu2 = oracle::exact_nu2(g);
    const Eigen::MatrixXd sigma =
        oracle::exact_sigma_matrix(g, oracle::sigma_truncation_length(g, nu2, 1e-12));
    const oracle::ResistanceOracle r(g);
    floor_tally.check(g, r);
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = u + 1; v < n; ++v) {
        const double exact = r(u, v);
        worst_rel = std::max(worst_rel, std::abs(four_term(g, sigma, u, v) - exact) / exact);
        ++pairs;
      }
    const double bound = 8.0 / nu2 * std::log(static_cast<double>(n) * g.weight_ratio()) + 2.0;
    for (Vertex u = 0; u < n; ++u) {
      const double l1 = sigma.col(u).lpNorm<1>();
      worst_l1_margin = std::min(worst_l1_margin, bound - l1);
      l1_ok = l1_ok && l1 <= bound;
    }
  }
  const double elapsed = seconds_since(start);
  report(1, worst_rel <= 1e-8 && elapsed < 30.0,
         fmt("exact-sigma identity: max rel err %.2e over %zu pairs on 20 graphs (limit 1e-8), %.1f s (limit 30 s)",
             worst_rel, pairs, elapsed));
  report(4, l1_ok,
         fmt("l1 bound: ||sigma_u||_1 <= 8 ln(nW)/nu2 + 2 for every u on 20 graphs; smallest margin %.3f",
             worst_l1_margin));
}

void convergence_suite() {
  const auto graphs = small_graphs(20, 40, 2);
  std::size_t violations = 0;
  std::size_t checks = 0;
  for (const auto& g : graphs) {
    const auto n = static_cast<Eigen::Index>(g.vertex_count());
    const double nu2 = oracle::exact_nu2(g);
    const auto deg = g.degrees();
    const double scale = static_cast<double>(n) * *std::max_element(deg.begin(), deg.end()) /
                         *std::min_element(deg.begin(), deg.end());
    const auto pi_vec = stationary_distribution(g);
    const Eigen::Map<const Eigen::VectorXd> pi(pi_vec.data(), n);
    const Eigen::MatrixXd x = oracle::lazy_walk_matrix(g);
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(n, n);
    for (int t = 0; t <= 200; ++t) {
      const double bound = std::exp(-t * nu2 / 2.0) * scale;
      for (Eigen::Index u = 0; u < n; ++u) {
        ++checks;
        violations += (power.col(u) - pi).lpNorm<1>() > bound + 1e-10;
      }
      power = x * power;
    }
    floor_tally.check(g, oracle::ResistanceOracle(g));
  }
  report(5, violations == 0,
         fmt("walk convergence: %zu violations of e^{-t nu2/2} n dmax/dmin over %zu (graph, u, t) checks",
             violations, checks));
}

void interlacing_suite() {
  auto rng = CounterRng::stream(7, {});
  std::size_t violations = 0;
  double worst = INFINITY;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 4 + rng.below(27);
    const auto g = test::random_connected(n, 0.05 + 0.5 * rng.uniform01(), 7000 + i, 1.0, 10.0);
    const VertexSet keep = random_keep(n, rng);
    const Eigen::MatrixXd sc = oracle::laplacian(schur_complement(g, keep));
    Eigen::VectorXd original(keep.size());
    Eigen::VectorXd own(keep.size());
    for (std::size_t k = 0; k < keep.size(); ++k) {
      const auto e = static_cast<Eigen::Index>(k);
      original(e) = g.degree(keep[k]);
      own(e) = sc(e, e);
    }
    const double base = oracle::exact_nu2(g);
    const double with_original = oracle::normalized_nu2(sc, original);
    const double with_own = oracle::normalized_nu2(sc, own);
    const double margin = std::min(with_original - base, with_own - with_original);
    worst = std::min(worst, margin);
    violations += margin < -1e-8;
    floor_tally.check(g, oracle::ResistanceOracle(g));
  }
  report(7, violations == 0,
         fmt("interlacing: %zu violations in 100 instances; smallest margin %.2e (tolerance -1e-8)",
             violations, worst));
}

void dd_floor_suite() {
  auto rng = CounterRng::stream(8, {});
  std::size_t violations = 0;
  double worst = INFINITY;
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (int i = 0; i < 50; ++i) {
      const std::size_t n = 3 + rng.below(38);
      const auto m = test::random_dd(n, alpha, 0.05 + 0.4 * rng.uniform01(), 8000 + i * 7 +
                                     static_cast<std::uint64_t>(alpha * 100));
      const auto c = complete_to_laplacian(m);
      const VertexSet original = VertexSet({c.x}).complement(n + 1);
      const Eigen::MatrixXd sc = oracle::dense_schur_complement(oracle::laplacian(c.graph), original);
      const double nu2 = oracle::normalized_nu2(sc, sc.diagonal());
      const double margin = nu2 - alpha / (1 + alpha);
      worst = std::min(worst, margin);
      violations += margin < -1e-8;
    }
  }
  report(8, violations == 0,
         fmt("DD expansion floor: %zu violations in 150 matrices (alpha 0.5, 1, 2); smallest margin %.2e",
             violations, worst));
}

void schur_walk_suite() {
  auto rng = CounterRng::stream(9, {});
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const std::size_t n = 10 + rng.below(21);
    const auto m = test::random_dd(n, 1.0, 0.1 + 0.3 * rng.uniform01(), 9000 + i);
    const SchurWalker walker = dd_schur_walker(m);
    const auto c = complete_to_laplacian(m);
    const VertexSet original = VertexSet({c.x}).complement(n + 1);
    const Eigen::MatrixXd sc = oracle::dense_schur_complement(oracle::laplacian(c.graph), original);
    // Start from the vertex with the largest share of x, where the clique
    // rejection loop works hardest.
    Vertex u = 0;
    for (Vertex v = 1; v < n; ++v)
      if (walker.eliminated_weight(v) > walker.eliminated_weight(u)) u = v;
    std::vector<double> freq(n, 0.0);
    auto walk_rng = CounterRng::stream(90, {static_cast<std::uint64_t>(i)});
    constexpr int kSteps = 100000;
    for (int k = 0; k < kSteps; ++k) freq[walker.step(u, walk_rng)] += 1.0 / kSteps;
    double tv = 0.0;
    for (Vertex v = 0; v < n; ++v) {
      const double exact = v == u ? 0.0 : -sc(u, v) / sc(u, u);
      tv += 0.5 * std::abs(freq[v] - exact);
    }
    worst = std::max(worst, tv);
  }
  report(9, worst <= 0.02,
         fmt("implicit vs explicit Schur step: max TV %.4f over 10 instances, 1e5 steps each (limit 0.02)",
             worst));
}

void alias_suite() {
  auto rng = CounterRng::stream(12, {});
  double min_p = 1.0;
  for (int i = 0; i < 20; ++i) {
    const std::size_t k = 2 + rng.below(49);
    std::vector<Edge> star;
    double total = 0.0;
    for (Vertex v = 1; v <= k; ++v) {
      const double w = std::exp(3.0 * rng.uniform01());
      star.push_back({0, v, w});
      total += w;
    }
    const auto g = build_graph(k + 1, star);
    const AliasSampler sampler(g.view());
    std::vector<double> hits(k + 1, 0.0);
    auto draw = CounterRng::stream(120, {static_cast<std::uint64_t>(i)});
    constexpr int kDraws = 1000000;
    for (int d = 0; d < kDraws; ++d) ++hits[sampler.sample_neighbor(0, draw)];
    double stat = 0.0;
    for (Vertex v = 1; v <= k; ++v) {
      const double e = kDraws * g.edge_weight(0, v) / total;
      stat += (hits[v] - e) * (hits[v] - e) / e;
    }
    const boost::math::chi_squared_distribution<double> chi(static_cast<double>(k - 1));
    min_p = std::min(min_p, boost::math::cdf(boost::math::complement(chi, stat)));
  }

  // Enumerate the two-draw outcome space: with integer weights summing to W,
  // every slot probability is a multiple of 1/W, so W coin midpoints per slot
  // hit each outcome an exact integer number of times.
  struct Replay {
    std::vector<double> values;
    std::size_t next = 0;
    double uniform01() { return values[next++]; }
  };
  bool exact = true;
  const std::vector<std::vector<int>> weights{{1, 2, 3}, {3, 1}, {5, 1, 1, 1, 7, 2}, {1, 10, 1, 1}, {4, 4, 4}};
  for (const auto& ws : weights) {
    const std::size_t k = ws.size();
    int total = 0;
    std::vector<Edge> star;
    for (std::size_t j = 0; j < k; ++j) {
      star.push_back({0, static_cast<Vertex>(j + 1), static_cast<double>(ws[j])});
      total += ws[j];
    }
    const auto g = build_graph(k + 1, star);
    const AliasSampler sampler(g.view());
    std::vector<long> count(k + 1, 0);
    for (std::size_t slot = 0; slot < k; ++slot)
      for (int c = 0; c < total; ++c) {
        Replay r{{(slot + 0.5) / k, (c + 0.5) / total}};
        ++count[sampler.sample_neighbor(0, r)];
      }
    for (std::size_t j = 0; j < k; ++j) exact = exact && count[j + 1] == static_cast<long>(ws[j] * k);
  }
  report(12, min_p > 0.001 && exact,
         fmt("alias sampler: min chi-square p = %.4f over 20 vectors x 1e6 draws (limit 0.001); "
             "enumerated two-draw spaces %s",
             min_p, exact ? "exact" : "NOT exact"));
}

// ---------------------------------------------------------------------------

struct SketchRun {
  double epsilon;
  SigmaSketch sketch;
  std::vector<std::uint8_t> bytes;
  double seconds;
};

WeightedGraph regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  return test::random_regular(n, d, seed);
}

void sketch_suites() {
  const auto g = regular(500, 8, 2024);
  const double nu2_est = estimate_spectral_gap(g, 0.05);
  const double nu2_exact = oracle::exact_nu2(g);
  std::fprintf(stderr, "n=500: nu2 estimate %.4f, exact %.4f\n", nu2_est, nu2_exact);
  const oracle::ResistanceOracle r(g);
  floor_tally.check(g, r);

  auto pair_rng = CounterRng::stream(2, {});
  std::vector<VertexPair> pairs;
  while (pairs.size() < 1000) {
    const auto u = static_cast<Vertex>(pair_rng.below(500));
    const auto v = static_cast<Vertex>(pair_rng.below(500));
    if (u != v) pairs.push_back({u, v});
  }

  std::vector<SketchRun> runs;
  double total_seconds = 0.0;
  std::string accuracy;
  bool accurate = true;
  for (double eps : {0.25, 0.1}) {
    const auto start = Clock::now();
    const auto params = compute_params(500, 1.0, eps, nu2_est);
    auto sketch = build_sketch(g, params, {.seed = 500, .workers = 1});
    const double secs = seconds_since(start);
    total_seconds += secs;
    std::size_t good = 0;
    for (const auto& [u, v] : pairs) good += std::abs(query(sketch, u, v) - r(u, v)) <= eps * r(u, v);
    const double frac = static_cast<double>(good) / pairs.size();
    accurate = accurate && frac >= 0.99;
    accuracy += fmt("eps=%.2f: %.1f%% within (t0=%zu, s=%zu, %.0f s); ", eps, 100 * frac, params.t0,
                    params.walks, secs);
    std::fprintf(stderr, "sketch eps=%.2f built in %.1f s, %.1f%% good\n", eps, secs, 100 * frac);
    auto bytes = encode_sketch(sketch);
    runs.push_back({eps, std::move(sketch), std::move(bytes), secs});
  }
  report(2, accurate && total_seconds < 600.0,
         accuracy + fmt("total %.0f s (limit 600 s)", total_seconds));

  std::string sparsity;
  bool sparse = true;
  const double log_nw = std::log(500.0);
  for (const auto& run : runs) {
    const double mean = run.sketch.mean_entry_count();
    const double c = mean * nu2_exact * run.epsilon / log_nw;
    sparse = sparse && c <= 8.0;
    sparsity += fmt("eps=%.2f: mean %.1f entries, measured c_sparse %.3f; ", run.epsilon, mean, c);
  }
  report(3, sparse, sparsity + "limit c_sparse <= 8 (exact nu2)");

  // Criterion 13, sketch half: same seeds, different worker count.
  bool identical = true;
  for (const auto& run : runs) {
    const auto params = compute_params(500, 1.0, run.epsilon, nu2_est);
    const auto again = build_sketch(g, params, {.seed = 500, .workers = 2});
    identical = identical && encode_sketch(again) == run.bytes;
  }
  results[13].detail = fmt("sketch bytes %s across workers 1 vs 2; ", identical ? "identical" : "DIFFER");
  results[13].pass = identical;

  // Criterion 14: query latency at n = 500 vs n = 2000, same eps.
  const auto big = regular(2000, 8, 2025);
  const double big_nu2 = estimate_spectral_gap(big, 0.05);
  const auto start = Clock::now();
  const auto big_sketch = build_sketch(big, compute_params(2000, 1.0, 0.25, big_nu2), {.seed = 2000});
  std::fprintf(stderr, "n=2000 sketch built in %.1f s\n", seconds_since(start));
  auto median_query_ns = [](const SigmaSketch& sk, std::uint64_t seed) {
    const auto n = sk.vertex_count();
    auto q_rng = CounterRng::stream(seed, {});
    std::vector<VertexPair> qs(1000);
    for (auto& [u, v] : qs) {
      u = static_cast<Vertex>(q_rng.below(n));
      do v = static_cast<Vertex>(q_rng.below(n));
      while (v == u);
    }
    std::vector<double> per_query;
    volatile double sink = 0.0;
    for (int batch = 0; batch < 201; ++batch) {
      const auto t = Clock::now();
      double acc = 0.0;
      for (const auto& [u, v] : qs) acc += query(sk, u, v);
      per_query.push_back(std::chrono::duration<double, std::nano>(Clock::now() - t).count() / qs.size());
      sink = sink + acc;
    }
    std::nth_element(per_query.begin(), per_query.begin() + 100, per_query.end());
    return per_query[100];
  };
  const double small_ns = median_query_ns(runs[0].sketch, 14);
  const double big_ns = median_query_ns(big_sketch, 15);
  const double ratio = std::max(small_ns, big_ns) / std::min(small_ns, big_ns);
  report(14, ratio <= 2.0,
         fmt("query latency: median %.1f ns (n=500) vs %.1f ns (n=2000), ratio %.2f (limit 2)", small_ns,
             big_ns, ratio));
}

void determinant_suites() {
  const auto k50 = test::complete(50);
  const double k50_truth = 48.0 * std::log(50.0);
  const auto g150 = regular(150, 8, 3);
  const double g150_truth = oracle::matrix_tree_log_count(g150);
  const auto start = Clock::now();

  struct Run {
    const WeightedGraph* g;
    double delta;
    std::uint64_t seed;
    double value = 0.0;
  };
  std::vector<Run> runs;
  for (std::uint64_t s = 0; s < 5; ++s) runs.push_back({&k50, 0.5, 100 + s});
  for (std::uint64_t s = 0; s < 5; ++s) runs.push_back({&g150, 0.5, 200 + s});
  for (std::uint64_t s = 0; s < 5; ++s) runs.push_back({&k50, 0.25, 300 + s});

  double worst_half = 0.0;
  int quarter_ok = 0;
  for (auto& run : runs) {
    const auto t = Clock::now();
    run.value = det_approx(*run.g, run.delta, {.seed = run.seed, .workers = 1}).log_value;
    const double truth = run.g == &k50 ? k50_truth : g150_truth;
    const double err = std::abs(run.value - truth);
    if (run.delta == 0.5) worst_half = std::max(worst_half, err / std::log(1.5));
    if (run.delta == 0.25) quarter_ok += err <= std::log(1.25);
    std::fprintf(stderr, "det n=%zu delta=%.2f seed=%llu err %+.4f (%.1f s)\n", run.g->vertex_count(),
                 run.delta, static_cast<unsigned long long>(run.seed), run.value - truth, seconds_since(t));
  }
  const double elapsed = seconds_since(start);
  report(10, worst_half <= 1.0 && quarter_ok >= 4 && elapsed < 900.0,
         fmt("determinant: delta=0.5 worst |err|/log 1.5 = %.3f over 10 runs; delta=0.25 on K50 %d/5 within "
             "log 1.25; %.0f s (limit 900 s)",
             worst_half, quarter_ok, elapsed));

  bool identical = true;
  for (const auto& run : runs) {
    const double again = det_approx(*run.g, run.delta, {.seed = run.seed, .workers = 2}).log_value;
    identical = identical && again == run.value;
  }
  results[13].detail += fmt("log estimates %s across workers 1 vs 2 (15 runs)", identical ? "identical" : "DIFFER");
  results[13].pass = results[13].pass && identical;
  std::fprintf(stderr, "[criterion 13 done] %s\n", results[13].pass ? "pass" : "FAIL");
}

void dd_determinant_suite() {
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto m = test::random_dd(100, 1.0, 0.08, 1100 + s);
    const double truth = oracle::log_abs_det(m.to_dense()).log_abs;
    const auto t = Clock::now();
    const double est = dd_det_approx(m, 0.5, {.seed = 110 + s}).log_value;
    worst = std::max(worst, std::abs(est - truth));
    std::fprintf(stderr, "dd det seed=%llu err %+.4f (%.1f s)\n", static_cast<unsigned long long>(s),
                 est - truth, seconds_since(t));
  }
  report(11, worst <= std::log(1.5),
         fmt("DD determinant: worst |log err| %.4f over 5 random 2-DD n=100 (limit log 1.5 = %.4f)", worst,
             std::log(1.5)));
}

}  // namespace

int main() {
  const auto start = Clock::now();
  exact_sigma_suite();
  convergence_suite();
  interlacing_suite();
  dd_floor_suite();
  schur_walk_suite();
  alias_suite();
  sketch_suites();
  determinant_suites();
  dd_determinant_suite();
  report(6, floor_tally.violations == 0,
         fmt("Fact 1 floor: %zu violations over %zu oracle pairs; smallest R - floor %.3e", floor_tally.violations,
             floor_tally.pairs, floor_tally.worst));

  // The report also goes to acceptance_report.txt in the working directory,
  // since ctest hides the output of passing tests.
  std::FILE* file = std::fopen("acceptance_report.txt", "w");
  auto emit = [&](const std::string& line) {
    std::printf("%s\n", line.c_str());
    if (file) std::fprintf(file, "%s\n", line.c_str());
  };
  int failed = 0;
  for (int id = 1; id <= 14; ++id) {
    const auto it = results.find(id);
    const bool pass = it != results.end() && it->second.pass;
    failed += !pass;
    emit(fmt("%s criterion %2d: %s", pass ? "PASS" : "FAIL", id,
             it == results.end() ? "not run" : it->second.detail.c_str()));
  }
  emit(fmt("%d of 14 criteria passed in %.0f s", 14 - failed, seconds_since(start)));
  if (file) std::fclose(file);
  return failed == 0 ? 0 : 1;
}
