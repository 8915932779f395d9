#include "ersketch/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ersketch/ddmatrix.hpp"
#include "ersketch/determinant.hpp"
#include "ersketch/errors.hpp"
#include "ersketch/generators.hpp"
#include "ersketch/oracle.hpp"
#include "ersketch/sketch.hpp"
#include "ersketch/sketch_io.hpp"
#include "json.hpp"

namespace ersketch {

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

using nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr double kSparsityConstant = 8.0;

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

std::string hex64(std::uint64_t x) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << x;
  return s.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw ValidationError("failed writing " + path);
}

WeightedGraph load_graph(const std::string& path) {
  std::istringstream in(read_file(path));
  return read_graph(in);
}

std::vector<VertexPair> parse_pairs(std::istream& in, const std::string& source) {
  std::vector<VertexPair> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long u = 0;
    long long v = 0;
    std::string extra;
    if (!(fields >> u)) {
      std::istringstream blank(line);
      if (blank >> extra) throw ValidationError(source + " line " + std::to_string(line_no) + ": expected `u v`");
      continue;
    }
    if (!(fields >> v) || (fields >> extra) || u < 0 || v < 0 || u > UINT32_MAX || v > UINT32_MAX) {
      throw ValidationError(source + " line " + std::to_string(line_no) + ": expected `u v`");
    }
    pairs.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
  }
  return pairs;
}

std::vector<VertexPair> collect_pairs(const std::string& file, const std::vector<std::string>& inline_pairs) {
  std::vector<VertexPair> pairs;
  if (!file.empty()) {
    std::istringstream in(read_file(file));
    pairs = parse_pairs(in, file);
  }
  for (std::string p : inline_pairs) {
    for (char& c : p) {
      if (c == ',' || c == ':') c = ' ';
    }
    std::istringstream in(p);
    auto parsed = parse_pairs(in, "--pair");
    if (parsed.size() != 1) throw ValidationError("--pair expects `u,v`");
    pairs.push_back(parsed[0]);
  }
  if (pairs.empty()) throw ValidationError("no vertex pairs given");
  return pairs;
}

/// Shared per-command state: timing, seed, output capture and manifest.
class Run {
 public:
  Run(std::string command, std::ostream& out, std::ostream& err)
      : command_(std::move(command)), out_(out), err_(err), start_(Clock::now()) {}

  std::ostream& err() { return err_; }
  ordered_json& config() { return config_; }
  ordered_json& inputs() { return inputs_; }

  std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
    if (seed) {
      seed_ = *seed;
    } else {
      std::random_device rd;
      seed_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
      err_ << "seed " << *seed_ << '\n';
    }
    return *seed_;
  }

  void add_input(const std::string& path) {
    inputs_[path] = hex64(fnv1a64(read_file(path)));
  }

  /// Primary output: a file when `path` is set, else the output stream.
  void emit(std::string_view bytes, const std::string& path) {
    output_digest_ = fnv1a64(bytes);
    output_path_ = path;
    if (path.empty()) {
      out_ << bytes;
    } else {
      write_file(path, bytes);
    }
  }

  /// Secondary text for the terminal (not part of the digest).
  void print(std::string_view text) { out_ << text; }

  void finish(const std::string& manifest_path) {
    const double wall = std::chrono::duration<double>(Clock::now() - start_).count();
    ordered_json m;
    m["command"] = command_;
    m["config"] = config_;
    m["seed"] = seed_ ? ordered_json(*seed_) : ordered_json(nullptr);
    m["inputs"] = inputs_;
    m["output"] = {{"path", output_path_}, {"digest", hex64(output_digest_)}};
    m["timings"] = {{"wall_seconds", wall}};
    const std::string text = m.dump(2) + "\n";
    std::string target = manifest_path;
    if (target.empty() && !output_path_.empty()) target = output_path_ + ".manifest.json";
    if (target.empty()) {
      err_ << text;
    } else {
      write_file(target, text);
    }
  }

 private:
  std::string command_;
  std::ostream& out_;
  std::ostream& err_;
  Clock::time_point start_;
  ordered_json config_ = ordered_json::object();
  ordered_json inputs_ = ordered_json::object();
  std::optional<std::uint64_t> seed_;
  std::uint64_t output_digest_ = fnv1a64("");
  std::string output_path_;
};

void snapshot_constants(ordered_json& config) {
  config["c_t0"] = kDefaultCt0;
  config["c_s"] = kDefaultCs;
  config["threshold_rule"] = "epsilon/4";
  config["oracle_cap"] = oracle::kOracleCap;
}

// ---------------------------------------------------------------- gen

struct GenArgs {
  std::string kind = "complete";
  std::size_t n = 0;
  std::size_t degree = 0;
  double p = 0.0;
  std::string weights = "unit";
  double w_low = 1.0;
  double w_high = 10.0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string manifest;
};

void cmd_gen(const GenArgs& a, Run& run) {
  GraphGeneratorSpec spec;
  spec.kind = parse_graph_kind(a.kind);
  spec.n = a.n;
  spec.degree = a.degree;
  spec.edge_probability = a.p;
  if (a.weights == "unit") {
    spec.weights = WeightLaw::Unit;
  } else if (a.weights == "uniform") {
    spec.weights = WeightLaw::Uniform;
  } else {
    throw ValidationError("--weights must be unit or uniform");
  }
  spec.weight_low = a.w_low;
  spec.weight_high = a.w_high;
  const bool randomized = spec.kind == GraphKind::RandomRegular || spec.kind == GraphKind::ErdosRenyi ||
                          spec.weights == WeightLaw::Uniform;
  spec.seed = randomized ? run.resolve_seed(a.seed) : a.seed.value_or(0);
  auto& c = run.config();
  c["kind"] = std::string(to_string(spec.kind));
  c["n"] = spec.n;
  c["degree"] = spec.degree;
  c["edge_probability"] = spec.edge_probability;
  c["weights"] = a.weights;
  c["weight_low"] = spec.weight_low;
  c["weight_high"] = spec.weight_high;
  const WeightedGraph g = generate(spec);
  std::ostringstream text;
  write_edge_list(text, g);
  run.emit(text.str(), a.out);
}

// ---------------------------------------------------------------- sketch

struct SketchArgs {
  std::string graph;
  double epsilon = 0.0;
  std::optional<double> nu2;
  bool estimate_nu2 = false;
  double nu2_floor = 0.01;
  double spectral_tolerance = 0.05;
  bool force = false;
  double c_t0 = kDefaultCt0;
  double c_s = kDefaultCs;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string out;
  std::string json_out;
  std::string manifest;
  bool json = false;
};

void cmd_sketch(const SketchArgs& a, Run& run) {
  run.add_input(a.graph);
  const WeightedGraph g = load_graph(a.graph);
  if (!is_connected(g)) throw ValidationError("input graph is disconnected");
  if (a.nu2 && a.estimate_nu2) throw ValidationError("give either --nu2 or --estimate-nu2, not both");
  double nu2 = 0.0;
  std::string nu2_source;
  if (a.nu2) {
    nu2 = *a.nu2;
    nu2_source = "given";
  } else {
    nu2 = estimate_spectral_gap(g, a.spectral_tolerance);
    nu2_source = "estimated";
  }
  if (nu2 < a.nu2_floor) {
    const std::string msg = "nu2 " + fmt(nu2) + " is below the floor " + fmt(a.nu2_floor);
    if (!a.force) throw ValidationError(msg + " (use --force to sketch anyway)");
    run.err() << "warning: " << msg << '\n';
  }
  const std::uint64_t seed = run.resolve_seed(a.seed);
  const auto params = compute_params(g.vertex_count(), g.weight_ratio(), a.epsilon, nu2, a.c_t0, a.c_s);

  auto& c = run.config();
  snapshot_constants(c);
  c["c_t0"] = a.c_t0;
  c["c_s"] = a.c_s;
  c["epsilon"] = a.epsilon;
  c["nu2"] = nu2;
  c["nu2_source"] = nu2_source;
  c["nu2_floor"] = a.nu2_floor;
  c["spectral_tolerance"] = a.spectral_tolerance;
  c["t0"] = params.t0;
  c["s"] = params.walks;
  c["threshold"] = params.threshold;

  const auto t = Clock::now();
  const SigmaSketch sketch = build_sketch(g, params, {seed, a.workers});
  const double build_seconds = std::chrono::duration<double>(Clock::now() - t).count();
  const auto bytes = encode_sketch(sketch);
  run.emit(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), a.out);
  if (!a.json_out.empty()) write_file(a.json_out, sketch_to_json(sketch));

  const double n = static_cast<double>(g.vertex_count());
  const double bound = kSparsityConstant / (nu2 * a.epsilon) * std::log(n * g.weight_ratio());
  ordered_json summary;
  summary["n"] = g.vertex_count();
  summary["t0"] = params.t0;
  summary["s"] = params.walks;
  summary["nu2"] = nu2;
  summary["mean_entries"] = sketch.mean_entry_count();
  summary["max_entries"] = sketch.max_entry_count();
  summary["sparsity_bound"] = bound;
  summary["digest"] = hex64(fnv1a64(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size())));
  if (a.json) {
    run.print(summary.dump() + "\n");
  } else {
    std::ostringstream s;
    for (const auto& [key, value] : summary.items()) s << key << ' ' << value.dump() << '\n';
    run.print(s.str());
  }
  run.err() << "wall_seconds " << build_seconds << '\n';
}

// ---------------------------------------------------------------- query

struct QueryArgs {
  std::string sketch;
  std::string pairs;
  std::vector<std::string> pair;
  bool exact = false;
  std::string graph;
  std::string out;
  std::string manifest;
  bool json = false;
};

void cmd_query(const QueryArgs& a, Run& run) {
  run.add_input(a.sketch);
  if (!a.pairs.empty()) run.add_input(a.pairs);
  const SigmaSketch sketch = load_sketch(a.sketch);
  const auto pairs = collect_pairs(a.pairs, a.pair);
  for (const auto& [u, v] : pairs) {
    if (u >= sketch.vertex_count() || v >= sketch.vertex_count()) {
      throw ValidationError("pair (" + std::to_string(u) + ", " + std::to_string(v) +
                            ") is out of range for a sketch on " + std::to_string(sketch.vertex_count()) +
                            " vertices");
    }
  }
  std::optional<oracle::ResistanceOracle> exact;
  if (a.exact) {
    if (a.graph.empty()) throw ValidationError("--exact needs --graph");
    run.add_input(a.graph);
    const WeightedGraph g = load_graph(a.graph);
    if (g.vertex_count() != sketch.vertex_count()) throw ValidationError("graph and sketch sizes differ");
    exact.emplace(g);
  }
  run.config()["exact"] = a.exact;
  run.config()["pair_count"] = pairs.size();

  std::ostringstream text;
  ordered_json rows = ordered_json::array();
  for (const auto& [u, v] : pairs) {
    const double r = query(sketch, u, v);
    ordered_json row = {{"u", u}, {"v", v}, {"r", r}};
    text << u << ' ' << v << ' ' << fmt(r);
    if (exact) {
      const double e = (*exact)(u, v);
      const double rel = u == v ? 0.0 : std::abs(r - e) / e;
      row["exact"] = e;
      row["rel_error"] = rel;
      text << ' ' << fmt(e) << ' ' << fmt(rel);
    }
    text << '\n';
    rows.push_back(std::move(row));
  }
  run.emit(a.json ? ordered_json{{"pairs", rows}}.dump() + "\n" : text.str(), a.out);
}

// ---------------------------------------------------------------- trees

struct TreesArgs {
  std::string graph;
  double delta = 0.5;
  bool exact = false;
  std::optional<double> nu2;
  double nu2_floor = 0.01;
  bool abort_below_floor = false;
  std::size_t cap = 64;
  double c_levels = 1.0;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string out;
  std::string manifest;
  bool json = false;
};

void format_count(ordered_json& j, std::ostringstream& text, double log_value) {
  const double log10_value = log_value / std::log(10.0);
  j["log_trees"] = log_value;
  j["log10_trees"] = log10_value;
  text << "log_trees " << fmt(log_value) << '\n';
  text << "log10_trees " << fmt(log10_value) << '\n';
  if (log10_value < 15.0) {
    std::ostringstream count;
    count << std::setprecision(15) << std::exp(log_value);
    j["trees"] = std::exp(log_value);
    text << "trees " << count.str() << '\n';
  }
}

void cmd_trees(const TreesArgs& a, Run& run) {
  run.add_input(a.graph);
  const WeightedGraph g = load_graph(a.graph);
  if (!is_connected(g)) throw ValidationError("graph is disconnected: it has no spanning trees");
  auto& c = run.config();
  snapshot_constants(c);
  c["exact"] = a.exact;
  ordered_json j;
  std::ostringstream text;
  if (a.exact) {
    const double value = oracle::matrix_tree_log_count(g, 0);
    format_count(j, text, value);
    j["method"] = "exact";
    text << "method exact\n";
  } else {
    DeterminantConfig config;
    config.seed = run.resolve_seed(a.seed);
    config.workers = a.workers;
    config.base_case_cap = a.cap;
    config.c_levels = a.c_levels;
    config.nu2_floor = a.nu2_floor;
    config.abort_below_floor = a.abort_below_floor;
    c["delta"] = a.delta;
    c["base_case_cap"] = config.base_case_cap;
    c["alpha"] = config.alpha;
    c["c_levels"] = config.c_levels;
    c["nu2_floor"] = config.nu2_floor;
    c["spectral_tolerance"] = config.spectral_tolerance;
    const auto est = det_approx(g, a.delta, config, a.nu2);
    format_count(j, text, est.log_value);
    j["method"] = "recursive";
    j["planned_depth"] = est.planned_depth;
    j["levels"] = est.max_level + 1;
    j["delta_per_level"] = est.delta_per_level;
    j["delta_spent"] = est.delta_spent;
    ordered_json trace = ordered_json::array();
    for (const auto& t : est.trace) {
      trace.push_back({{"level", t.level}, {"branch", to_string(t.branch)}, {"n", t.n}, {"samples", t.samples},
                       {"epsilon", t.epsilon}, {"delta", t.delta}, {"nu2", t.nu2}, {"log_value", t.log_value}});
    }
    j["trace"] = trace;
    j["warnings"] = est.warnings;
    text << "method recursive\n";
    text << "levels " << est.max_level + 1 << '\n';
    text << "delta_per_level " << fmt(est.delta_per_level) << '\n';
    for (const auto& t : est.trace) {
      text << "trace " << t.level << ' ' << to_string(t.branch) << " n=" << t.n;
      if (t.samples > 0) text << " s=" << t.samples << " eps=" << fmt(t.epsilon);
      text << '\n';
    }
    for (const auto& w : est.warnings) run.err() << "warning: " << w << '\n';
  }
  run.emit(a.json ? j.dump() + "\n" : text.str(), a.out);
}

// ---------------------------------------------------------------- dd

struct DdArgs {
  std::string matrix;
  std::optional<double> delta;
  std::string reff;
  std::vector<std::string> pair;
  double epsilon = 0.25;
  std::size_t cap = 64;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::string out;
  std::string manifest;
  bool json = false;
};

void cmd_dd(const DdArgs& a, Run& run) {
  run.add_input(a.matrix);
  std::istringstream in(read_file(a.matrix));
  const DDMatrix m = read_dd_matrix(in);
  if (!m.is_diagonal() && !(m.alpha() > 0.0)) {
    const Vertex r = *m.tightest_row();
    throw ValidationError("matrix is not diagonally dominant with a positive margin: row " + std::to_string(r) +
                          " has diagonal " + fmt(m.diagonal(r)) + " and off-diagonal sum " + fmt(m.off_sum(r)));
  }
  const bool want_reff = !a.reff.empty() || !a.pair.empty();
  if (a.delta.has_value() == want_reff) throw ValidationError("give exactly one of --delta or --reff/--pair");
  auto& c = run.config();
  snapshot_constants(c);
  c["alpha"] = m.alpha();
  ordered_json j;
  std::ostringstream text;
  if (a.delta) {
    DeterminantConfig config;
    config.seed = m.is_diagonal() ? a.seed.value_or(0) : run.resolve_seed(a.seed);
    config.workers = a.workers;
    config.base_case_cap = a.cap;
    c["delta"] = *a.delta;
    c["base_case_cap"] = a.cap;
    const auto est = dd_det_approx(m, *a.delta, config);
    j["log_det"] = est.log_value;
    text << "log_det " << fmt(est.log_value) << '\n';
    if (est.log_value / std::log(10.0) < 15.0) {
      std::ostringstream det;
      det << std::setprecision(15) << std::exp(est.log_value);
      j["det"] = std::exp(est.log_value);
      text << "det " << det.str() << '\n';
    }
  } else {
    if (!a.reff.empty()) run.add_input(a.reff);
    const auto pairs = collect_pairs(a.reff, a.pair);
    for (const auto& [u, v] : pairs) {
      if (u >= m.size() || v >= m.size()) throw ValidationError("pair out of range");
    }
    c["epsilon"] = a.epsilon;
    const auto sketch = dd_effective_resistance_sketch(m, a.epsilon, {run.resolve_seed(a.seed), a.workers});
    c["t0"] = sketch.params().t0;
    c["s"] = sketch.params().walks;
    ordered_json rows = ordered_json::array();
    for (const auto& [u, v] : pairs) {
      const double r = query(sketch, u, v);
      rows.push_back({{"u", u}, {"v", v}, {"r", r}});
      text << u << ' ' << v << ' ' << fmt(r) << '\n';
    }
    j["pairs"] = rows;
  }
  run.emit(a.json ? j.dump() + "\n" : text.str(), a.out);
}

template <class Fn>
int guarded(Run& run, const std::string& manifest, Fn&& fn) {
  try {
    fn();
    run.finish(manifest);
    return kExitOk;
  } catch (const ValidationError& e) {
    run.err() << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const CapabilityError& e) {
    run.err() << "error: " << e.what() << '\n';
    return kExitCapability;
  } catch (const ConvergenceError& e) {
    run.err() << "error: " << e.what() << '\n';
    return kExitConvergence;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Effective-resistance sketches and spanning-tree counts"};
  app.name("ersketch");
  app.require_subcommand(1);

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a graph as an edge list");
  g->add_option("--kind", gen.kind, "complete | random-regular | erdos-renyi | dumbbell")->required();
  g->add_option("--n", gen.n, "Vertex count")->required();
  g->add_option("--d", gen.degree, "Degree for random-regular");
  g->add_option("--p", gen.p, "Edge probability for erdos-renyi");
  g->add_option("--weights", gen.weights, "unit | uniform");
  g->add_option("--w-low", gen.w_low, "Lower weight bound (uniform)");
  g->add_option("--w-high", gen.w_high, "Upper weight bound (uniform)");
  g->add_option("--seed", gen.seed, "RNG seed");
  g->add_option("--out", gen.out, "Output path (default stdout)");
  g->add_option("--manifest", gen.manifest, "Manifest path");

  SketchArgs sk;
  auto* s = app.add_subcommand("sketch", "Build an effective-resistance sketch");
  s->add_option("graph", sk.graph, "Edge-list file")->required();
  s->add_option("--epsilon", sk.epsilon, "Target relative error")->required();
  s->add_option("--nu2", sk.nu2, "Spectral gap of the normalized Laplacian");
  s->add_flag("--estimate-nu2", sk.estimate_nu2, "Estimate nu2 by power iteration (default)");
  s->add_option("--nu2-floor", sk.nu2_floor, "Refuse graphs whose nu2 is below this");
  s->add_option("--spectral-tolerance", sk.spectral_tolerance, "Relative tolerance of the nu2 estimate");
  s->add_flag("--force", sk.force, "Sketch even below the nu2 floor");
  s->add_option("--c-t0", sk.c_t0, "Walk length constant");
  s->add_option("--c-s", sk.c_s, "Walk count constant");
  s->add_option("--seed", sk.seed, "RNG seed");
  s->add_option("--workers", sk.workers, "Worker threads");
  s->add_option("--out", sk.out, "Sketch output path")->required();
  s->add_option("--json-out", sk.json_out, "Also write the JSON mirror here");
  s->add_option("--manifest", sk.manifest, "Manifest path");
  s->add_flag("--json", sk.json, "JSON summary");

  QueryArgs q;
  auto* qc = app.add_subcommand("query", "Query effective resistances from a sketch");
  qc->add_option("sketch", q.sketch, "Sketch file")->required();
  qc->add_option("--pairs", q.pairs, "File with `u v` lines");
  qc->add_option("--pair", q.pair, "Inline pair u,v (repeatable)");
  qc->add_flag("--exact", q.exact, "Add oracle and relative error columns");
  qc->add_option("--graph", q.graph, "Edge-list file for --exact");
  qc->add_option("--out", q.out, "Output path (default stdout)");
  qc->add_option("--manifest", q.manifest, "Manifest path");
  qc->add_flag("--json", q.json, "JSON output");

  TreesArgs t;
  auto* tc = app.add_subcommand("trees", "Estimate the spanning-tree count");
  tc->add_option("graph", t.graph, "Edge-list file")->required();
  tc->add_option("--delta", t.delta, "Target relative error");
  tc->add_flag("--exact", t.exact, "Dense matrix-tree computation");
  tc->add_option("--nu2", t.nu2, "Spectral gap of the input (estimated if absent)");
  tc->add_option("--nu2-floor", t.nu2_floor, "Non-expander threshold");
  tc->add_flag("--abort-below-floor", t.abort_below_floor, "Fail instead of warning below the floor");
  tc->add_option("--cap", t.cap, "Base-case size");
  tc->add_option("--c-levels", t.c_levels, "Per-level error split constant");
  tc->add_option("--seed", t.seed, "RNG seed");
  tc->add_option("--workers", t.workers, "Worker threads");
  tc->add_option("--out", t.out, "Output path (default stdout)");
  tc->add_option("--manifest", t.manifest, "Manifest path");
  tc->add_flag("--json", t.json, "JSON output");

  DdArgs d;
  auto* dc = app.add_subcommand("dd", "Determinant or effective resistances of a DD matrix");
  dc->add_option("matrix", d.matrix, "DD matrix file")->required();
  dc->add_option("--delta", d.delta, "Estimate the determinant to this relative error");
  dc->add_option("--reff", d.reff, "File with `u v` pairs to query");
  dc->add_option("--pair", d.pair, "Inline pair u,v (repeatable)");
  dc->add_option("--epsilon", d.epsilon, "Resistance accuracy for --reff");
  dc->add_option("--cap", d.cap, "Base-case size");
  dc->add_option("--seed", d.seed, "RNG seed");
  dc->add_option("--workers", d.workers, "Worker threads");
  dc->add_option("--out", d.out, "Output path (default stdout)");
  dc->add_option("--manifest", d.manifest, "Manifest path");
  dc->add_flag("--json", d.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (g->parsed()) {
    Run run("gen", out, err);
    return guarded(run, gen.manifest, [&] { cmd_gen(gen, run); });
  }
  if (s->parsed()) {
    Run run("sketch", out, err);
    return guarded(run, sk.manifest, [&] { cmd_sketch(sk, run); });
  }
  if (qc->parsed()) {
    Run run("query", out, err);
    return guarded(run, q.manifest, [&] { cmd_query(q, run); });
  }
  if (tc->parsed()) {
    Run run("trees", out, err);
    return guarded(run, t.manifest, [&] { cmd_trees(t, run); });
  }
  Run run("dd", out, err);
  return guarded(run, d.manifest, [&] { cmd_dd(d, run); });
}

}  // namespace ersketch
