#include "ersketch/ddmatrix.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>

#include "ersketch/errors.hpp"

namespace ersketch {

namespace {

constexpr double kRowTolerance = 1e-12;

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return {buf, res.ptr};
}

}  // namespace

DDMatrix::DDMatrix(std::size_t n, std::span<const MatrixEntry> entries) {
  if (n == 0) throw ValidationError("DD matrix must have n >= 1");
  diagonal_.assign(n, std::numeric_limits<double>::quiet_NaN());
  std::map<std::pair<Vertex, Vertex>, double> off;
  for (const auto& e : entries) {
    if (e.row >= n || e.col >= n) throw ValidationError("matrix entry index out of range");
    if (!std::isfinite(e.value)) throw ValidationError("matrix entry is not finite");
    if (e.row == e.col) {
      if (!std::isnan(diagonal_[e.row]) && diagonal_[e.row] != e.value) {
        throw ValidationError("diagonal entry " + std::to_string(e.row) + " given twice with different values");
      }
      diagonal_[e.row] = e.value;
      continue;
    }
    if (e.value > 0.0) {
      throw ValidationError("positive off-diagonal entry at (" + std::to_string(e.row) + ", " +
                            std::to_string(e.col) + ")");
    }
    const auto key = std::minmax(e.row, e.col);
    const auto [it, inserted] = off.emplace(key, e.value);
    if (!inserted && it->second != e.value) {
      throw ValidationError("matrix is not symmetric at (" + std::to_string(key.first) + ", " +
                            std::to_string(key.second) + ")");
    }
  }
  for (const auto& [key, value] : off) {
    if (value < 0.0) off_.push_back({key.first, key.second, -value});
  }
  finish();
}

DDMatrix::DDMatrix(std::vector<double> diagonal, std::vector<Edge> off_diagonal)
    : diagonal_(std::move(diagonal)), off_(std::move(off_diagonal)) {
  if (diagonal_.empty()) throw ValidationError("DD matrix must have n >= 1");
  for (auto& e : off_) {
    if (e.u >= diagonal_.size() || e.v >= diagonal_.size() || e.u == e.v) {
      throw ValidationError("invalid off-diagonal index");
    }
    if (!(e.w > 0.0) || !std::isfinite(e.w)) throw ValidationError("off-diagonal magnitudes must be positive");
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(off_.begin(), off_.end(), [](const Edge& a, const Edge& b) {
    return std::tie(a.u, a.v) < std::tie(b.u, b.v);
  });
  for (std::size_t i = 1; i < off_.size(); ++i) {
    if (off_[i].u == off_[i - 1].u && off_[i].v == off_[i - 1].v) {
      throw ValidationError("duplicate off-diagonal entry");
    }
  }
  finish();
}

void DDMatrix::finish() {
  const std::size_t n = diagonal_.size();
  for (Vertex u = 0; u < n; ++u) {
    if (std::isnan(diagonal_[u])) throw ValidationError("missing diagonal entry for row " + std::to_string(u));
    if (!(diagonal_[u] > 0.0)) throw ValidationError("diagonal entry of row " + std::to_string(u) + " is not positive");
  }
  off_sum_.assign(n, 0.0);
  for (const auto& e : off_) {
    off_sum_[e.u] += e.w;
    off_sum_[e.v] += e.w;
  }
  alpha_ = std::numeric_limits<double>::infinity();
  tightest_.reset();
  for (Vertex u = 0; u < n; ++u) {
    if (off_sum_[u] == 0.0) continue;
    const double a = diagonal_[u] / off_sum_[u] - 1.0;
    if (a < alpha_) {
      alpha_ = a;
      tightest_ = u;
    }
  }
}

Eigen::MatrixXd DDMatrix::to_dense() const {
  const auto n = static_cast<Eigen::Index>(size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Vertex u = 0; u < size(); ++u) m(u, u) = diagonal_[u];
  for (const auto& e : off_) {
    m(e.u, e.v) = -e.w;
    m(e.v, e.u) = -e.w;
  }
  return m;
}

bool validate_dd(const DDMatrix& m, double alpha) {
  if (!(alpha >= 0.0)) throw ValidationError("alpha must be >= 0");
  for (Vertex u = 0; u < m.size(); ++u) {
    if (m.diagonal(u) < (1.0 + alpha) * m.off_sum(u) - kRowTolerance * m.diagonal(u)) return false;
  }
  return true;
}

DDMatrix dd_from_dense(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ValidationError("matrix is not square");
  std::vector<MatrixEntry> entries;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i == j || m(i, j) != 0.0) {
        entries.push_back({static_cast<Vertex>(i), static_cast<Vertex>(j), m(i, j)});
      }
    }
  }
  return DDMatrix(static_cast<std::size_t>(m.rows()), entries);
}

bool validate_dd(const Eigen::MatrixXd& m, double alpha) { return validate_dd(dd_from_dense(m), alpha); }

DDMatrix laplacian_block(const WeightedGraph& g, const VertexSet& rows) {
  std::vector<Vertex> local(g.vertex_count(), std::numeric_limits<Vertex>::max());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= g.vertex_count()) throw ValidationError("block row out of range");
    local[rows[i]] = static_cast<Vertex>(i);
  }
  std::vector<double> diagonal(rows.size());
  std::vector<Edge> off;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Vertex u = rows[i];
    diagonal[i] = g.degree(u);
    const auto nbrs = g.neighbors(u);
    const auto ws = g.weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const Vertex j = local[nbrs[k]];
      if (j != std::numeric_limits<Vertex>::max() && i < j) {
        off.push_back({static_cast<Vertex>(i), j, ws[k]});
      }
    }
  }
  return DDMatrix(std::move(diagonal), std::move(off));
}

LaplacianCompletion complete_to_laplacian(const DDMatrix& m) {
  const std::size_t n = m.size();
  LaplacianCompletion out;
  out.x = static_cast<Vertex>(n);
  out.slack.resize(n);
  std::vector<Edge> edges(m.off_diagonal().begin(), m.off_diagonal().end());
  for (Vertex u = 0; u < n; ++u) {
    double s = m.slack(u);
    if (s < 0.0) {
      if (s < -kRowTolerance * m.diagonal(u)) {
        throw ValidationError("row " + std::to_string(u) + " is not diagonally dominant (slack " +
                              format_double(s) + ")");
      }
      s = 0.0;
    }
    out.slack[u] = s;
    if (s > 0.0) edges.push_back({u, out.x, s});
  }
  if (edges.size() == m.off_diagonal().size()) {
    throw ValidationError("every row has zero slack; the completion vertex would be isolated");
  }
  out.graph = build_graph(n + 1, edges);
  return out;
}

SchurWalker dd_schur_walker(const DDMatrix& m) {
  if (m.size() < 2) throw ValidationError("Schur walker needs a matrix of size >= 2");
  const auto completion = complete_to_laplacian(m);
  return SchurWalker(m.size(), m.off_diagonal(), completion.slack);
}

double dd_nu2_lower_bound(const DDMatrix& m) {
  const double a = m.alpha();
  if (std::isinf(a)) return 1.0;
  if (!(a > 0.0)) throw ValidationError("matrix is not (1+alpha)-DD for any alpha > 0");
  return a / (1.0 + a);
}

SigmaSketch dd_effective_resistance_sketch(const DDMatrix& m, double epsilon,
                                           const SketchOptions& options, double c_t0, double c_s) {
  const double nu2 = dd_nu2_lower_bound(m);
  const SchurWalker walker = dd_schur_walker(m);
  const auto params = compute_params(m.size(), walker.weight_ratio(), epsilon, nu2, c_t0, c_s);
  return build_sketch(walker, params, options);
}

bool is_dd_subset(const WeightedGraph& g, const VertexSet& subset, double alpha) {
  const auto mask = subset.mask(g.vertex_count());
  for (Vertex u : subset) {
    double inside = 0.0;
    double outside = 0.0;
    const auto nbrs = g.neighbors(u);
    const auto ws = g.weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) (mask[nbrs[k]] ? inside : outside) += ws[k];
    if (outside < alpha * inside) return false;
  }
  return true;
}

namespace {

// Drop every violator at once. Removal only moves weight from "inside" to
// "outside" for the survivors, so they stay valid.
std::vector<Vertex> prune_violators(const WeightedGraph& g, const std::vector<bool>& chosen,
                                    double alpha) {
  std::vector<Vertex> kept;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    if (!chosen[u]) continue;
    double inside = 0.0;
    const auto nbrs = g.neighbors(u);
    const auto ws = g.weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (chosen[nbrs[k]]) inside += ws[k];
    }
    if (g.degree(u) - inside >= alpha * inside) kept.push_back(u);
  }
  return kept;
}

std::vector<Vertex> greedy_dd_subset(const WeightedGraph& g, double alpha) {
  const std::size_t n = g.vertex_count();
  std::vector<bool> in(n, false);
  std::vector<double> inside(n, 0.0);
  std::vector<Vertex> chosen;
  for (Vertex u = 0; u < n; ++u) {
    const auto nbrs = g.neighbors(u);
    const auto ws = g.weights(u);
    double own = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < nbrs.size() && ok; ++k) {
      const Vertex v = nbrs[k];
      if (!in[v]) continue;
      own += ws[k];
      const double v_inside = inside[v] + ws[k];
      ok = g.degree(v) - v_inside >= alpha * v_inside;
    }
    if (!ok || g.degree(u) - own < alpha * own) continue;
    in[u] = true;
    inside[u] = own;
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (in[nbrs[k]] && nbrs[k] != u) inside[nbrs[k]] += ws[k];
    }
    chosen.push_back(u);
  }
  return chosen;
}

}  // namespace

VertexSet find_dd_subset(const WeightedGraph& g, double alpha, CounterRng& rng) {
  if (!(alpha > 0.0)) throw ValidationError("alpha must be positive");
  const std::size_t n = g.vertex_count();
  if (n == 0) throw ValidationError("empty graph");
  const double p = 1.0 / (2.0 * (1.0 + alpha));
  std::vector<Vertex> best;
  for (int attempt = 0; attempt < kDdSubsetAttempts; ++attempt) {
    std::vector<bool> chosen(n);
    for (Vertex u = 0; u < n; ++u) chosen[u] = rng.uniform01() < p;
    auto kept = prune_violators(g, chosen, alpha);
    if (8 * kept.size() >= n) return VertexSet(std::move(kept));
    if (kept.size() > best.size()) best = std::move(kept);
  }
  auto greedy = greedy_dd_subset(g, alpha);
  if (greedy.size() > best.size()) best = std::move(greedy);
  return VertexSet(std::move(best));
}

DDMatrix read_dd_matrix(std::istream& in) {
  std::string line;
  std::optional<std::size_t> n;
  std::vector<MatrixEntry> entries;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    auto fail = [&](const std::string& what) {
      return ValidationError("DD matrix line " + std::to_string(line_no) + ": " + what);
    };
    if (!n) {
      std::size_t value = 0;
      const auto res = std::from_chars(first.data(), first.data() + first.size(), value);
      if (res.ec != std::errc() || res.ptr != first.data() + first.size() || value == 0) {
        throw fail("expected matrix size n >= 1");
      }
      std::string extra;
      if (fields >> extra) throw fail("unexpected text after n");
      n = value;
      continue;
    }
    long long u = -1;
    long long v = -1;
    double value = 0.0;
    std::istringstream row(line);
    std::string extra;
    if (!(row >> u >> v >> value) || (row >> extra)) throw fail("expected `u v value`");
    if (u < 0 || v < 0) throw fail("negative index");
    entries.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), value});
  }
  if (!n) throw ValidationError("DD matrix file is empty");
  return DDMatrix(*n, entries);
}

void write_dd_matrix(std::ostream& out, const DDMatrix& m) {
  out << m.size() << '\n';
  for (Vertex u = 0; u < m.size(); ++u) out << u << ' ' << u << ' ' << format_double(m.diagonal(u)) << '\n';
  for (const auto& e : m.off_diagonal()) out << e.u << ' ' << e.v << ' ' << format_double(-e.w) << '\n';
}

}  // namespace ersketch
