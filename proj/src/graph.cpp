#include "ersketch/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "ersketch/errors.hpp"

namespace ersketch {

CsrAdjacency::CsrAdjacency(std::size_t n, std::span<const Edge> edges) {
  std::vector<std::size_t> counts(n + 1, 0);
  for (const Edge& e : edges) {
    ++counts[e.u + 1];
    ++counts[e.v + 1];
  }
  for (std::size_t i = 0; i < n; ++i) counts[i + 1] += counts[i];

  std::vector<std::pair<Vertex, double>> slots(counts[n]);
  std::vector<std::size_t> cursor(counts.begin(), counts.end() - 1);
  for (const Edge& e : edges) {
    slots[cursor[e.u]++] = {e.v, e.w};
    slots[cursor[e.v]++] = {e.u, e.w};
  }

  offsets_.assign(n + 1, 0);
  degrees_.assign(n, 0.0);
  targets_.reserve(slots.size());
  weights_.reserve(slots.size());
  for (std::size_t u = 0; u < n; ++u) {
    auto first = slots.begin() + static_cast<std::ptrdiff_t>(counts[u]);
    auto last = slots.begin() + static_cast<std::ptrdiff_t>(counts[u + 1]);
    std::sort(first, last, [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto it = first; it != last; ++it) {
      if (!targets_.empty() && targets_.size() > offsets_[u] && targets_.back() == it->first) {
        weights_.back() += it->second;
      } else {
        targets_.push_back(it->first);
        weights_.push_back(it->second);
      }
    }
    offsets_[u + 1] = targets_.size();
    double degree = 0.0;
    for (std::size_t k = offsets_[u]; k < offsets_[u + 1]; ++k) degree += weights_[k];
    degrees_[u] = degree;
  }
}

std::span<const Vertex> WeightedGraph::neighbors(Vertex u) const noexcept {
  const auto v = adjacency_.view();
  return v.targets.subspan(v.row_begin(u), v.row_size(u));
}

std::span<const double> WeightedGraph::weights(Vertex u) const noexcept {
  const auto v = adjacency_.view();
  return v.weights.subspan(v.row_begin(u), v.row_size(u));
}

double WeightedGraph::edge_weight(Vertex u, Vertex v) const noexcept {
  const auto nbrs = neighbors(u);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v);
  if (it == nbrs.end() || *it != v) return 0.0;
  return weights(u)[static_cast<std::size_t>(it - nbrs.begin())];
}

std::vector<Edge> WeightedGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (Vertex u = 0; u < vertex_count(); ++u) {
    const auto nbrs = neighbors(u);
    const auto ws = weights(u);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (u < nbrs[k]) out.push_back({u, nbrs[k], ws[k]});
    }
  }
  return out;
}

WeightedGraph build_graph(std::size_t n, std::span<const Edge> edges) {
  if (n == 0) throw ValidationError("graph must have at least one vertex");
  for (const Edge& e : edges) {
    if (e.u >= n || e.v >= n) {
      throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") references a vertex outside 0.." + std::to_string(n - 1));
    }
    if (e.u == e.v) throw ValidationError("self-loop at vertex " + std::to_string(e.u));
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") has non-positive or non-finite weight");
    }
  }

  WeightedGraph g;
  g.adjacency_ = CsrAdjacency(n, edges);
  const auto view = g.adjacency_.view();
  const auto degrees = g.adjacency_.degrees();
  for (Vertex u = 0; u < n; ++u) {
    if (view.row_size(u) == 0) {
      throw ValidationError("vertex " + std::to_string(u) + " is isolated");
    }
  }
  g.edge_count_ = view.targets.size() / 2;
  g.w_min_ = *std::min_element(view.weights.begin(), view.weights.end());
  g.w_max_ = *std::max_element(view.weights.begin(), view.weights.end());
  for (double d : degrees) g.total_degree_ += d;
  return g;
}

WeightedGraph build_graph(std::span<const Edge> edges) {
  Vertex top = 0;
  for (const Edge& e : edges) top = std::max({top, e.u, e.v});
  return build_graph(edges.empty() ? 0 : static_cast<std::size_t>(top) + 1, edges);
}

bool is_connected(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::vector<Vertex> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const Vertex u = stack.back();
    stack.pop_back();
    for (Vertex v : g.neighbors(u)) {
      if (!seen[v]) {
        seen[v] = true;
        ++reached;
        stack.push_back(v);
      }
    }
  }
  return reached == n;
}

VertexSet::VertexSet(std::vector<Vertex> ids) : ids_(std::move(ids)) {
  std::sort(ids_.begin(), ids_.end());
  if (std::adjacent_find(ids_.begin(), ids_.end()) != ids_.end()) {
    throw ValidationError("vertex set contains duplicates");
  }
}

bool VertexSet::contains(Vertex u) const noexcept {
  return std::binary_search(ids_.begin(), ids_.end(), u);
}

VertexSet VertexSet::complement(std::size_t n) const {
  std::vector<Vertex> rest;
  rest.reserve(n >= ids_.size() ? n - ids_.size() : 0);
  std::size_t k = 0;
  for (Vertex u = 0; u < n; ++u) {
    if (k < ids_.size() && ids_[k] == u) {
      ++k;
    } else {
      rest.push_back(u);
    }
  }
  return VertexSet(std::move(rest));
}

std::vector<bool> VertexSet::mask(std::size_t n) const {
  std::vector<bool> m(n, false);
  for (Vertex u : ids_) {
    if (u < n) m[u] = true;
  }
  return m;
}

namespace {

// Mutable adjacency for sequential elimination. std::map keeps neighbor
// iteration order canonical so results do not depend on hashing.
class Eliminator {
 public:
  explicit Eliminator(const WeightedGraph& g) : rows_(g.vertex_count()) {
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
      const auto nbrs = g.neighbors(u);
      const auto ws = g.weights(u);
      for (std::size_t k = 0; k < nbrs.size(); ++k) rows_[u].emplace(nbrs[k], ws[k]);
    }
  }

  void eliminate(Vertex x) {
    auto& row = rows_[x];
    if (row.empty()) throw ValidationError("cannot eliminate degree-zero vertex " + std::to_string(x));
    double dx = 0.0;
    for (const auto& [v, w] : row) dx += w;
    std::vector<std::pair<Vertex, double>> nbrs(row.begin(), row.end());
    for (const auto& [v, w] : nbrs) rows_[v].erase(x);
    row.clear();
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
      for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
        const double w = nbrs[i].second * nbrs[j].second / dx;
        rows_[nbrs[i].first][nbrs[j].first] += w;
        rows_[nbrs[j].first][nbrs[i].first] += w;
      }
    }
  }

  WeightedGraph extract(const VertexSet& keep) const {
    std::vector<Vertex> index(rows_.size(), static_cast<Vertex>(-1));
    for (std::size_t i = 0; i < keep.size(); ++i) index[keep[i]] = static_cast<Vertex>(i);
    std::vector<Edge> edges;
    for (Vertex u : keep) {
      for (const auto& [v, w] : rows_[u]) {
        if (u < v) edges.push_back({index[u], index[v], w});
      }
    }
    return build_graph(keep.size(), edges);
  }

 private:
  std::vector<std::map<Vertex, double>> rows_;
};

}  // namespace

WeightedGraph schur_complement_eliminate_vertex(const WeightedGraph& g, Vertex x) {
  if (x >= g.vertex_count()) throw ValidationError("vertex out of range");
  if (g.vertex_count() < 2) throw ValidationError("cannot eliminate the only vertex");
  Eliminator elim(g);
  elim.eliminate(x);
  std::vector<Vertex> keep;
  keep.reserve(g.vertex_count() - 1);
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    if (u != x) keep.push_back(u);
  }
  return elim.extract(VertexSet(std::move(keep)));
}

WeightedGraph schur_complement(const WeightedGraph& g, const VertexSet& keep) {
  const VertexSet removed = keep.complement(g.vertex_count());
  return schur_complement(g, keep, removed.ids());
}

WeightedGraph schur_complement(const WeightedGraph& g, const VertexSet& keep,
                               std::span<const Vertex> elimination_order) {
  const std::size_t n = g.vertex_count();
  if (keep.empty()) throw ValidationError("Schur complement onto an empty set");
  if (keep.size() >= n) throw ValidationError("Schur complement onto the whole vertex set");
  if (keep.ids().back() >= n) throw ValidationError("keep set references a vertex out of range");
  if (keep.size() + elimination_order.size() != n) {
    throw ValidationError("elimination order must cover exactly V \\ keep");
  }
  const auto kept = keep.mask(n);
  std::vector<bool> seen(n, false);
  for (Vertex x : elimination_order) {
    if (x >= n || kept[x] || seen[x]) {
      throw ValidationError("elimination order is not a permutation of V \\ keep");
    }
    seen[x] = true;
  }
  if (!is_connected(g)) throw ValidationError("Schur complement requires a connected graph");

  Eliminator elim(g);
  for (Vertex x : elimination_order) elim.eliminate(x);
  return elim.extract(keep);
}

std::vector<Edge> read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    long long u = 0;
    long long v = 0;
    double w = 0.0;
    if (!(fields >> u)) continue;
    if (!(fields >> v >> w)) {
      throw ValidationError("edge list line " + std::to_string(line_no) + ": expected `u v w`");
    }
    std::string extra;
    if (fields >> extra) {
      throw ValidationError("edge list line " + std::to_string(line_no) + ": trailing fields");
    }
    if (u < 0 || v < 0 || u > 0xffffffffLL || v > 0xffffffffLL) {
      throw ValidationError("edge list line " + std::to_string(line_no) + ": vertex id out of range");
    }
    edges.push_back({static_cast<Vertex>(u), static_cast<Vertex>(v), w});
  }
  return edges;
}

WeightedGraph read_graph(std::istream& in) {
  const auto edges = read_edge_list(in);
  if (edges.empty()) throw ValidationError("edge list is empty");
  return build_graph(edges);
}

void write_edge_list(std::ostream& out, const WeightedGraph& g) {
  char buf[64];
  for (const Edge& e : g.edges()) {
    const auto res = std::to_chars(buf, buf + sizeof(buf), e.w);
    out << e.u << ' ' << e.v << ' ' << std::string_view(buf, static_cast<std::size_t>(res.ptr - buf))
        << '\n';
  }
}

}  // namespace ersketch
