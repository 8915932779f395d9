#include "ersketch/walks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "ersketch/errors.hpp"

namespace ersketch {

SchurWalker::SchurWalker(std::size_t n, std::span<const Edge> base_edges,
                         std::vector<double> eliminated)
    : n_(n), base_(n, base_edges), eliminated_(std::move(eliminated)) {
  if (n_ < 2) throw ValidationError("Schur walker needs at least two vertices");
  if (eliminated_.size() != n_) throw ValidationError("eliminated weights must have one entry per vertex");
  for (const Edge& e : base_edges) {
    if (e.u >= n_ || e.v >= n_ || e.u == e.v || !(e.w > 0.0)) {
      throw ValidationError("invalid base edge for Schur walker");
    }
  }
  for (double w : eliminated_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw ValidationError("eliminated weights must be >= 0");
    eliminated_total_ += w;
  }
  if (!(eliminated_total_ > 0.0)) throw ValidationError("eliminated vertex has zero degree");

  clique_degree_.resize(n_);
  for (Vertex u = 0; u < n_; ++u) {
    const double share = eliminated_[u] / eliminated_total_;
    if (share > kMaxEliminatedShare) {
      throw ValidationError("vertex " + std::to_string(u) +
                            " carries more than 99.9% of the eliminated vertex's weight; "
                            "clique sampling would need > 1000 expected retries");
    }
    clique_degree_[u] = eliminated_[u] - eliminated_[u] * eliminated_[u] / eliminated_total_;
    if (degree(u) <= 0.0) {
      throw ValidationError("vertex " + std::to_string(u) + " is isolated in the Schur complement");
    }
  }
  sampler_ = AliasSampler(base_.view());
  clique_table_ = build_alias_table<double>(eliminated_);

  double w_min = std::numeric_limits<double>::infinity();
  double w_max = 0.0;
  for (double w : base_.view().weights) {
    w_min = std::min(w_min, w);
    w_max = std::max(w_max, w);
  }
  std::vector<double> positive;
  for (double w : eliminated_) {
    if (w > 0.0) positive.push_back(w);
  }
  std::sort(positive.begin(), positive.end());
  if (positive.size() >= 2) {
    w_min = std::min(w_min, positive[0] * positive[1] / eliminated_total_);
    w_max = std::max(w_max, positive[positive.size() - 1] * positive[positive.size() - 2] /
                                eliminated_total_);
  }
  weight_ratio_ = (w_max > 0.0 && std::isfinite(w_min)) ? std::max(1.0, w_max / w_min) : 1.0;
}

std::vector<Edge> SchurWalker::explicit_edges() const {
  std::map<std::pair<Vertex, Vertex>, double> merged;
  const auto view = base_.view();
  for (Vertex u = 0; u < n_; ++u) {
    for (std::size_t k = view.row_begin(u); k < view.row_begin(u) + view.row_size(u); ++k) {
      if (u < view.targets[k]) merged[{u, view.targets[k]}] += view.weights[k];
    }
  }
  for (Vertex u = 0; u < n_; ++u) {
    if (eliminated_[u] == 0.0) continue;
    for (Vertex v = u + 1; v < n_; ++v) {
      if (eliminated_[v] == 0.0) continue;
      merged[{u, v}] += eliminated_[u] * eliminated_[v] / eliminated_total_;
    }
  }
  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (const auto& [key, w] : merged) edges.push_back({key.first, key.second, w});
  return edges;
}

std::vector<double> stationary_distribution(const WeightedGraph& g) {
  if (!is_connected(g)) throw ValidationError("stationary distribution needs a connected graph");
  std::vector<double> pi(g.degrees().begin(), g.degrees().end());
  for (double& p : pi) p /= g.total_degree();
  return pi;
}

}  // namespace ersketch
