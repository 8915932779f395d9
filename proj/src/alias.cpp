#include "ersketch/alias.hpp"

namespace ersketch {

AliasSampler::AliasSampler(AdjacencyView adjacency) : adjacency_(adjacency) {
  prob_.resize(adjacency.targets.size());
  alias_.resize(adjacency.targets.size());
  for (Vertex u = 0; u < adjacency.vertex_count(); ++u) {
    const std::size_t begin = adjacency.row_begin(u);
    const std::size_t k = adjacency.row_size(u);
    const auto table = build_alias_table<double>(adjacency.weights.subspan(begin, k), &build_ops_);
    std::copy(table.prob.begin(), table.prob.end(), prob_.begin() + static_cast<std::ptrdiff_t>(begin));
    std::copy(table.alias.begin(), table.alias.end(), alias_.begin() + static_cast<std::ptrdiff_t>(begin));
  }
  rows_.resize(adjacency.vertex_count());
  slots_.resize(adjacency.targets.size());
  for (Vertex u = 0; u < adjacency.vertex_count(); ++u) {
    const std::size_t begin = adjacency.row_begin(u);
    rows_[u] = {begin, static_cast<std::uint32_t>(adjacency.row_size(u))};
    for (std::size_t k = begin; k < begin + adjacency.row_size(u); ++k) {
      slots_[k] = {prob_[k], adjacency.targets[k], adjacency.targets[begin + alias_[k]]};
    }
  }
}

}  // namespace ersketch
