#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "ersketch/graph.hpp"
#include "ersketch/random.hpp"

namespace ersketch {

/// Walker alias table over `size()` outcomes: draw slot i uniformly, keep it
/// with probability prob[i], otherwise take alias[i].
template <class Real>
struct AliasTable {
  std::vector<Real> prob;
  std::vector<std::uint32_t> alias;

  std::size_t size() const noexcept { return prob.size(); }
};

/// Two-stack (small/large) alias construction. `Real` only needs field
/// arithmetic and ordering, so exact rationals work for verification.
/// When `ops` is given it is incremented once per stack push/pop.
template <class Real>
AliasTable<Real> build_alias_table(std::span<const Real> weights, std::size_t* ops = nullptr) {
  const std::size_t k = weights.size();
  AliasTable<Real> table;
  table.prob.assign(k, Real(1));
  table.alias.resize(k);
  if (k == 0) return table;

  Real total(0);
  for (const Real& w : weights) total += w;

  std::vector<Real> scaled(k, Real(0));
  std::vector<std::uint32_t> small;
  std::vector<std::uint32_t> large;
  small.reserve(k);
  large.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    table.alias[i] = static_cast<std::uint32_t>(i);
    scaled[i] = weights[i] * Real(static_cast<long long>(k)) / total;
    (scaled[i] < Real(1) ? small : large).push_back(static_cast<std::uint32_t>(i));
    if (ops) ++*ops;
  }
  while (!small.empty() && !large.empty()) {
    const std::uint32_t s = small.back();
    small.pop_back();
    const std::uint32_t l = large.back();
    large.pop_back();
    table.prob[s] = scaled[s];
    table.alias[s] = l;
    scaled[l] = (scaled[l] + scaled[s]) - Real(1);
    (scaled[l] < Real(1) ? small : large).push_back(l);
    if (ops) *ops += 3;
  }
  // Leftovers carry (up to rounding) probability exactly 1.
  for (std::uint32_t i : small) table.prob[i] = Real(1);
  for (std::uint32_t i : large) table.prob[i] = Real(1);
  if (ops) *ops += small.size() + large.size();
  return table;
}

/// Draw an outcome index from a table using exactly two uniform draws.
template <class Real, UniformSource Rng>
std::uint32_t sample_alias(const AliasTable<Real>& table, Rng& rng) {
  const std::size_t k = table.size();
  auto slot = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(k));
  if (slot >= k) slot = k - 1;
  const double coin = rng.uniform01();
  return coin < static_cast<double>(table.prob[slot]) ? static_cast<std::uint32_t>(slot)
                                                      : table.alias[slot];
}

/// Per-vertex alias tables laid out parallel to a CSR adjacency, so the
/// sampled slot indexes straight into the neighbor array.
class AliasSampler {
 public:
  AliasSampler() = default;
  explicit AliasSampler(AdjacencyView adjacency);

  std::size_t vertex_count() const noexcept { return adjacency_.vertex_count(); }
  std::size_t slot_count(Vertex u) const noexcept { return adjacency_.row_size(u); }
  double probability(Vertex u, std::size_t slot) const noexcept {
    return prob_[adjacency_.row_begin(u) + slot];
  }
  std::uint32_t alias(Vertex u, std::size_t slot) const noexcept {
    return alias_[adjacency_.row_begin(u) + slot];
  }
  Vertex neighbor(Vertex u, std::size_t slot) const noexcept {
    return adjacency_.targets[adjacency_.row_begin(u) + slot];
  }
  /// Table operations spent during construction (linearity check).
  std::size_t build_operations() const noexcept { return build_ops_; }

  /// Returns v with probability w_uv / d_u. u must have at least one neighbor.
  template <UniformSource Rng>
  Vertex sample_neighbor(Vertex u, Rng& rng) const {
    const Row row = rows_[u];
    auto slot = static_cast<std::uint32_t>(rng.uniform01() * static_cast<double>(row.size));
    if (slot >= row.size) slot = row.size - 1;
    const Slot& entry = slots_[row.begin + slot];
    if constexpr (requires { rng.discard(1); }) {
      // A full slot keeps its own target whatever the coin says.
      if (entry.prob >= 1.0) {
        rng.discard(1);
        return entry.own;
      }
    }
    const double coin = rng.uniform01();
    return coin < entry.prob ? entry.own : entry.other;
  }

 private:
  // Hot-path copy of the tables: one record per slot holding both candidate
  // targets, so a step touches a single cache line.
  struct Row {
    std::size_t begin;
    std::uint32_t size;
  };
  struct Slot {
    double prob;
    Vertex own;
    Vertex other;
  };

  AdjacencyView adjacency_;
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
  std::vector<Row> rows_;
  std::vector<Slot> slots_;
  std::size_t build_ops_ = 0;
};

inline AliasSampler build_alias(const WeightedGraph& g) { return AliasSampler(g.view()); }

template <UniformSource Rng>
Vertex sample_neighbor(const AliasSampler& sampler, Vertex u, Rng& rng) {
  return sampler.sample_neighbor(u, rng);
}

}  // namespace ersketch
