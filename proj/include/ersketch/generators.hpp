#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ersketch/graph.hpp"

namespace ersketch {

enum class GraphKind { Complete, RandomRegular, ErdosRenyi, Dumbbell };

enum class WeightLaw { Unit, Uniform };

struct GraphGeneratorSpec {
  GraphKind kind = GraphKind::Complete;
  std::size_t n = 0;
  std::size_t degree = 0;     // random-regular
  double edge_probability = 0.0;  // erdos-renyi
  WeightLaw weights = WeightLaw::Unit;
  double weight_low = 1.0;    // uniform law bounds
  double weight_high = 1.0;
  std::uint64_t seed = 0;
};

GraphKind parse_graph_kind(std::string_view name);
std::string_view to_string(GraphKind kind);

/// Deterministic for a fixed spec. Throws ValidationError on infeasible specs.
/// Erdos-Renyi output must still have no isolated vertex, else it throws.
WeightedGraph generate(const GraphGeneratorSpec& spec);

}  // namespace ersketch
