#include "ersketch/generators.hpp"

#include <algorithm>
#include <set>
#include <utility>
#include <vector>

#include "ersketch/errors.hpp"
#include "ersketch/random.hpp"

namespace ersketch {

GraphKind parse_graph_kind(std::string_view name) {
  if (name == "complete") return GraphKind::Complete;
  if (name == "random-regular") return GraphKind::RandomRegular;
  if (name == "erdos-renyi") return GraphKind::ErdosRenyi;
  if (name == "dumbbell") return GraphKind::Dumbbell;
  throw ValidationError("unknown graph kind: " + std::string(name));
}

std::string_view to_string(GraphKind kind) {
  switch (kind) {
    case GraphKind::Complete: return "complete";
    case GraphKind::RandomRegular: return "random-regular";
    case GraphKind::ErdosRenyi: return "erdos-renyi";
    case GraphKind::Dumbbell: return "dumbbell";
  }
  return "?";
}

namespace {

using PairList = std::vector<std::pair<Vertex, Vertex>>;

void add_clique(PairList& pairs, Vertex first, Vertex last) {
  for (Vertex u = first; u < last; ++u) {
    for (Vertex v = u + 1; v < last; ++v) pairs.emplace_back(u, v);
  }
}

// Steger-Wormald pairing: join random free points while the pair keeps the
// graph simple; restart from scratch when no admissible pair is left.
PairList random_regular_pairs(std::size_t n, std::size_t d, CounterRng& rng) {
  constexpr int kMaxRestarts = 10000;
  for (int restart = 0; restart < kMaxRestarts; ++restart) {
    std::vector<Vertex> points;
    points.reserve(n * d);
    for (Vertex u = 0; u < n; ++u) {
      for (std::size_t k = 0; k < d; ++k) points.push_back(u);
    }
    std::set<std::pair<Vertex, Vertex>> used;
    PairList pairs;
    pairs.reserve(n * d / 2);

    auto admissible = [&](Vertex a, Vertex b) {
      return a != b && !used.contains({std::min(a, b), std::max(a, b)});
    };

    bool stuck = false;
    while (!points.empty() && !stuck) {
      std::size_t failures = 0;
      while (true) {
        const std::size_t i = rng.below(points.size());
        const std::size_t j = rng.below(points.size());
        if (i != j && admissible(points[i], points[j])) {
          const Vertex a = points[i];
          const Vertex b = points[j];
          used.insert({std::min(a, b), std::max(a, b)});
          pairs.emplace_back(std::min(a, b), std::max(a, b));
          // Remove the larger index first so the smaller stays valid.
          for (std::size_t k : {std::max(i, j), std::min(i, j)}) {
            points[k] = points.back();
            points.pop_back();
          }
          break;
        }
        if (++failures > 64 + 4 * points.size()) {
          bool any = false;
          for (std::size_t a = 0; a < points.size() && !any; ++a) {
            for (std::size_t b = a + 1; b < points.size() && !any; ++b) {
              any = admissible(points[a], points[b]);
            }
          }
          if (!any) {
            stuck = true;
            break;
          }
          failures = 0;
        }
      }
    }
    if (!stuck) {
      std::sort(pairs.begin(), pairs.end());
      return pairs;
    }
  }
  throw ValidationError("random-regular generator failed to produce a simple graph");
}

}  // namespace

WeightedGraph generate(const GraphGeneratorSpec& spec) {
  const std::size_t n = spec.n;
  if (n < 2) throw ValidationError("generator needs n >= 2");
  if (spec.weights == WeightLaw::Uniform &&
      !(spec.weight_low > 0.0 && spec.weight_high >= spec.weight_low)) {
    throw ValidationError("uniform weight law needs 0 < low <= high");
  }

  CounterRng topology = CounterRng::stream(spec.seed, {1});
  CounterRng weights = CounterRng::stream(spec.seed, {2});

  PairList pairs;
  switch (spec.kind) {
    case GraphKind::Complete:
      add_clique(pairs, 0, static_cast<Vertex>(n));
      break;
    case GraphKind::RandomRegular:
      if (spec.degree == 0 || spec.degree >= n) {
        throw ValidationError("random-regular needs 1 <= d < n");
      }
      if ((n * spec.degree) % 2 != 0) throw ValidationError("random-regular needs n*d even");
      pairs = random_regular_pairs(n, spec.degree, topology);
      break;
    case GraphKind::ErdosRenyi:
      if (!(spec.edge_probability > 0.0 && spec.edge_probability <= 1.0)) {
        throw ValidationError("erdos-renyi needs 0 < p <= 1");
      }
      for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
          if (topology.uniform01() < spec.edge_probability) pairs.emplace_back(u, v);
        }
      }
      break;
    case GraphKind::Dumbbell: {
      if (n < 4) throw ValidationError("dumbbell needs n >= 4");
      const auto half = static_cast<Vertex>(n / 2);
      add_clique(pairs, 0, half);
      add_clique(pairs, half, static_cast<Vertex>(n));
      pairs.emplace_back(half - 1, half);
      std::sort(pairs.begin(), pairs.end());
      break;
    }
  }

  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [u, v] : pairs) {
    double w = 1.0;
    if (spec.weights == WeightLaw::Uniform) {
      w = spec.weight_low + (spec.weight_high - spec.weight_low) * weights.uniform01();
    }
    edges.push_back({u, v, w});
  }
  return build_graph(n, edges);
}

}  // namespace ersketch
