#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "knnd/core.hpp"
#include "knnd/friend_map.hpp"
#include "knnd/rng.hpp"
#include "knnd/similarity.hpp"

namespace knnd {

/// True K nearest neighbors of each item, nearest first.
class ExactKnnGraph {
 public:
  ExactKnnGraph(std::size_t n, std::size_t k) : n_(n), k_(k), ids_(n * k) {}

  std::size_t size() const noexcept { return n_; }
  std::size_t k() const noexcept { return k_; }
  std::span<ItemId const> neighbors(ItemId x) const noexcept {
    return {ids_.data() + std::size_t{x} * k_, k_};
  }
  std::span<ItemId> row(ItemId x) noexcept { return {ids_.data() + std::size_t{x} * k_, k_}; }

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<ItemId> ids_;
};

/// First K of S \ {x} under x's order, for one anchor. Uses the per-anchor
/// scores when the ranking system has them, else comparator selection.
std::vector<ItemId> exactNeighbors(RankingSystem const& rs, ItemId x, std::size_t k);

/// Brute-force K-NN graph; anchors are processed in parallel.
ExactKnnGraph exactKnn(RankingSystem const& rs, std::size_t k, std::size_t workerCount = 0);

/// Mean over sampleIds of |approx(x) & exact(x)| / K.
double recall(FriendMap const& approx, ExactKnnGraph const& exact,
              std::span<ItemId const> sampleIds);
/// Same, with exact rows computed on demand for the sampled anchors only.
double recall(FriendMap const& approx, RankingSystem const& rs, std::span<ItemId const> sampleIds);

std::vector<ItemId> allIds(std::size_t n);
/// count distinct ids drawn uniformly from [0, n), ascending.
std::vector<ItemId> sampleIds(std::size_t n, std::size_t count, Rng& rng);

/// Plain adjacency-list digraph.
struct Digraph {
  std::vector<std::vector<std::uint32_t>> out;

  std::size_t vertexCount() const noexcept { return out.size(); }
  std::size_t arcCount() const noexcept;
  void addArc(std::uint32_t from, std::uint32_t to);
};

/// Orientation of the line graph of K_n: vertices are the pairs {a, b} with
/// a < b, and for every anchor x the arc {x,y} -> {x,z} exists iff y
/// precedes z under x.
class RankingDigraph {
 public:
  static constexpr std::size_t kMaxPoints = 64;

  std::size_t pointCount() const noexcept { return points_; }
  std::span<std::pair<ItemId, ItemId> const> vertices() const noexcept { return pairs_; }
  std::pair<ItemId, ItemId> pair(std::uint32_t vertex) const { return pairs_[vertex]; }
  std::uint32_t vertexOf(ItemId a, ItemId b) const;
  Digraph const& graph() const noexcept { return graph_; }

 private:
  friend RankingDigraph buildRankingDigraph(RankingSystem const& rs);

  std::size_t points_ = 0;
  std::vector<std::pair<ItemId, ItemId>> pairs_;
  Digraph graph_;
};

/// Throws ConfigError when rs.size() exceeds RankingDigraph::kMaxPoints.
RankingDigraph buildRankingDigraph(RankingSystem const& rs);

/// Directed cycle found by three-color DFS, as a closed vertex walk
/// (first vertex repeated at the end); nullopt when the digraph is acyclic.
std::optional<std::vector<std::uint32_t>> findCycleWitness(Digraph const& g);
inline std::optional<std::vector<std::uint32_t>> findCycleWitness(RankingDigraph const& dg) {
  return findCycleWitness(dg.graph());
}

/// "{1,2} -> {1,4} -> {2,4} -> {1,2}", labeling points from 1.
std::string formatCycle(RankingDigraph const& dg, std::span<std::uint32_t const> cycle);

/// Graphviz export; cycle vertices (if given) are filled black.
std::string toDot(RankingDigraph const& dg, std::span<std::uint32_t const> cycle = {});

struct CycleWitness {
  Dataset<SimplexPoint> points;
  RankingDigraph digraph;
  std::vector<std::uint32_t> cycle;
  std::size_t trial = 0;
};

/// Samples 6 uniform points on the simplex with d coordinates per trial,
/// builds the ranking digraph of `kind` and returns the first cycle found.
/// Throws ConfigError for d < 3.
std::optional<CycleWitness> searchNonMetricWitness(std::size_t d, std::size_t trials,
                                                   std::uint64_t seed,
                                                   RankingKind kind = RankingKind::kl);

}  // namespace knnd
