#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "knnd/core.hpp"
#include "knnd/friend_map.hpp"
#include "knnd/neighbor_set.hpp"
#include "knnd/rng.hpp"

namespace knnd {

enum class StopRule {
  /// Stop at the first round r >= 2 whose clustering rate does not exceed
  /// the rate of round r-1.
  clusteringRate,
  /// Stop once a round leaves every friend set unchanged.
  fixedPoint,
};

struct DescentConfig {
  std::size_t k = 16;
  std::size_t fccSampleCount = 1000;
  /// Unset means roundBudget(n, k) + 4.
  std::optional<std::size_t> maxRounds;
  std::uint64_t seed = 0;
  /// 0 means one worker per hardware thread.
  std::size_t workerCount = 0;
  StopRule stopRule = StopRule::clusteringRate;

  /// Throws ConfigError for K < 2, fccSampleCount == 0 or maxRounds == 0.
  void validate() const;
};

struct KnnState {
  FriendMap friends;
  CoFriendMap cofriends;
  std::size_t round = 0;
  std::vector<double> fccHistory;
};

struct RoundStats {
  std::size_t roundIndex = 0;
  double durationSeconds = 0.0;
  double fcc = 0.0;
  std::uint64_t comparisonCount = 0;
  std::size_t changedFriendSets = 0;
};

struct DescentResult {
  FriendMap friends;
  /// Clustering rate of the random initial graph (before any round).
  double initialFcc = 0.0;
  std::vector<RoundStats> rounds;
};

/// 2 * ceil(log_K n), computed exactly in integers.
std::size_t roundBudget(std::size_t n, std::size_t k);

/// Resolved round cap for a config on n items.
std::size_t effectiveMaxRounds(DescentConfig const& cfg, std::size_t n);

/// Every x draws K distinct friends uniformly from the other n-1 items and
/// keeps them ordered nearest-first. Each anchor uses its own substream, so
/// the result depends only on cfg.seed.
KnnState initRandomKOut(RankingSystem const& rs, DescentConfig const& cfg);

/// cofriends(x), friends of friends and friends of cofriends, minus x and
/// minus friends(x). Ascending ids.
std::vector<ItemId> candidateSet(ItemId x, KnnState const& state);

/// Best K of friends(x) and candidateSet(x), read from the unchanged snapshot.
BoundedNeighborSet proposeNewFriendSet(ItemId x, KnnState const& state, RankingSystem const& rs);

/// Sample relative frequency that two distinct friends y, z of a uniformly
/// drawn x are adjacent (y is a friend or co-friend of z).
double friendClusteringRate(KnnState const& state, std::size_t sampleCount, Rng& rng);

/// One friend-set update over every item against the same snapshot, then
/// cofriends rebuild and the clustering rate of the new graph.
std::pair<KnnState, RoundStats> runRound(KnnState const& state, RankingSystem const& rs,
                                         DescentConfig const& cfg);

/// Random K-out initialization followed by rounds until cfg.stopRule fires
/// or the round cap is reached.
DescentResult run(RankingSystem const& rs, DescentConfig const& cfg);

}  // namespace knnd
