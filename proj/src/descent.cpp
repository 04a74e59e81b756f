#include "knnd/descent.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <limits>

namespace knnd {

void DescentConfig::validate() const {
  if (k < 2) throw ConfigError("K must be at least 2");
  if (fccSampleCount == 0) throw ConfigError("fccSampleCount must be positive");
  if (maxRounds && *maxRounds == 0) throw ConfigError("maxRounds must be positive");
}

std::size_t roundBudget(std::size_t n, std::size_t k) {
  if (k < 2) throw ConfigError("roundBudget: K must be at least 2");
  std::size_t exponent = 0;
  std::size_t power = 1;
  while (power < n) {
    power = power > std::numeric_limits<std::size_t>::max() / k ? n : power * k;
    ++exponent;
  }
  return 2 * exponent;
}

std::size_t effectiveMaxRounds(DescentConfig const& cfg, std::size_t n) {
  return cfg.maxRounds ? *cfg.maxRounds : roundBudget(n, cfg.k) + 4;
}

namespace {

int resolveWorkers(std::size_t requested) {
  return requested == 0 ? omp_get_max_threads() : static_cast<int>(requested);
}

void checkSizes(RankingSystem const& rs, DescentConfig const& cfg) {
  cfg.validate();
  if (rs.size() <= cfg.k) {
    throw ConfigError("need more items than K");
  }
}

// Epoch-stamped visited marks, reused across anchors by one worker.
class CandidateScratch {
 public:
  explicit CandidateScratch(std::size_t n) : stamp_(n, 0) {}

  void reset() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
    items_.clear();
  }
  void exclude(ItemId id) { stamp_[id] = epoch_; }
  void offer(ItemId id) {
    if (stamp_[id] != epoch_) {
      stamp_[id] = epoch_;
      items_.push_back(id);
    }
  }
  std::vector<ItemId> const& items() const { return items_; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
  std::vector<ItemId> items_;
};

void gatherCandidates(ItemId x, KnnState const& state, CandidateScratch& scratch) {
  scratch.reset();
  scratch.exclude(x);
  auto const friends = state.friends.friends(x);
  auto const cofriends = state.cofriends.cofriends(x);
  for (ItemId f : friends) scratch.exclude(f);
  for (ItemId c : cofriends) scratch.offer(c);
  for (ItemId f : friends) {
    for (ItemId ff : state.friends.friends(f)) scratch.offer(ff);
  }
  for (ItemId c : cofriends) {
    for (ItemId cf : state.friends.friends(c)) scratch.offer(cf);
  }
}

BoundedNeighborSet propose(ItemId x, KnnState const& state, RankingSystem const& rs,
                           CandidateScratch& scratch) {
  auto set = BoundedNeighborSet::fromSorted(x, state.friends.k(), state.friends.friends(x));
  gatherCandidates(x, state, scratch);
  for (ItemId c : scratch.items()) set.insert(rs, c);
  return set;
}

}  // namespace

KnnState initRandomKOut(RankingSystem const& rs, DescentConfig const& cfg) {
  checkSizes(rs, cfg);
  auto const n = rs.size();
  auto const k = cfg.k;
  KnnState state;
  state.friends = FriendMap(n, k);

  auto const workers = resolveWorkers(cfg.workerCount);
#pragma omp parallel num_threads(workers)
  {
    std::vector<ItemId> picked;
    picked.reserve(k);
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      auto const x = static_cast<ItemId>(i);
      auto rng = substream(cfg.seed, streams::kInit, x);
      // Floyd's sampling of K distinct values from [0, n-1), then skip x.
      picked.clear();
      for (std::size_t j = n - 1 - k; j < n - 1; ++j) {
        std::uniform_int_distribution<std::size_t> pick(0, j);
        auto t = static_cast<ItemId>(pick(rng));
        if (std::find(picked.begin(), picked.end(), t) != picked.end()) {
          t = static_cast<ItemId>(j);
        }
        picked.push_back(t);
      }
      BoundedNeighborSet set(x, k);
      for (ItemId t : picked) set.insert(rs, t >= x ? t + 1 : t);
      std::copy(set.members().begin(), set.members().end(), state.friends.row(x).begin());
    }
  }
  state.cofriends = buildCoFriends(state.friends);
  return state;
}

std::vector<ItemId> candidateSet(ItemId x, KnnState const& state) {
  CandidateScratch scratch(state.friends.size());
  gatherCandidates(x, state, scratch);
  std::vector<ItemId> out = scratch.items();
  std::sort(out.begin(), out.end());
  return out;
}

BoundedNeighborSet proposeNewFriendSet(ItemId x, KnnState const& state, RankingSystem const& rs) {
  CandidateScratch scratch(state.friends.size());
  return propose(x, state, rs, scratch);
}

double friendClusteringRate(KnnState const& state, std::size_t sampleCount, Rng& rng) {
  auto const& friends = state.friends;
  if (friends.k() < 2) throw ConfigError("clustering rate needs K >= 2");
  if (sampleCount == 0) throw ConfigError("clustering rate needs at least one sample");
  std::uniform_int_distribution<ItemId> pickPoint(0, static_cast<ItemId>(friends.size() - 1));
  std::uniform_int_distribution<std::size_t> pickFirst(0, friends.k() - 1);
  std::uniform_int_distribution<std::size_t> pickSecond(0, friends.k() - 2);
  std::size_t hits = 0;
  for (std::size_t s = 0; s < sampleCount; ++s) {
    auto const x = pickPoint(rng);
    auto const a = pickFirst(rng);
    auto b = pickSecond(rng);
    if (b >= a) ++b;
    auto const y = friends.friends(x)[a];
    auto const z = friends.friends(x)[b];
    // y is a co-friend of z exactly when z is a friend of y.
    if (friends.isFriend(z, y) || friends.isFriend(y, z)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(sampleCount);
}

std::pair<KnnState, RoundStats> runRound(KnnState const& state, RankingSystem const& rs,
                                         DescentConfig const& cfg) {
  checkSizes(rs, cfg);
  auto const n = state.friends.size();
  auto const k = state.friends.k();
  if (k != cfg.k || n != rs.size()) {
    throw ConfigError("runRound: state does not match config or ranking system");
  }
  auto const start = std::chrono::steady_clock::now();

  KnnState next;
  next.friends = FriendMap(n, k);
  next.round = state.round + 1;
  next.fccHistory = state.fccHistory;

  std::uint64_t comparisons = 0;
  std::size_t changed = 0;
  auto const workers = resolveWorkers(cfg.workerCount);
#pragma omp parallel num_threads(workers) reduction(+ : comparisons, changed)
  {
    CandidateScratch scratch(n);
#pragma omp for schedule(dynamic, 256)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      auto const x = static_cast<ItemId>(i);
      auto const set = propose(x, state, rs, scratch);
      comparisons += set.comparisons();
      auto const old = state.friends.friends(x);
      if (!std::equal(old.begin(), old.end(), set.members().begin())) ++changed;
      std::copy(set.members().begin(), set.members().end(), next.friends.row(x).begin());
    }
  }
  next.cofriends = buildCoFriends(next.friends);

  RoundStats stats;
  stats.roundIndex = next.round;
  stats.comparisonCount = comparisons;
  stats.changedFriendSets = changed;
  auto rng = substream(cfg.seed, streams::kClustering, next.round);
  stats.fcc = friendClusteringRate(next, cfg.fccSampleCount, rng);
  next.fccHistory.push_back(stats.fcc);
  stats.durationSeconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {std::move(next), stats};
}

DescentResult run(RankingSystem const& rs, DescentConfig const& cfg) {
  auto state = initRandomKOut(rs, cfg);
  DescentResult result;
  {
    auto rng = substream(cfg.seed, streams::kClustering, 0);
    result.initialFcc = friendClusteringRate(state, cfg.fccSampleCount, rng);
  }
  auto const maxRounds = effectiveMaxRounds(cfg, rs.size());
  while (result.rounds.size() < maxRounds) {
    auto [next, stats] = runRound(state, rs, cfg);
    state = std::move(next);
    result.rounds.push_back(stats);
    if (cfg.stopRule == StopRule::fixedPoint) {
      if (stats.changedFriendSets == 0) break;
    } else if (result.rounds.size() >= 2) {
      auto const previous = result.rounds[result.rounds.size() - 2].fcc;
      if (stats.fcc <= previous) break;
    }
  }
  result.friends = std::move(state.friends);
  return result;
}

}  // namespace knnd
