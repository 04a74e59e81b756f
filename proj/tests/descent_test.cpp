#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "knnd/descent.hpp"
#include "knnd/evaluation.hpp"
#include "knnd/similarity.hpp"
#include "test_support.hpp"

namespace knnd {
namespace {

std::vector<ItemId> asVector(std::span<ItemId const> s) { return {s.begin(), s.end()}; }

KnnState stateFrom(std::vector<std::vector<ItemId>> const& rows) {
  KnnState s;
  s.friends = FriendMap(rows.size(), rows.front().size());
  for (ItemId x = 0; x < rows.size(); ++x) {
    std::copy(rows[x].begin(), rows[x].end(), s.friends.row(x).begin());
  }
  s.cofriends = buildCoFriends(s.friends);
  return s;
}

void expectSortedRows(KnnState const& s, RankingSystem const& rs) {
  for (ItemId x = 0; x < s.friends.size(); ++x) {
    auto const row = s.friends.friends(x);
    for (std::size_t i = 1; i < row.size(); ++i) {
      ASSERT_TRUE(rs.precedes(x, row[i - 1], row[i]));
    }
  }
}

TEST(RoundBudget, MatchesTableColumn) {
  EXPECT_EQ(roundBudget(20'000, 16), 8u);
  EXPECT_EQ(roundBudget(20'000, 32), 6u);
  EXPECT_EQ(roundBudget(200'000, 16), 10u);
  EXPECT_EQ(roundBudget(200'000, 32), 8u);
  EXPECT_EQ(roundBudget(2'000'000, 16), 12u);
  EXPECT_EQ(roundBudget(2'000'000, 32), 10u);
  EXPECT_EQ(roundBudget(2'000'000, 64), 8u);
  // Exact powers must not round up.
  EXPECT_EQ(roundBudget(4096, 16), 6u);
  EXPECT_EQ(roundBudget(4097, 16), 8u);
}

TEST(DescentConfig, Validation) {
  DescentConfig cfg;
  cfg.k = 1;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.k = 2;
  cfg.maxRounds = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.maxRounds.reset();
  cfg.fccSampleCount = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  DescentConfig ok;
  EXPECT_EQ(effectiveMaxRounds(ok, 20'000), 12u);
}

TEST(InitRandomKOut, OutDegreeExactNoSelfLoops) {
  auto const pts = sampleSimplexUniform(3, 5, 1);
  KlRanking rs(pts);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    DescentConfig cfg;
    cfg.k = 2;
    cfg.seed = seed;
    auto const s = initRandomKOut(rs, cfg);
    EXPECT_NO_THROW(s.friends.validate());
    expectSortedRows(s, rs);
  }
}

TEST(InitRandomKOut, ForcedWhenNIsKPlusOne) {
  auto const pts = sampleSimplexUniform(4, 9, 2);
  KlRanking rs(pts);
  DescentConfig cfg;
  cfg.k = 8;
  auto const s = initRandomKOut(rs, cfg);
  for (ItemId x = 0; x < 9; ++x) {
    auto row = asVector(s.friends.friends(x));
    auto const exact = exactNeighbors(rs, x, 8);
    EXPECT_EQ(row, exact);  // all of S \ {x}, in sorted order
  }
}

TEST(InitRandomKOut, DeterministicGivenSeed) {
  auto const pts = sampleSimplexUniform(5, 1000, 4);
  KlRanking rs(pts);
  DescentConfig cfg;
  cfg.k = 8;
  cfg.seed = 42;
  cfg.workerCount = 1;
  auto const a = initRandomKOut(rs, cfg);
  cfg.workerCount = 4;
  auto const b = initRandomKOut(rs, cfg);
  EXPECT_EQ(a.friends, b.friends);
  cfg.seed = 43;
  EXPECT_FALSE(initRandomKOut(rs, cfg).friends == a.friends);
}

TEST(InitRandomKOut, RejectsTooFewItems) {
  auto const pts = sampleSimplexUniform(3, 4, 1);
  KlRanking rs(pts);
  DescentConfig cfg;
  cfg.k = 4;
  EXPECT_THROW(initRandomKOut(rs, cfg), ConfigError);
}

TEST(InitRandomKOut, FriendChoiceIsRoughlyUniform) {
  // Each of the other n-1 items should be picked as a friend about K/(n-1)
  // of the time.
  auto const pts = sampleSimplexUniform(3, 11, 5);
  EuclideanRanking rs(pts);
  std::vector<int> hits(11, 0);
  int const runs = 4000;
  for (int r = 0; r < runs; ++r) {
    DescentConfig cfg;
    cfg.k = 3;
    cfg.seed = static_cast<std::uint64_t>(r);
    auto const s = initRandomKOut(rs, cfg);
    for (ItemId y : s.friends.friends(0)) ++hits[y];
  }
  EXPECT_EQ(hits[0], 0);
  double const expected = runs * 3.0 / 10.0;
  for (ItemId y = 1; y < 11; ++y) EXPECT_NEAR(hits[y], expected, 5 * std::sqrt(expected));
}

TEST(CandidateSet, SaturatedTriangleIsEmpty) {
  auto const s = stateFrom({{1, 2}, {0, 2}, {0, 1}});
  for (ItemId x = 0; x < 3; ++x) EXPECT_TRUE(candidateSet(x, s).empty());
}

TEST(CandidateSet, ThreeCycleHandTrace) {
  // cofriends(0) = {2}; friends of friends = friends(1) = {2};
  // friends of cofriends = friends(2) = {0}, dropped as self.
  auto const s = stateFrom({{1}, {2}, {0}});
  EXPECT_EQ(candidateSet(0, s), std::vector<ItemId>{2});
}

TEST(CandidateSet, ExcludesSelfAndFriendsAndMatchesUnion) {
  auto const pts = sampleSimplexUniform(4, 300, 9);
  KlRanking rs(pts);
  DescentConfig cfg;
  cfg.k = 6;
  auto const s = initRandomKOut(rs, cfg);
  for (ItemId x = 0; x < 300; x += 7) {
    auto const c = candidateSet(x, s);
    std::set<ItemId> expected;
    for (ItemId y : s.cofriends.cofriends(x)) expected.insert(y);
    for (ItemId f : s.friends.friends(x)) {
      for (ItemId ff : s.friends.friends(f)) expected.insert(ff);
    }
    for (ItemId y : s.cofriends.cofriends(x)) {
      for (ItemId yf : s.friends.friends(y)) expected.insert(yf);
    }
    expected.erase(x);
    for (ItemId f : s.friends.friends(x)) expected.erase(f);
    EXPECT_EQ(c, std::vector<ItemId>(expected.begin(), expected.end()));
  }
}

TEST(ProposeNewFriendSet, NoCandidatesKeepsFriends) {
  auto const data = testing::linePoints({0, 1, 2});
  EuclideanRanking rs(data);
  auto const s = stateFrom({{1, 2}, {0, 2}, {1, 0}});
  for (ItemId x = 0; x < 3; ++x) {
    auto const set = proposeNewFriendSet(x, s, rs);
    EXPECT_EQ(asVector(set.members()), asVector(s.friends.friends(x)));
  }
}

TEST(ProposeNewFriendSet, LineMatchesExhaustiveSortOfUnion) {
  std::vector<double> xs;
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int i = 0; i < 20; ++i) xs.push_back(u(rng));
  auto const data = testing::linePoints(xs);
  EuclideanRanking rs(data);
  DescentConfig cfg;
  cfg.k = 2;
  cfg.seed = 8;
  auto const s = initRandomKOut(rs, cfg);
  for (ItemId x = 0; x < 20; ++x) {
    auto pool = candidateSet(x, s);
    for (ItemId f : s.friends.friends(x)) pool.push_back(f);
    std::sort(pool.begin(), pool.end(), [&](ItemId a, ItemId b) {
      double const da = std::abs(xs[a] - xs[x]);
      double const db = std::abs(xs[b] - xs[x]);
      return da != db ? da < db : a < b;
    });
    pool.resize(2);
    auto const set = proposeNewFriendSet(x, s, rs);
    EXPECT_EQ(asVector(set.members()), pool) << "x=" << x;
    EXPECT_FALSE(set.contains(x));
  }
}

TEST(FriendClusteringRate, CompleteDigraphIsOne) {
  auto const s = stateFrom({{1, 2}, {0, 2}, {0, 1}});
  Rng rng(1);
  EXPECT_DOUBLE_EQ(friendClusteringRate(s, 1, rng), 1.0);
  EXPECT_DOUBLE_EQ(friendClusteringRate(s, 500, rng), 1.0);
}

TEST(FriendClusteringRate, NonAdjacentFriendsIsZero) {
  // friends(x) = {x+1, x+3} mod 8: x+1 and x+3 are never adjacent.
  std::vector<std::vector<ItemId>> rows;
  for (ItemId x = 0; x < 8; ++x) rows.push_back({(x + 1) % 8, (x + 3) % 8});
  auto const s = stateFrom(rows);
  Rng rng(1);
  EXPECT_DOUBLE_EQ(friendClusteringRate(s, 1000, rng), 0.0);
}

TEST(FriendClusteringRate, ErrorsOnDegenerateInput) {
  auto const s = stateFrom({{1}, {2}, {0}});
  Rng rng(1);
  EXPECT_THROW(friendClusteringRate(s, 10, rng), ConfigError);
  auto const t = stateFrom({{1, 2}, {0, 2}, {0, 1}});
  EXPECT_THROW(friendClusteringRate(t, 0, rng), ConfigError);
}

TEST(FriendClusteringRate, FreshRandomGraphNearZero) {
  auto const pts = sampleSimplexUniform(10, 20'000, 1);
  KlRanking rs(pts);
  DescentConfig cfg;
  cfg.k = 16;
  auto const s = initRandomKOut(rs, cfg);
  Rng rng(3);
  EXPECT_LT(friendClusteringRate(s, 1000, rng), 0.05);
}

TEST(RunRound, FixedPointIsIdentity) {
  // Exact K-NN graph of points on a line with K = n-1 has no candidates.
  auto const data = testing::linePoints({0, 1, 3, 7, 15});
  EuclideanRanking rs(data);
  DescentConfig cfg;
  cfg.k = 4;
  auto const exact = exactKnn(rs, 4);
  KnnState s;
  s.friends = FriendMap(5, 4);
  for (ItemId x = 0; x < 5; ++x) {
    auto const row = exact.neighbors(x);
    std::copy(row.begin(), row.end(), s.friends.row(x).begin());
  }
  s.cofriends = buildCoFriends(s.friends);
  auto const [next, stats] = runRound(s, rs, cfg);
  EXPECT_EQ(next.friends, s.friends);
  EXPECT_EQ(next.cofriends, s.cofriends);
  EXPECT_EQ(stats.changedFriendSets, 0u);
  EXPECT_EQ(stats.roundIndex, 1u);
}

TEST(RunRound, SameResultForAnyWorkerCount) {
  auto const pts = sampleSimplexUniform(6, 3000, 12);
  KlRanking rs(pts);
  DescentConfig cfg;
  cfg.k = 8;
  cfg.seed = 5;
  cfg.workerCount = 1;
  auto const s = initRandomKOut(rs, cfg);
  auto const [a, sa] = runRound(s, rs, cfg);
  cfg.workerCount = 8;
  auto const [b, sb] = runRound(s, rs, cfg);
  EXPECT_EQ(a.friends, b.friends);
  EXPECT_EQ(sa.comparisonCount, sb.comparisonCount);
  EXPECT_EQ(sa.changedFriendSets, sb.changedFriendSets);
  EXPECT_EQ(sa.fcc, sb.fcc);
}

TEST(RunRound, InvariantsAndComparisonBound) {
  auto const pts = sampleSimplexUniform(10, 4000, 6);
  KlRanking rs(pts);
  DescentConfig cfg;
  cfg.k = 8;
  cfg.seed = 2;
  auto state = initRandomKOut(rs, cfg);
  double const k = 8.0;
  for (int r = 0; r < 6; ++r) {
    auto [next, stats] = runRound(state, rs, cfg);
    ASSERT_NO_THROW(next.friends.validate());
    ASSERT_EQ(next.cofriends, buildCoFriends(next.friends));
    expectSortedRows(next, rs);
    EXPECT_LE(static_cast<double>(stats.comparisonCount), 3.0 * 4000 * (k + 2 * k * k));
    EXPECT_GE(stats.fcc, 0.0);
    EXPECT_LE(stats.fcc, 1.0);
    // Monotone improvement: the new K-th friend never ranks behind the old one.
    for (ItemId x = 0; x < 4000; ++x) {
      auto const oldLast = state.friends.friends(x).back();
      auto const newLast = next.friends.friends(x).back();
      ASSERT_TRUE(newLast == oldLast || rs.precedes(x, newLast, oldLast));
    }
    state = std::move(next);
  }
}

TEST(Run, SingleRoundBudget) {
  auto const pts = sampleSimplexUniform(5, 500, 3);
  KlRanking rs(pts);
  DescentConfig cfg;
  cfg.k = 4;
  cfg.maxRounds = 1;
  auto const result = run(rs, cfg);
  ASSERT_EQ(result.rounds.size(), 1u);
  EXPECT_EQ(result.rounds[0].roundIndex, 1u);
}

TEST(Run, StopsWhenClusteringRateStopsIncreasing) {
  auto const pts = sampleSimplexUniform(10, 3000, 3);
  KlRanking rs(pts);
  DescentConfig cfg;
  cfg.k = 8;
  cfg.seed = 17;
  auto const result = run(rs, cfg);
  auto const& r = result.rounds;
  ASSERT_FALSE(r.empty());
  bool const capped = r.size() == effectiveMaxRounds(cfg, 3000);
  for (std::size_t i = 1; i + 1 < r.size(); ++i) EXPECT_GT(r[i].fcc, r[i - 1].fcc);
  if (!capped) {
    ASSERT_GE(r.size(), 2u);
    EXPECT_LE(r.back().fcc, r[r.size() - 2].fcc);
  }
}

TEST(Run, TinyInstanceRecallAgainstOracle) {
  auto const pts = sampleSimplexUniform(4, 30, 21);
  KlRanking rs(pts);
  DescentConfig cfg;
  cfg.k = 4;
  cfg.seed = 1;
  auto const result = run(rs, cfg);
  auto const exact = exactKnn(rs, 4);
  EXPECT_GE(recall(result.friends, exact, allIds(30)), 0.9);
}

TEST(Run, FixedPointRuleEndsOnUnchangedRound) {
  auto const pts = sampleSimplexUniform(3, 200, 2);
  EuclideanRanking rs(pts);
  DescentConfig cfg;
  cfg.k = 4;
  cfg.maxRounds = 100;
  cfg.stopRule = StopRule::fixedPoint;
  auto const result = run(rs, cfg);
  ASSERT_LT(result.rounds.size(), 100u);
  EXPECT_EQ(result.rounds.back().changedFriendSets, 0u);
}

}  // namespace
}  // namespace knnd
