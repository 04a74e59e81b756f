#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace knnd {

/// Dense index of an item inside a Dataset, in [0, n).
using ItemId = std::uint32_t;

/// Thrown for invalid parameters: n <= K, K < 2, mismatched dimensions, ...
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Indexed collection of opaque items. Ids 0..n-1 map to items in order.
template <class T>
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<T> items) : items_(std::move(items)) {
    if (items_.size() < 2) {
      throw ConfigError("dataset needs at least two items");
    }
  }

  std::size_t size() const noexcept { return items_.size(); }
  T const& operator[](ItemId id) const { return items_[id]; }
  std::span<T const> items() const noexcept { return items_; }

 private:
  std::vector<T> items_;
};

enum class Ordering { less, greater };

/// A ranking system attaches to each anchor x a strict total order on the
/// other items. precedes(x, y, z) is true iff y is more similar to x than z.
/// Implementations must be pure: safe to call concurrently from many threads.
class RankingSystem {
 public:
  virtual ~RankingSystem() = default;

  virtual std::size_t size() const noexcept = 0;

  /// Unchecked hot-path query; x, y, z must be pairwise distinct.
  virtual bool precedes(ItemId x, ItemId y, ItemId z) const = 0;
};

/// Checked three-way comparison. Throws ConfigError unless x, y, z are
/// pairwise distinct and in range.
Ordering compare(RankingSystem const& rs, ItemId x, ItemId y, ItemId z);

/// Ranking induced by a per-anchor score (smaller is more similar). Equal
/// scores fall back to ascending ItemId so the order is always total.
class ScoredRankingSystem : public RankingSystem {
 public:
  virtual double score(ItemId anchor, ItemId other) const = 0;

  bool precedes(ItemId x, ItemId y, ItemId z) const final {
    double const sy = score(x, y);
    double const sz = score(x, z);
    if (sy < sz) return true;
    if (sz < sy) return false;
    return y < z;
  }
};

/// Ranking system backed by an arbitrary user score over a dataset, e.g. a
/// metric rho(x, y) or a divergence D(x || y).
template <class T, class ScoreFn>
class ScoreRanking final : public ScoredRankingSystem {
 public:
  ScoreRanking(Dataset<T> const& data, ScoreFn fn) : data_(&data), fn_(std::move(fn)) {}

  std::size_t size() const noexcept override { return data_->size(); }
  double score(ItemId anchor, ItemId other) const override {
    return static_cast<double>(fn_((*data_)[anchor], (*data_)[other]));
  }

 private:
  Dataset<T> const* data_;
  ScoreFn fn_;
};

/// Ranking system from a triplet comparator cmp(x, y, z) returning <0 when y
/// is closer to x, >0 when z is, and 0 for a tie (broken by ItemId).
template <class T, class TripletCmp>
class ComparatorRanking final : public RankingSystem {
 public:
  ComparatorRanking(Dataset<T> const& data, TripletCmp cmp) : data_(&data), cmp_(std::move(cmp)) {}

  std::size_t size() const noexcept override { return data_->size(); }
  bool precedes(ItemId x, ItemId y, ItemId z) const override {
    auto const c = cmp_((*data_)[x], (*data_)[y], (*data_)[z]);
    if (c < 0) return true;
    if (c > 0) return false;
    return y < z;
  }

 private:
  Dataset<T> const* data_;
  TripletCmp cmp_;
};

}  // namespace knnd
