#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "knnd/core.hpp"

namespace knnd {

using RealVector = std::vector<double>;

/// Point in the interior of the probability simplex: d strictly positive
/// coordinates summing to one (simplex dimension d-1).
class SimplexPoint {
 public:
  static constexpr double kSumTolerance = 1e-12;

  /// Throws ConfigError on d < 2, non-positive coordinates, or a sum that
  /// misses 1 by more than kSumTolerance.
  explicit SimplexPoint(RealVector coords);

  std::size_t dim() const noexcept { return coords_.size(); }
  std::span<double const> coords() const noexcept { return coords_; }

 private:
  RealVector coords_;
};

inline std::span<double const> coordinates(SimplexPoint const& p) { return p.coords(); }
inline std::span<double const> coordinates(RealVector const& v) { return v; }

/// Kullback-Leibler divergence D(x || y) = sum_i x_i log(x_i / y_i), in nats.
double klDivergence(std::span<double const> x, std::span<double const> y);
inline double klDivergence(SimplexPoint const& x, SimplexPoint const& y) {
  return klDivergence(x.coords(), y.coords());
}

double squaredEuclidean(std::span<double const> x, std::span<double const> y);

/// n i.i.d. Dirichlet(alpha, ..., alpha) draws in d coordinates via
/// normalized Gamma(alpha) variates; alpha = 1 is uniform on the simplex.
Dataset<SimplexPoint> sampleSimplexUniform(std::size_t d, std::size_t n, std::uint64_t seed,
                                           double concentration = 1.0);

/// Row-major n x d copy of a dataset's coordinates.
class PointMatrix {
 public:
  template <class T>
  explicit PointMatrix(Dataset<T> const& data) : n_(data.size()), d_(coordinates(data[0]).size()) {
    values_.reserve(n_ * d_);
    for (auto const& item : data.items()) {
      auto const c = coordinates(item);
      if (c.size() != d_) throw ConfigError("points have mismatched dimensions");
      values_.insert(values_.end(), c.begin(), c.end());
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }
  std::span<double const> row(ItemId id) const noexcept {
    return {values_.data() + std::size_t{id} * d_, d_};
  }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<double> values_;
};

/// y precedes z for anchor x when D(x || y) < D(x || z).
class KlRanking final : public ScoredRankingSystem {
 public:
  explicit KlRanking(Dataset<SimplexPoint> const& data);

  std::size_t size() const noexcept override { return points_.size(); }
  double score(ItemId anchor, ItemId other) const override;

 private:
  PointMatrix points_;
  std::vector<double> logs_;
};

/// Orders by squared Euclidean distance (same order as the distance).
class EuclideanRanking final : public ScoredRankingSystem {
 public:
  template <class T>
  explicit EuclideanRanking(Dataset<T> const& data) : points_(data) {}

  std::size_t size() const noexcept override { return points_.size(); }
  double score(ItemId anchor, ItemId other) const override {
    return squaredEuclidean(points_.row(anchor), points_.row(other));
  }

 private:
  PointMatrix points_;
};

/// Ranking by a user-supplied symmetric distance rho over the item type.
template <class T, class Distance>
using MetricRanking = ScoreRanking<T, Distance>;

enum class RankingKind { kl, euclidean };

RankingKind parseRankingKind(std::string_view name);
std::string_view toString(RankingKind kind);

std::unique_ptr<ScoredRankingSystem> makeRanking(RankingKind kind,
                                                 Dataset<SimplexPoint> const& data);

}  // namespace knnd
