#include "knnd/similarity.hpp"

#include <cmath>
#include <random>
#include <string>

#include "knnd/rng.hpp"

namespace knnd {

SimplexPoint::SimplexPoint(RealVector coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw ConfigError("simplex point needs at least two coordinates");
  double sum = 0.0;
  for (double c : coords_) {
    if (!(c > 0.0)) throw ConfigError("simplex point coordinates must be strictly positive");
    sum += c;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    throw ConfigError("simplex point coordinates must sum to 1");
  }
}

double klDivergence(std::span<double const> x, std::span<double const> y) {
  if (x.size() != y.size()) throw ConfigError("klDivergence: dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw ConfigError("klDivergence: coordinates must be strictly positive");
    }
    // Same expression as KlRanking::score so both give bit-identical values.
    sum += x[i] * (std::log(x[i]) - std::log(y[i]));
  }
  return sum;
}

double squaredEuclidean(std::span<double const> x, std::span<double const> y) {
  if (x.size() != y.size()) throw ConfigError("squaredEuclidean: dimension mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double const diff = x[i] - y[i];
    sum += diff * diff;
  }
  return sum;
}

Dataset<SimplexPoint> sampleSimplexUniform(std::size_t d, std::size_t n, std::uint64_t seed,
                                           double concentration) {
  if (d < 2) throw ConfigError("simplex sampling needs d >= 2");
  if (!(concentration > 0.0)) throw ConfigError("Dirichlet concentration must be positive");
  auto rng = substream(seed, streams::kData, d);
  std::exponential_distribution<double> exponential(1.0);
  std::gamma_distribution<double> gamma(concentration, 1.0);
  auto draw = [&] { return concentration == 1.0 ? exponential(rng) : gamma(rng); };

  std::vector<SimplexPoint> points;
  points.reserve(n);
  RealVector coords(d);
  while (points.size() < n) {
    double sum = 0.0;
    for (auto& c : coords) {
      c = draw();
      sum += c;
    }
    bool interior = sum > 0.0;
    for (auto& c : coords) {
      c /= sum;
      interior = interior && c > 0.0;
    }
    // A zero variate would land on the boundary; redraw (probability ~0).
    if (interior) points.emplace_back(coords);
  }
  return Dataset<SimplexPoint>(std::move(points));
}

KlRanking::KlRanking(Dataset<SimplexPoint> const& data) : points_(data) {
  logs_.resize(points_.size() * points_.dim());
  for (ItemId id = 0; id < points_.size(); ++id) {
    auto const row = points_.row(id);
    for (std::size_t i = 0; i < row.size(); ++i) {
      logs_[std::size_t{id} * points_.dim() + i] = std::log(row[i]);
    }
  }
}

double KlRanking::score(ItemId anchor, ItemId other) const {
  auto const d = points_.dim();
  auto const x = points_.row(anchor);
  double const* lx = logs_.data() + std::size_t{anchor} * d;
  double const* ly = logs_.data() + std::size_t{other} * d;
  double sum = 0.0;
  for (std::size_t i = 0; i < d; ++i) sum += x[i] * (lx[i] - ly[i]);
  return sum;
}

RankingKind parseRankingKind(std::string_view name) {
  if (name == "kl") return RankingKind::kl;
  if (name == "euclidean") return RankingKind::euclidean;
  throw ConfigError("unknown ranking '" + std::string(name) + "' (expected kl or euclidean)");
}

std::string_view toString(RankingKind kind) {
  return kind == RankingKind::kl ? "kl" : "euclidean";
}

std::unique_ptr<ScoredRankingSystem> makeRanking(RankingKind kind,
                                                 Dataset<SimplexPoint> const& data) {
  if (kind == RankingKind::kl) return std::make_unique<KlRanking>(data);
  return std::make_unique<EuclideanRanking>(data);
}

}  // namespace knnd
