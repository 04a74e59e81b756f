#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knnd/descent.hpp"
#include "knnd/similarity.hpp"

namespace knnd::bench {

enum class RecallMode { sample6, full, off };
enum class OutputFormat { csv, json };

RecallMode parseRecallMode(std::string_view name);
OutputFormat parseOutputFormat(std::string_view name);
std::string_view toString(RecallMode mode);

/// Full-population recall above this n needs forceOracle.
inline constexpr std::size_t kOracleGuard = 100'000;
inline constexpr std::size_t kRecallSampleSize = 6;

struct ExperimentSpec {
  std::size_t n = 20'000;
  std::size_t dim = 10;
  std::size_t k = 16;
  std::uint64_t seed = 1;
  std::size_t fccSampleCount = 1000;
  std::optional<std::size_t> maxRounds;
  std::size_t workerCount = 0;
  RankingKind ranking = RankingKind::kl;
  RecallMode recallMode = RecallMode::sample6;
  bool forceOracle = false;
  /// When set, points are read from this file instead of sampled.
  std::optional<std::string> inputPath;

  /// Throws ConfigError unless n > K >= 2 and dim >= 2.
  void validate() const;
  DescentConfig descentConfig() const;
};

struct ExperimentReport {
  ExperimentSpec spec;
  std::vector<RoundStats> rounds;
  std::size_t roundsUsed = 0;
  std::size_t roundBudget = 0;
  double initialFcc = 0.0;
  double finalFcc = 0.0;
  std::optional<double> recall;
  double totalSeconds = 0.0;
  /// Final graph; not part of the emitted report.
  FriendMap friends;
};

/// Generates (or loads) data, runs the descent and measures recall.
/// Progress lines go to `log` when given.
ExperimentReport runExperiment(ExperimentSpec const& spec, std::ostream* log = nullptr);

/// One report per dimension; data are resampled per d, the descent seed is
/// shared.
std::vector<ExperimentReport> dimensionSweep(ExperimentSpec const& base,
                                             std::vector<std::size_t> const& dims,
                                             std::ostream* log = nullptr);

std::string emitReport(ExperimentReport const& report, OutputFormat format);
std::string emitSweep(std::vector<ExperimentReport> const& reports, OutputFormat format);

}  // namespace knnd::bench
