#include "knnd/experiment.hpp"

#include <json.hpp>

#include <array>
#include <charconv>
#include <chrono>
#include <memory>
#include <ostream>
#include <sstream>

#include "knnd/dataset_io.hpp"
#include "knnd/evaluation.hpp"

namespace knnd::bench {

RecallMode parseRecallMode(std::string_view name) {
  if (name == "sample6") return RecallMode::sample6;
  if (name == "full") return RecallMode::full;
  if (name == "off") return RecallMode::off;
  throw ConfigError("unknown recall mode '" + std::string(name) + "'");
}

OutputFormat parseOutputFormat(std::string_view name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + std::string(name) + "'");
}

std::string_view toString(RecallMode mode) {
  switch (mode) {
    case RecallMode::sample6: return "sample6";
    case RecallMode::full: return "full";
    case RecallMode::off: return "off";
  }
  return "off";
}

void ExperimentSpec::validate() const {
  if (k < 2) throw ConfigError("K must be at least 2");
  if (n <= k) throw ConfigError("n must exceed K");
  if (dim < 2) throw ConfigError("dimension must be at least 2");
  if (recallMode == RecallMode::full && n > kOracleGuard && !forceOracle) {
    throw ConfigError("full recall above n=100000 runs the O(n^2) oracle; pass --force-oracle");
  }
  descentConfig().validate();
}

DescentConfig ExperimentSpec::descentConfig() const {
  DescentConfig cfg;
  cfg.k = k;
  cfg.fccSampleCount = fccSampleCount;
  cfg.maxRounds = maxRounds;
  cfg.seed = seed;
  cfg.workerCount = workerCount;
  return cfg;
}

namespace {

struct LoadedData {
  std::optional<Dataset<SimplexPoint>> simplex;
  std::optional<Dataset<RealVector>> vectors;
  std::unique_ptr<RankingSystem> ranking;
};

LoadedData prepare(ExperimentSpec& spec) {
  LoadedData data;
  if (!spec.inputPath) {
    data.simplex = sampleSimplexUniform(spec.dim, spec.n, spec.seed);
    data.ranking = makeRanking(spec.ranking, *data.simplex);
    return data;
  }
  data.vectors = io::load(*spec.inputPath);
  spec.n = data.vectors->size();
  spec.dim = (*data.vectors)[0].size();
  if (spec.ranking == RankingKind::kl) {
    data.simplex = io::toSimplexPoints(*data.vectors);
    data.ranking = std::make_unique<KlRanking>(*data.simplex);
  } else {
    data.ranking = std::make_unique<EuclideanRanking>(*data.vectors);
  }
  return data;
}

}  // namespace

ExperimentReport runExperiment(ExperimentSpec const& spec, std::ostream* log) {
  ExperimentReport report;
  report.spec = spec;
  if (!spec.inputPath) report.spec.validate();
  auto data = prepare(report.spec);
  report.spec.validate();  // n and dim may come from the input file
  auto const& rs = *data.ranking;

  if (log) {
    *log << "descent: n=" << report.spec.n << " dim=" << report.spec.dim
         << " K=" << report.spec.k << " ranking=" << toString(report.spec.ranking)
         << " seed=" << report.spec.seed << '\n';
  }
  auto result = run(rs, report.spec.descentConfig());
  report.rounds = result.rounds;
  report.roundsUsed = result.rounds.size();
  report.roundBudget = roundBudget(report.spec.n, report.spec.k);
  report.initialFcc = result.initialFcc;
  report.finalFcc = result.rounds.empty() ? result.initialFcc : result.rounds.back().fcc;
  for (auto const& r : result.rounds) {
    report.totalSeconds += r.durationSeconds;
    if (log) {
      *log << "  round " << r.roundIndex << ": fcc=" << r.fcc
           << " changed=" << r.changedFriendSets << " comparisons=" << r.comparisonCount
           << " time=" << r.durationSeconds << "s\n";
    }
  }
  report.friends = std::move(result.friends);

  switch (report.spec.recallMode) {
    case RecallMode::off:
      break;
    case RecallMode::sample6: {
      auto rng = substream(report.spec.seed, streams::kRecallSample);
      auto const sample = sampleIds(report.spec.n, kRecallSampleSize, rng);
      report.recall = recall(report.friends, rs, sample);
      break;
    }
    case RecallMode::full: {
      auto const exact = exactKnn(rs, report.spec.k, report.spec.workerCount);
      report.recall = recall(report.friends, exact, allIds(report.spec.n));
      break;
    }
  }
  if (log && report.recall) *log << "  recall=" << *report.recall << '\n';
  return report;
}

std::vector<ExperimentReport> dimensionSweep(ExperimentSpec const& base,
                                             std::vector<std::size_t> const& dims,
                                             std::ostream* log) {
  if (dims.empty()) throw ConfigError("dimension sweep needs at least one dimension");
  if (base.inputPath) throw ConfigError("dimension sweep samples its own data");
  std::vector<ExperimentReport> reports;
  for (auto d : dims) {
    auto spec = base;
    spec.dim = d;
    reports.push_back(runExperiment(spec, log));
  }
  return reports;
}

namespace {

std::string num(double v) {
  std::array<char, 32> buf{};
  auto const res =
      std::to_chars(buf.data(), buf.data() + buf.size(), v, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

nlohmann::json specJson(ExperimentSpec const& s) {
  nlohmann::json j;
  j["n"] = s.n;
  j["dim"] = s.dim;
  j["k"] = s.k;
  j["seed"] = s.seed;
  j["ranking"] = toString(s.ranking);
  j["fcc_samples"] = s.fccSampleCount;
  j["max_rounds"] = s.maxRounds ? nlohmann::json(*s.maxRounds) : nlohmann::json(nullptr);
  j["workers"] = s.workerCount;
  j["recall_mode"] = toString(s.recallMode);
  return j;
}

nlohmann::json summaryJson(ExperimentReport const& r) {
  nlohmann::json j;
  j["rounds_used"] = r.roundsUsed;
  j["round_budget"] = r.roundBudget;
  j["initial_fcc"] = r.initialFcc;
  j["final_fcc"] = r.finalFcc;
  j["recall"] = r.recall ? nlohmann::json(*r.recall) : nlohmann::json(nullptr);
  j["first_round_sec"] = r.rounds.empty() ? 0.0 : r.rounds.front().durationSeconds;
  j["last_round_sec"] = r.rounds.empty() ? 0.0 : r.rounds.back().durationSeconds;
  j["total_duration_sec"] = r.totalSeconds;
  return j;
}

nlohmann::json reportJson(ExperimentReport const& r) {
  nlohmann::json j;
  j["spec"] = specJson(r.spec);
  j["rounds"] = nlohmann::json::array();
  for (auto const& s : r.rounds) {
    j["rounds"].push_back({{"round", s.roundIndex},
                           {"duration_sec", s.durationSeconds},
                           {"fcc", s.fcc},
                           {"changed_friend_sets", s.changedFriendSets},
                           {"comparison_count", s.comparisonCount}});
  }
  j["summary"] = summaryJson(r);
  return j;
}

}  // namespace

std::string emitReport(ExperimentReport const& r, OutputFormat format) {
  if (format == OutputFormat::json) return reportJson(r).dump(2) + "\n";

  std::ostringstream out;
  out << "record,round,duration_sec,fcc,changed_friend_sets,comparison_count,"
         "n,dim,k,seed,ranking,rounds_used,round_budget,initial_fcc,final_fcc,recall,"
         "total_duration_sec\n";
  for (auto const& s : r.rounds) {
    out << "round," << s.roundIndex << ',' << num(s.durationSeconds) << ',' << num(s.fcc) << ','
        << s.changedFriendSets << ',' << s.comparisonCount << ",,,,,,,,,,,\n";
  }
  out << "summary,,,,,," << r.spec.n << ',' << r.spec.dim << ',' << r.spec.k << ','
      << r.spec.seed << ',' << toString(r.spec.ranking) << ',' << r.roundsUsed << ','
      << r.roundBudget << ',' << num(r.initialFcc) << ',' << num(r.finalFcc) << ','
      << (r.recall ? num(*r.recall) : "") << ',' << num(r.totalSeconds) << '\n';
  return out.str();
}

std::string emitSweep(std::vector<ExperimentReport> const& reports, OutputFormat format) {
  if (format == OutputFormat::json) {
    nlohmann::json j;
    j["reports"] = nlohmann::json::array();
    nlohmann::json dims = nlohmann::json::array();
    nlohmann::json fcc = nlohmann::json::array();
    nlohmann::json rec = nlohmann::json::array();
    for (auto const& r : reports) {
      j["reports"].push_back(reportJson(r));
      dims.push_back(r.spec.dim);
      fcc.push_back(r.finalFcc);
      rec.push_back(r.recall ? nlohmann::json(*r.recall) : nlohmann::json(nullptr));
    }
    j["table"] = {{"dim", dims}, {"final_fcc", fcc}, {"recall", rec}};
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "dim,n,k,seed,rounds_used,round_budget,initial_fcc,final_fcc,recall,total_duration_sec\n";
  for (auto const& r : reports) {
    out << r.spec.dim << ',' << r.spec.n << ',' << r.spec.k << ',' << r.spec.seed << ','
        << r.roundsUsed << ',' << r.roundBudget << ',' << num(r.initialFcc) << ','
        << num(r.finalFcc) << ',' << (r.recall ? num(*r.recall) : "") << ','
        << num(r.totalSeconds) << '\n';
  }
  return out.str();
}

}  // namespace knnd::bench
