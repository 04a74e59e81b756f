// knnd: K-NN Descent experiment runner.
//
//   knnd run     --n 20000 --dim 10 --k 16 --ranking kl --recall sample6 --format json
//   knnd sweep   --dims 10,20,40,60 --n 20000 --k 16 --recall full
//   knnd witness --dim 15 --trials 1000 [--dot graph.dot]
//   knnd generate --n 1000 --dim 10 --out points.csv
//
// Logs go to stderr; the report goes to stdout or --out.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "knnd/dataset_io.hpp"
#include "knnd/evaluation.hpp"
#include "knnd/experiment.hpp"

namespace {

struct Options {
  std::size_t n = 20'000;
  std::size_t dim = 10;
  std::size_t k = 16;
  std::uint64_t seed = 1;
  std::string ranking = "kl";
  std::size_t fccSamples = 1000;
  std::size_t maxRounds = 0;
  std::size_t workers = 0;
  std::string recall = "sample6";
  std::string format = "json";
  std::string out;
  std::string input;
  bool forceOracle = false;
  std::vector<std::size_t> dims{10, 20, 40, 60};
  std::size_t trials = 1000;
  std::string dot;
  double concentration = 1.0;
};

void addDescentFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--n", o.n, "Number of points")->capture_default_str();
  cmd->add_option("--k", o.k, "Neighbors per point (K >= 2)")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  cmd->add_option("--ranking", o.ranking, "kl or euclidean")
      ->check(CLI::IsMember({"kl", "euclidean"}))
      ->capture_default_str();
  cmd->add_option("--fcc-samples", o.fccSamples, "Clustering-rate samples per round")
      ->capture_default_str();
  cmd->add_option("--max-rounds", o.maxRounds, "Round cap (0: 2*ceil(log_K n) + 4)")
      ->capture_default_str();
  cmd->add_option("--workers", o.workers, "Worker threads (0: all)")->capture_default_str();
  cmd->add_option("--recall", o.recall, "sample6, full or off")
      ->check(CLI::IsMember({"sample6", "full", "off"}))
      ->capture_default_str();
  cmd->add_flag("--force-oracle", o.forceOracle, "Allow full recall above n=100000");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", o.out, "Report file (default: stdout)");
}

knnd::bench::ExperimentSpec toSpec(Options const& o) {
  knnd::bench::ExperimentSpec spec;
  spec.n = o.n;
  spec.dim = o.dim;
  spec.k = o.k;
  spec.seed = o.seed;
  spec.ranking = knnd::parseRankingKind(o.ranking);
  spec.fccSampleCount = o.fccSamples;
  if (o.maxRounds > 0) spec.maxRounds = o.maxRounds;
  spec.workerCount = o.workers;
  spec.recallMode = knnd::bench::parseRecallMode(o.recall);
  spec.forceOracle = o.forceOracle;
  if (!o.input.empty()) spec.inputPath = o.input;
  return spec;
}

void write(std::string const& text, std::string const& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  file << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"K-NN Descent over triplet-comparison ranking systems"};
  app.require_subcommand(1);
  Options o;

  auto* run = app.add_subcommand("run", "Build one approximate K-NN graph and report");
  addDescentFlags(run, o);
  run->add_option("--dim", o.dim, "Coordinates per point (simplex dimension is dim-1)")
      ->capture_default_str();
  run->add_option("--input", o.input, "Read points from a .csv or binary file");

  auto* sweep = app.add_subcommand("sweep", "Repeat the experiment across dimensions");
  addDescentFlags(sweep, o);
  sweep->add_option("--dims", o.dims, "Dimensions to sweep")->delimiter(',');

  auto* witness = app.add_subcommand("witness", "Search for a ranking-digraph cycle");
  witness->add_option("--dim", o.dim, "Coordinates per point (>= 3)")->capture_default_str();
  witness->add_option("--trials", o.trials, "Number of 6-point draws")->capture_default_str();
  witness->add_option("--seed", o.seed, "Seed")->capture_default_str();
  witness->add_option("--ranking", o.ranking, "kl or euclidean")
      ->check(CLI::IsMember({"kl", "euclidean"}))
      ->capture_default_str();
  witness->add_option("--dot", o.dot, "Write the witness digraph in DOT format");

  auto* generate = app.add_subcommand("generate", "Sample Dirichlet points to a file");
  generate->add_option("--n", o.n, "Number of points")->capture_default_str();
  generate->add_option("--dim", o.dim, "Coordinates per point")->capture_default_str();
  generate->add_option("--seed", o.seed, "Seed")->capture_default_str();
  generate->add_option("--concentration", o.concentration, "Dirichlet parameter")
      ->capture_default_str();
  generate->add_option("--out", o.out, "Output path (.csv or binary)")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    auto const format = knnd::bench::parseOutputFormat(o.format);
    if (run->parsed()) {
      auto const report = knnd::bench::runExperiment(toSpec(o), &std::cerr);
      write(knnd::bench::emitReport(report, format), o.out);
    } else if (sweep->parsed()) {
      auto const reports = knnd::bench::dimensionSweep(toSpec(o), o.dims, &std::cerr);
      write(knnd::bench::emitSweep(reports, format), o.out);
    } else if (witness->parsed()) {
      auto const found =
          knnd::searchNonMetricWitness(o.dim, o.trials, o.seed, knnd::parseRankingKind(o.ranking));
      if (!found) {
        std::cout << "no cycle found in " << o.trials << " trials\n";
        return 1;
      }
      std::cout << "trial " << found->trial << ": "
                << knnd::formatCycle(found->digraph, found->cycle) << '\n';
      for (std::size_t i = 0; i < found->points.size(); ++i) {
        std::cout << "x" << i + 1 << " =";
        for (double c : found->points[static_cast<knnd::ItemId>(i)].coords()) std::cout << ' ' << c;
        std::cout << '\n';
      }
      if (!o.dot.empty()) write(knnd::toDot(found->digraph, found->cycle), o.dot);
    } else if (generate->parsed()) {
      auto const points = knnd::sampleSimplexUniform(o.dim, o.n, o.seed, o.concentration);
      knnd::io::save(o.out, knnd::io::toVectors(points));
    }
  } catch (std::exception const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
