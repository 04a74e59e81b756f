#include "knnd/evaluation.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>
#include <sstream>

namespace knnd {

namespace {

void selectInto(RankingSystem const& rs, ItemId x, std::size_t k, std::span<ItemId> out,
                std::vector<ItemId>& ids, std::vector<std::pair<double, ItemId>>& scored) {
  auto const n = rs.size();
  if (auto const* s = dynamic_cast<ScoredRankingSystem const*>(&rs)) {
    scored.clear();
    for (ItemId y = 0; y < n; ++y) {
      if (y != x) scored.emplace_back(s->score(x, y), y);
    }
    // (score, id) lexicographic order is exactly the tie-broken ranking.
    std::partial_sort(scored.begin(), scored.begin() + k, scored.end());
    for (std::size_t i = 0; i < k; ++i) out[i] = scored[i].second;
    return;
  }
  ids.clear();
  for (ItemId y = 0; y < n; ++y) {
    if (y != x) ids.push_back(y);
  }
  std::partial_sort(ids.begin(), ids.begin() + k, ids.end(),
                    [&](ItemId a, ItemId b) { return rs.precedes(x, a, b); });
  std::copy_n(ids.begin(), k, out.begin());
}

void checkK(RankingSystem const& rs, std::size_t k) {
  if (k == 0 || rs.size() <= k) throw ConfigError("exact K-NN needs 0 < K < n");
}

}  // namespace

std::vector<ItemId> exactNeighbors(RankingSystem const& rs, ItemId x, std::size_t k) {
  checkK(rs, k);
  if (x >= rs.size()) throw ConfigError("exactNeighbors: id out of range");
  std::vector<ItemId> out(k);
  std::vector<ItemId> ids;
  std::vector<std::pair<double, ItemId>> scored;
  selectInto(rs, x, k, out, ids, scored);
  return out;
}

ExactKnnGraph exactKnn(RankingSystem const& rs, std::size_t k, std::size_t workerCount) {
  checkK(rs, k);
  auto const n = rs.size();
  ExactKnnGraph graph(n, k);
  int const workers = workerCount == 0 ? omp_get_max_threads() : static_cast<int>(workerCount);
#pragma omp parallel num_threads(workers)
  {
    std::vector<ItemId> ids;
    std::vector<std::pair<double, ItemId>> scored;
    ids.reserve(n);
    scored.reserve(n);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
      auto const x = static_cast<ItemId>(i);
      selectInto(rs, x, k, graph.row(x), ids, scored);
    }
  }
  return graph;
}

namespace {

double overlap(std::span<ItemId const> approx, std::span<ItemId const> exact) {
  std::size_t found = 0;
  for (ItemId id : exact) {
    if (std::find(approx.begin(), approx.end(), id) != approx.end()) ++found;
  }
  return static_cast<double>(found) / static_cast<double>(exact.size());
}

void checkSample(std::span<ItemId const> sample, std::size_t n) {
  if (sample.empty()) throw ConfigError("recall: sample must be nonempty");
  for (ItemId x : sample) {
    if (x >= n) throw ConfigError("recall: sample id out of range");
  }
}

}  // namespace

double recall(FriendMap const& approx, ExactKnnGraph const& exact,
              std::span<ItemId const> sample) {
  if (approx.k() != exact.k()) throw ConfigError("recall: graphs have different K");
  if (approx.size() != exact.size()) throw ConfigError("recall: graphs have different n");
  checkSample(sample, approx.size());
  double sum = 0.0;
  for (ItemId x : sample) sum += overlap(approx.friends(x), exact.neighbors(x));
  return sum / static_cast<double>(sample.size());
}

double recall(FriendMap const& approx, RankingSystem const& rs, std::span<ItemId const> sample) {
  if (approx.size() != rs.size()) throw ConfigError("recall: graph and ranking differ in n");
  checkSample(sample, approx.size());
  double sum = 0.0;
  for (ItemId x : sample) sum += overlap(approx.friends(x), exactNeighbors(rs, x, approx.k()));
  return sum / static_cast<double>(sample.size());
}

std::vector<ItemId> allIds(std::size_t n) {
  std::vector<ItemId> ids(n);
  std::iota(ids.begin(), ids.end(), ItemId{0});
  return ids;
}

std::vector<ItemId> sampleIds(std::size_t n, std::size_t count, Rng& rng) {
  if (count > n) throw ConfigError("sampleIds: count exceeds population");
  std::vector<ItemId> picked;
  picked.reserve(count);
  for (std::size_t j = n - count; j < n; ++j) {
    std::uniform_int_distribution<std::size_t> pick(0, j);
    auto t = static_cast<ItemId>(pick(rng));
    if (std::find(picked.begin(), picked.end(), t) != picked.end()) t = static_cast<ItemId>(j);
    picked.push_back(t);
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

std::size_t Digraph::arcCount() const noexcept {
  std::size_t total = 0;
  for (auto const& row : out) total += row.size();
  return total;
}

void Digraph::addArc(std::uint32_t from, std::uint32_t to) {
  auto const needed = std::max(from, to) + std::size_t{1};
  if (out.size() < needed) out.resize(needed);
  out[from].push_back(to);
}

std::uint32_t RankingDigraph::vertexOf(ItemId a, ItemId b) const {
  if (a == b || a >= points_ || b >= points_) throw ConfigError("vertexOf: not a pair");
  if (a > b) std::swap(a, b);
  // Pairs are enumerated row by row: (0,1) .. (0,n-1), (1,2) ..
  auto const n = points_;
  return static_cast<std::uint32_t>(a * (2 * n - a - 1) / 2 + (b - a - 1));
}

RankingDigraph buildRankingDigraph(RankingSystem const& rs) {
  auto const n = rs.size();
  if (n > RankingDigraph::kMaxPoints) {
    throw ConfigError("ranking digraph is limited to 64 points");
  }
  RankingDigraph dg;
  dg.points_ = n;
  for (ItemId a = 0; a < n; ++a) {
    for (ItemId b = a + 1; b < n; ++b) dg.pairs_.emplace_back(a, b);
  }
  dg.graph_.out.assign(dg.pairs_.size(), {});
  for (ItemId x = 0; x < n; ++x) {
    for (ItemId y = 0; y < n; ++y) {
      for (ItemId z = y + 1; z < n; ++z) {
        if (y == x || z == x) continue;
        auto const xy = dg.vertexOf(x, y);
        auto const xz = dg.vertexOf(x, z);
        if (rs.precedes(x, y, z)) {
          dg.graph_.addArc(xy, xz);
        } else {
          dg.graph_.addArc(xz, xy);
        }
      }
    }
  }
  return dg;
}

std::optional<std::vector<std::uint32_t>> findCycleWitness(Digraph const& g) {
  enum class Color : std::uint8_t { white, gray, black };
  auto const n = g.vertexCount();
  std::vector<Color> color(n, Color::white);
  // Explicit DFS stack of (vertex, next out-arc index); the gray vertices are
  // exactly the vertices on the stack.
  std::vector<std::pair<std::uint32_t, std::size_t>> stack;
  for (std::uint32_t root = 0; root < n; ++root) {
    if (color[root] != Color::white) continue;
    stack.emplace_back(root, 0);
    color[root] = Color::gray;
    while (!stack.empty()) {
      auto& [u, next] = stack.back();
      if (next == g.out[u].size()) {
        color[u] = Color::black;
        stack.pop_back();
        continue;
      }
      auto const v = g.out[u][next++];
      if (color[v] == Color::gray) {
        std::vector<std::uint32_t> cycle;
        auto it = std::find_if(stack.begin(), stack.end(),
                               [v](auto const& frame) { return frame.first == v; });
        for (; it != stack.end(); ++it) cycle.push_back(it->first);
        cycle.push_back(v);
        return cycle;
      }
      if (color[v] == Color::white) {
        color[v] = Color::gray;
        stack.emplace_back(v, 0);
      }
    }
  }
  return std::nullopt;
}

namespace {

std::string label(RankingDigraph const& dg, std::uint32_t vertex) {
  auto const [a, b] = dg.pair(vertex);
  return "{" + std::to_string(a + 1) + "," + std::to_string(b + 1) + "}";
}

}  // namespace

std::string formatCycle(RankingDigraph const& dg, std::span<std::uint32_t const> cycle) {
  std::string out;
  for (std::size_t i = 0; i < cycle.size(); ++i) {
    if (i) out += " -> ";
    out += label(dg, cycle[i]);
  }
  return out;
}

std::string toDot(RankingDigraph const& dg, std::span<std::uint32_t const> cycle) {
  std::ostringstream out;
  out << "digraph ranking {\n";
  for (std::uint32_t v = 0; v < dg.vertices().size(); ++v) {
    bool const marked = std::find(cycle.begin(), cycle.end(), v) != cycle.end();
    out << "  v" << v << " [label=\"" << label(dg, v) << "\"";
    if (marked) out << ", style=filled, fillcolor=black, fontcolor=white";
    out << "];\n";
  }
  for (std::uint32_t u = 0; u < dg.graph().vertexCount(); ++u) {
    for (auto v : dg.graph().out[u]) out << "  v" << u << " -> v" << v << ";\n";
  }
  out << "}\n";
  return out.str();
}

std::optional<CycleWitness> searchNonMetricWitness(std::size_t d, std::size_t trials,
                                                   std::uint64_t seed, RankingKind kind) {
  if (d < 3) throw ConfigError("witness search needs d >= 3");
  for (std::size_t t = 0; t < trials; ++t) {
    auto const trialSeed = substream(seed, streams::kWitness, t)();
    auto points = sampleSimplexUniform(d, 6, trialSeed);
    auto const rs = makeRanking(kind, points);
    auto dg = buildRankingDigraph(*rs);
    if (auto cycle = findCycleWitness(dg)) {
      return CycleWitness{std::move(points), std::move(dg), std::move(*cycle), t};
    }
  }
  return std::nullopt;
}

}  // namespace knnd
