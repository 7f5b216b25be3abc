#include <gtest/gtest.h>

#include <cstdint>
#include <queue>
#include <random>

#include "largesol/cut_graph.hpp"
#include "largesol/maxflow.hpp"

using namespace largesol;

namespace {

using Solver = PushRelabel<std::int64_t>;

// Reference: Edmonds-Karp on a dense matrix with explicit terminals.
struct Reference {
  int n;  // includes source n-2 and sink n-1
  std::vector<std::vector<std::int64_t>> cap;

  explicit Reference(int nodes) : n(nodes + 2), cap(n, std::vector<std::int64_t>(n, 0)) {}

  std::int64_t maxflow() {
    const int s = n - 2, t = n - 1;
    std::int64_t total = 0;
    for (;;) {
      std::vector<int> parent(n, -1);
      parent[s] = s;
      std::queue<int> q;
      q.push(s);
      while (!q.empty() && parent[t] < 0) {
        const int u = q.front();
        q.pop();
        for (int v = 0; v < n; ++v) {
          if (parent[v] < 0 && cap[u][v] > 0) {
            parent[v] = u;
            q.push(v);
          }
        }
      }
      if (parent[t] < 0) return total;
      std::int64_t push = std::numeric_limits<std::int64_t>::max();
      for (int v = t; v != s; v = parent[v]) push = std::min(push, cap[parent[v]][v]);
      for (int v = t; v != s; v = parent[v]) {
        cap[parent[v]][v] -= push;
        cap[v][parent[v]] += push;
      }
      total += push;
    }
  }
};

}  // namespace

TEST(PushRelabel, MatchesReferenceOnRandomGraphs) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 12);
    std::uniform_int_distribution<int> node(0, n - 1);
    std::uniform_int_distribution<std::int64_t> c(0, 20);
    std::vector<Solver::Edge> edges;
    Reference ref(n);
    for (int k = 0; k < 3 * n; ++k) {
      const int a = node(rng), b = node(rng);
      if (a == b) continue;
      const auto w = c(rng);
      edges.push_back({a, b, w});
      ref.cap[a][b] += w;
      ref.cap[b][a] += w;
    }
    std::vector<std::int64_t> sink(n), source(n);
    for (int u = 0; u < n; ++u) {
      sink[u] = c(rng);
      source[u] = c(rng);
      ref.cap[u][n + 1] = sink[u];
      ref.cap[n][u] = source[u];
    }
    Solver solver(n, edges, sink);
    solver.add_source_capacity(std::span<const std::int64_t>(source));
    solver.solve();
    EXPECT_EQ(solver.flow_value(), ref.maxflow()) << "trial " << trial;
  }
}

TEST(PushRelabel, WarmStartMatchesColdSolve) {
  std::mt19937 rng(5);
  const int n = 40;
  std::uniform_int_distribution<int> node(0, n - 1);
  std::uniform_int_distribution<std::int64_t> c(1, 50);
  std::vector<Solver::Edge> edges;
  for (int k = 0; k < 150; ++k) {
    const int a = node(rng), b = node(rng);
    if (a != b) edges.push_back({a, b, c(rng)});
  }
  std::vector<std::int64_t> sink(n);
  for (auto& s : sink) s = c(rng);
  Solver warm(n, edges, sink);
  std::int64_t applied = 0;
  for (std::int64_t level : {3, 10, 25, 40, 80}) {
    warm.add_source_capacity(level - applied);
    applied = level;
    warm.solve();
    Solver cold(n, edges, sink);
    cold.add_source_capacity(level);
    cold.solve();
    EXPECT_EQ(warm.flow_value(), cold.flow_value());
    EXPECT_EQ(warm.source_side(), cold.source_side());
  }
}

TEST(PushRelabel, SourceSideIsLargestMinimumCut) {
  // Two nodes joined by capacity 2, each with sink capacity 1 and source 1:
  // cutting at the source side and at the sink side cost the same.
  std::vector<Solver::Edge> edges{{0, 1, 2}};
  Solver s(2, edges, {1, 1});
  s.add_source_capacity(1);
  s.solve();
  EXPECT_EQ(s.flow_value(), 2);
  EXPECT_EQ(s.source_side(), (std::vector<std::uint8_t>{1, 1}));
}

TEST(PushRelabel, RejectsSizeMismatch) {
  std::vector<Solver::Edge> edges;
  EXPECT_THROW(Solver(3, edges, {1, 1}), InvalidInputError);
}

TEST(CroftonWeights, SumToPiOverTwo) {
  // Angular sectors of the eight undirected directions partition [0, pi).
  double total = 0.0;
  for (const auto& o : crofton_offsets()) total += o.weight * 2.0 * std::hypot(o.dx, o.dy);
  EXPECT_NEAR(total, std::numbers::pi, 1e-14);
}

TEST(CroftonWeights, LargeDiskPerimeter) {
  const RasterDomain disk = rasterize(DiskDomain({0, 0}, 1.0), 1.0 / 256);
  EXPECT_NEAR(crofton_perimeter(disk.mask()), 2.0 * std::numbers::pi, 0.01 * 2.0 * std::numbers::pi);
}

TEST(CroftonWeights, SquarePerimeterWithinMetricationError) {
  const RasterDomain sq = rasterize(square(1.0), 1.0 / 128);
  EXPECT_NEAR(crofton_perimeter(sq.mask()), 4.0, 0.02 * 4.0);
}
