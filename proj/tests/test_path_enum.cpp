#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"
#include "pathattack/path_enum.hpp"

namespace pa = pathattack;

namespace {

pa::Graph clique(int n) {
  pa::Graph g(n);
  for (pa::NodeId u = 0; u < n; ++u) {
    for (pa::NodeId v = u + 1; v < n; ++v) g.add_edge(u, v, 1.0);
  }
  return g;
}

std::vector<oracle::RankedPath> exhaust(const pa::Graph& g, pa::NodeId s, pa::NodeId t,
                                        std::optional<std::vector<char>> mask = std::nullopt) {
  pa::PathIterator it(g, s, t, std::move(mask));
  std::vector<oracle::RankedPath> out;
  while (auto p = it.next()) out.push_back({pa::path_length(g, *p), p->nodes()});
  return out;
}

}  // namespace

TEST(KShortest, PathGraphExhausts) {
  pa::Graph g(3);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 1.0);
  const auto paths = pa::k_shortest_paths(g, 0, 2, 2);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(paths[0].nodes(), (std::vector<pa::NodeId>{0, 1, 2}));
}

TEST(KShortest, FourCliqueLengths) {
  const auto g = clique(4);
  const auto paths = pa::k_shortest_paths(g, 0, 3, 5);
  const auto all = oracle::all_simple_paths(g, 0, 3);
  ASSERT_EQ(all.size(), 5u);
  ASSERT_EQ(paths.size(), 5u);
  std::vector<double> lengths;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    lengths.push_back(pa::path_length(g, paths[i]));
    EXPECT_EQ(paths[i].nodes(), all[i].nodes);
  }
  EXPECT_EQ(lengths, (std::vector<double>{1, 2, 2, 3, 3}));
}

TEST(KShortest, FirstEqualsShortestPath) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_connected_graph(10, 8, 10, rng);
    const auto ks = pa::k_shortest_paths(g, 0, 9, 1);
    ASSERT_EQ(ks.size(), 1u);
    EXPECT_EQ(ks[0], *pa::shortest_path(g, 0, 9));
  }
}

TEST(KShortest, Errors) {
  const auto g = clique(3);
  EXPECT_THROW(pa::k_shortest_paths(g, 0, 1, 0), pa::InputError);
  EXPECT_THROW(pa::k_shortest_paths(g, 1, 1, 3), pa::InputError);
  pa::Graph split(4);
  split.add_edge(0, 1, 1.0);
  EXPECT_TRUE(pa::k_shortest_paths(split, 0, 3, 4).empty());
}

TEST(PathIterator, ExhaustionMatchesEnumeration) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const int m = static_cast<int>(rng() % (n * (n - 1) / 2 + 1));
    // Small weight range forces plenty of ties.
    const auto g = oracle::random_graph(n, m, 3, rng);
    const auto s = static_cast<pa::NodeId>(rng() % n);
    const auto t = static_cast<pa::NodeId>((s + 1 + rng() % (n - 1)) % n);
    const auto got = exhaust(g, s, t);
    const auto want = oracle::all_simple_paths(g, s, t);
    ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].nodes, want[i].nodes) << "trial " << trial << " rank " << i;
      EXPECT_EQ(got[i].length, want[i].length);
    }
  }
}

TEST(PathIterator, NodeMaskRestrictsPaths) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(7, 12, 4, rng);
    std::vector<char> mask(7, 1);
    mask[1 + rng() % 5] = 0;
    mask[1 + rng() % 5] = 0;
    pa::Graph sub(7);
    for (const auto& e : g.edges()) {
      if (mask[e.key.u] && mask[e.key.v]) sub.add_edge(e.key.u, e.key.v, e.weight, e.cost);
    }
    const auto got = exhaust(g, 0, 6, mask);
    const auto want = oracle::all_simple_paths(sub, 0, 6);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i].nodes, want[i].nodes);
  }
}

TEST(PathIterator, RemovedEdgeMask) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = oracle::random_graph(7, 14, 5, rng);
    pa::EdgeSet removed;
    for (const auto& e : g.edges()) {
      if (rng() % 4 == 0) removed.insert(e.key);
    }
    pa::PathIterator it(g, 0, 6, std::nullopt, pa::edge_mask(g, removed));
    std::vector<std::vector<pa::NodeId>> got;
    while (auto p = it.next()) got.push_back(p->nodes());
    const auto want = oracle::all_simple_paths(g, 0, 6, removed);
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i) EXPECT_EQ(got[i], want[i].nodes);
  }
}

TEST(PathIterator, NeverRepeatsAndNondecreasing) {
  const auto g = clique(6);
  pa::PathIterator it(g, 0, 5);
  std::set<std::vector<pa::NodeId>> seen;
  double last = 0.0;
  while (auto p = it.next()) {
    EXPECT_TRUE(seen.insert(p->nodes()).second);
    const double len = pa::path_length(g, *p);
    EXPECT_GE(len, last);
    last = len;
  }
  // Simple 0-5 paths in K6: sum over k of 4!/(4-k)! = 1+4+12+24+24.
  EXPECT_EQ(seen.size(), 65u);
  EXPECT_EQ(it.yielded(), 65u);
}

TEST(NextShortestExcluding, OnlyPStarEdges) {
  pa::Graph g(3);
  g.add_edge(0, 1, 1.0);
  g.add_edge(1, 2, 1.0);
  EXPECT_FALSE(pa::next_shortest_excluding(g, 0, 2, pa::Path({0, 1, 2})));
}

TEST(NextShortestExcluding, Triangle) {
  pa::Graph g(3);  // s=0, t=1, x=2
  g.add_edge(0, 1, 1.0);
  g.add_edge(0, 2, 1.0);
  g.add_edge(2, 1, 1.0);
  const auto p = pa::next_shortest_excluding(g, 0, 1, pa::Path({0, 2, 1}));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->nodes(), (std::vector<pa::NodeId>{0, 1}));
  EXPECT_EQ(pa::path_length(g, *p), 1.0);
}

TEST(NextShortestExcluding, MatchesEnumeration) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = oracle::random_graph(8, 13, 4, rng);
    const auto all = oracle::all_simple_paths(g, 0, 7);
    if (all.empty()) continue;
    const pa::Path p_star(all[rng() % all.size()].nodes);
    const auto got = pa::next_shortest_excluding(g, 0, 7, p_star);
    const oracle::RankedPath* want = nullptr;
    for (const auto& p : all) {
      if (p.nodes != p_star.nodes()) {
        want = &p;
        break;
      }
    }
    ASSERT_EQ(got.has_value(), want != nullptr);
    if (got) {
      EXPECT_EQ(got->nodes(), want->nodes);
    }
  }
}

TEST(NextShortestExcluding, PStarMayBeAbsentFromGraph) {
  pa::Graph g(3);
  g.add_edge(0, 2, 4.0);
  // p* edges (0,1),(1,2) are not in g.
  const auto p = pa::next_shortest_excluding(g, 0, 2, pa::Path({0, 1, 2}));
  ASSERT_TRUE(p);
  EXPECT_EQ(p->nodes(), (std::vector<pa::NodeId>{0, 2}));
}
