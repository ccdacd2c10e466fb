#include <gtest/gtest.h>

#include "indexcode/indexcode.hpp"

using namespace indexcode;

namespace {

// Depth-first cycle detection on the induced subgraph, kept separate from the library's elimination.
bool dfs_acyclic(const SideInfoGraph& g, UserMask subset) {
  const int m = g.vertex_count();
  std::vector<int> color(static_cast<std::size_t>(m + 1), 0);
  std::function<bool(int)> visit = [&](int v) {
    color[v] = 1;
    for (int w = 1; w <= m; ++w) {
      if (!((subset >> (w - 1)) & 1u) || !g.has_edge(v, w)) continue;
      if (color[w] == 1) return false;
      if (color[w] == 0 && !visit(w)) return false;
    }
    color[v] = 2;
    return true;
  };
  for (int v = 1; v <= m; ++v) {
    if (((subset >> (v - 1)) & 1u) && color[v] == 0 && !visit(v)) return false;
  }
  return true;
}

int brute_mais(const SideInfoGraph& g) {
  int best = 0;
  for (UserMask s = 0; s < (UserMask{1} << g.vertex_count()); ++s) {
    const int size = __builtin_popcountll(s);
    if (size > best && dfs_acyclic(g, s)) best = size;
  }
  return best;
}

}  // namespace

TEST(Graph, Acyclicity) {
  const SideInfoGraph g1(catalog_get("I1").instance);
  EXPECT_TRUE(is_acyclic(g1, {1, 2, 3, 8, 9, 10}));
  EXPECT_FALSE(is_acyclic(g1, {2, 3, 5}));
  EXPECT_TRUE(is_acyclic(g1, {}));
  EXPECT_THROW(is_acyclic(g1, {11}), IndexOutOfRange);
}

TEST(Graph, Independence) {
  const SideInfoGraph g2(catalog_get("I2").instance);
  EXPECT_TRUE(is_independent(g2, {1, 2, 3, 11, 12, 13}));
  EXPECT_TRUE(is_independent(g2, {5}));
  EXPECT_FALSE(is_independent(g2, {1, 2, 3, 4}));
}

TEST(Graph, I2QuadruplesAreAcyclicButHaveEdges) {
  // Users 21 and 22 are known to users 4 and 14, so these sets carry edges.
  const SideInfoGraph g2(catalog_get("I2").instance);
  const std::vector<UserSet> quads = {{4, 14, 21, 22}, {4, 14, 23, 24}, {5, 15, 23, 24},
                                      {5, 15, 25, 26}, {6, 16, 21, 22}, {6, 16, 25, 26}};
  for (const UserSet& d : quads) {
    EXPECT_TRUE(is_acyclic(g2, d)) << format_set(d);
    EXPECT_FALSE(is_independent(g2, d)) << format_set(d);
  }
  EXPECT_TRUE(g2.has_edge(21, 4));
  EXPECT_FALSE(g2.has_edge(4, 21));
}

TEST(Graph, MinimalCyclic) {
  const SideInfoGraph gp(i1_prime());
  EXPECT_TRUE(is_minimal_cyclic(gp, {2, 3, 5}));
  const SideInfoGraph pair(Instance::validate(2, {{2}, {1}}));
  EXPECT_TRUE(is_minimal_cyclic(pair, {1, 2}));
  EXPECT_FALSE(is_minimal_cyclic(gp, {1, 2, 3}));
  for (const UserSet& s : minimal_cyclic_sets(gp, 3)) {
    EXPECT_TRUE(is_minimal_cyclic(gp, s));
    for (int drop : s) {
      UserSet rest;
      for (int v : s) {
        if (v != drop) rest.push_back(v);
      }
      EXPECT_TRUE(is_acyclic(gp, rest));
    }
  }
}

TEST(Graph, MaisCatalog) {
  const MaisResult r1 = mais(SideInfoGraph(catalog_get("I1").instance));
  EXPECT_EQ(r1.value, 6);
  EXPECT_EQ(r1.witness, (UserSet{1, 2, 3, 8, 9, 10}));
  const MaisResult r2 = mais(SideInfoGraph(catalog_get("I2").instance));
  EXPECT_EQ(r2.value, 6);
  EXPECT_EQ(r2.witness, (UserSet{1, 2, 3, 11, 12, 13}));
}

TEST(Graph, MaisCompleteBidirected) {
  for (int k = 1; k <= 6; ++k) {
    std::vector<UserSet> side(static_cast<std::size_t>(k));
    for (int i = 1; i <= k; ++i) {
      for (int j = 1; j <= k; ++j) {
        if (i != j) side[i - 1].push_back(j);
      }
    }
    EXPECT_EQ(mais(SideInfoGraph(Instance::validate(k, side))).value, 1);
  }
}

TEST(Graph, MaisMatchesExhaustiveOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const int m = 1 + trial % 12;
    const double p = 0.15 + 0.1 * (trial % 6);
    const SideInfoGraph g(random_instance(m, p, rng));
    const MaisResult r = mais(g);
    EXPECT_EQ(r.value, brute_mais(g)) << "trial " << trial;
    EXPECT_EQ(static_cast<int>(r.witness.size()), r.value);
    EXPECT_TRUE(dfs_acyclic(g, mask_of(r.witness)));
  }
}

TEST(Graph, MaisBudget) {
  EXPECT_THROW(mais(SideInfoGraph(catalog_get("I2").instance), 1), BudgetExceeded);
}
