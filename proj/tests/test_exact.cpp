#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace combhelper;
using namespace combhelper::testing;

TEST(Exact, CycleFive) {
  const Solution mvc = exact_solve(cycle(5), Problem::kMvc, Candidates::all(), 10);
  EXPECT_EQ(mvc.nodes.size(), 3u);
  EXPECT_TRUE(mvc.optimal);
  EXPECT_TRUE(is_cover(cycle(5), mvc.nodes));
  const Solution mis = exact_solve(cycle(5), Problem::kMis, Candidates::all(), 10);
  EXPECT_EQ(mis.nodes.size(), 2u);
  EXPECT_TRUE(mis.optimal);
  EXPECT_TRUE(is_independent(cycle(5), mis.nodes));
}

TEST(Exact, SmallExamples) {
  EXPECT_EQ(exact_solve(triangle(), Problem::kMvc, Candidates::all(), 1).nodes.size(), 2u);
  EXPECT_EQ(exact_solve(star(6), Problem::kMvc, Candidates::all(), 1).nodes, NodeSet(7, {0}));
  EXPECT_EQ(exact_solve(star(6), Problem::kMis, Candidates::all(), 1).nodes.size(), 6u);
  const Graph edgeless = Graph::from_edges(4, std::vector<Edge>{});
  EXPECT_EQ(exact_solve(edgeless, Problem::kMvc, Candidates::all(), 1).nodes.size(), 0u);
  EXPECT_EQ(exact_solve(edgeless, Problem::kMis, Candidates::all(), 1).nodes.size(), 4u);
}

TEST(Exact, RestrictedPathForcesBothEnds) {
  const Solution s = exact_solve(path3(), Problem::kMvc, Candidates(NodeSet(3, {0, 2})), 1);
  EXPECT_EQ(s.nodes, NodeSet(3, {0, 2}));
  EXPECT_TRUE(s.optimal);
  EXPECT_FALSE(s.full_space);
}

TEST(Exact, NonPositiveTimeLimitThrows) {
  EXPECT_THROW(exact_solve(triangle(), Problem::kMvc, Candidates::all(), 0.0), InvalidParameter);
  EXPECT_THROW(exact_solve(triangle(), Problem::kMis, Candidates::all(), -1.0), InvalidParameter);
}

TEST(Exact, TimeoutReturnsValidIncumbent) {
  const Graph g = generate_ba(3000, 5, 1);
  const Solution mvc = exact_solve(g, Problem::kMvc, Candidates::all(), 1e-3);
  EXPECT_FALSE(mvc.optimal);
  EXPECT_TRUE(is_cover(g, mvc.nodes));
  const Solution mis = exact_solve(g, Problem::kMis, Candidates::all(), 1e-3);
  EXPECT_FALSE(mis.optimal);
  EXPECT_TRUE(is_independent(g, mis.nodes));
}

TEST(ExactProperties, MatchesBruteForce) {
  Rng rng(77);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 1 + rng.below(16);
    const Graph g = random_graph(n, 0.1 + 0.5 * rng.uniform(), rng.next());
    const NodeSet sub = random_subset(n, 0.3 + 0.6 * rng.uniform(), rng);
    for (Problem p : {Problem::kMvc, Problem::kMis}) {
      const Solution full = exact_solve(g, p, Candidates::all(), 30);
      ASSERT_TRUE(full.optimal);
      EXPECT_EQ(full.nodes.size(), brute_force_optimum(g, p, NodeSet::full(n))) << to_string(p) << " n=" << n;
      EXPECT_TRUE(validate_solution(g, full).ok());

      const Solution restricted = exact_solve(g, p, Candidates(sub), 30);
      ASSERT_TRUE(restricted.optimal);
      EXPECT_TRUE(restricted.nodes.is_subset_of(sub));
      EXPECT_EQ(restricted.nodes.size(), brute_force_optimum(g, p, sub)) << to_string(p) << " restricted n=" << n;
      EXPECT_TRUE(validate_solution(g, restricted).ok());
      // Heuristics are never better than the optimum.
      const Solution gr = run_solver(g, p, Algorithm::kGreedy, Candidates(sub), 1, 1);
      if (p == Problem::kMvc) {
        EXPECT_GE(gr.nodes.size(), restricted.nodes.size());
      } else {
        EXPECT_LE(gr.nodes.size(), restricted.nodes.size());
      }
    }
  }
}
