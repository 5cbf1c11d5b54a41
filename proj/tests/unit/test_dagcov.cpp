#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "quasiflow/dagcov.hpp"

using namespace quasiflow;
using quasiflow::fixture::U;

namespace {

DagOptions wide() {
  DagOptions o;
  o.max_dist = 10000;
  return o;
}

std::set<std::pair<UnitigId, UnitigId>> unitig_edges(const LocalDag& dag) {
  std::set<std::pair<UnitigId, UnitigId>> out;
  for (const auto& e : dag.graph.edges) out.emplace(dag.unitigs[e.from], dag.unitigs[e.to]);
  return out;
}

}  // namespace

TEST(BuildLocalDag, BranchAnchor) {
  const auto f = fixture::branch_fixture();
  const LocalDag dag = build_local_dag(f.ag, f.info, U(2), U(4), wide());
  EXPECT_EQ(dag.unitigs, (std::vector<UnitigId>{U(2), U(4), U(5), U(6)}));
  EXPECT_EQ(unitig_edges(dag), (std::set<std::pair<UnitigId, UnitigId>>{{U(2), U(4)}, {U(4), U(5)}, {U(4), U(6)}}));
}

TEST(BuildLocalDag, UnpairedAnchorIsSingleEdge) {
  const auto ag = fixture::make_ag(5, {20, 20, 20}, {{0, 1, 5}, {1, 2, 5}});
  const auto info = fixture::make_pairs(3, {});
  const LocalDag dag = build_local_dag(ag, info, 0, 1, wide());
  EXPECT_EQ(dag.unitigs, (std::vector<UnitigId>{0, 1}));
  EXPECT_EQ(unitig_edges(dag), (std::set<std::pair<UnitigId, UnitigId>>{{0, 1}}));
}

TEST(BuildLocalDag, PairedNodeBeyondMaxDistHasNoEdge) {
  // 0 -> 1 -> spacer(2) -> 3, with P(1) = {3}.
  const auto ag = fixture::make_ag(5, {20, 20, 400, 20}, {{0, 1, 5}, {1, 2, 5}, {2, 3, 5}});
  const auto info = fixture::make_pairs(4, {{1, 3}});
  DagOptions near;
  near.max_dist = 100;
  const LocalDag cut = build_local_dag(ag, info, 0, 1, near);
  EXPECT_EQ(unitig_edges(cut), (std::set<std::pair<UnitigId, UnitigId>>{{0, 1}}));
  const LocalDag reach = build_local_dag(ag, info, 0, 1, wide());
  EXPECT_TRUE(unitig_edges(reach).contains({1, 3}));
}

TEST(AssignCoverages, WorkedSplit) {
  const auto a = assign_coverages({10, 3, 10, 5}, {23, 5});
  EXPECT_EQ(a.first_cost, 0);
  EXPECT_EQ(a.first_choice, (std::vector<std::size_t>{0, 0, 0, 1}));
  EXPECT_EQ(a.out_residual, (std::vector<std::int64_t>{0, 0}));
}

TEST(AssignCoverages, ExactMatch) {
  const auto a = assign_coverages({7}, {7});
  EXPECT_EQ(a.first_cost, 0);
  EXPECT_EQ(a.in_residual, std::vector<std::int64_t>{0});
  EXPECT_EQ(a.out_residual, std::vector<std::int64_t>{0});
  EXPECT_EQ(a.consumed[0][0], 7);
}

TEST(AssignCoverages, TieBreakOnTwoOptima) {
  const auto a = assign_coverages({4, 6}, {7, 3});
  EXPECT_EQ(a.first_cost, 2);
  EXPECT_EQ(brute_force_assignment_cost({4, 6}, {7, 3}), 2);
  EXPECT_EQ(a.first_choice, (std::vector<std::size_t>{1, 0}));  // 4 -> 3, 6 -> 7
}

TEST(AssignCoverages, FirstRoundMatchesBruteForce) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> size(1, 6);
  std::uniform_int_distribution<std::int64_t> cov(0, 30);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<std::int64_t> in(static_cast<std::size_t>(size(rng)));
    std::vector<std::int64_t> out(static_cast<std::size_t>(std::min(size(rng), 4)));
    for (auto& x : in) x = cov(rng);
    for (auto& x : out) x = cov(rng);
    const auto a = assign_coverages(in, out);
    EXPECT_EQ(a.first_cost, brute_force_assignment_cost(in, out));
    // Mass is conserved between consumed and residual amounts.
    for (std::size_t i = 0; i < in.size(); ++i) {
      const auto used = std::accumulate(a.consumed[i].begin(), a.consumed[i].end(), std::int64_t{0});
      EXPECT_EQ(used + a.in_residual[i], in[i]);
    }
    for (std::size_t u = 0; u < out.size(); ++u) {
      std::int64_t used = 0;
      for (std::size_t i = 0; i < in.size(); ++i) used += a.consumed[i][u];
      EXPECT_EQ(used + a.out_residual[u], out[u]);
    }
  }
}

TEST(EstimateEdgeCoverage, TraceFixture) {
  const auto t = fixture::trace_fixture();
  EXPECT_EQ(estimate_edge_coverage(t.ag, t.info, t.ui, t.uj, t.s, t.e, {t.ui, t.uj, t.s, t.e}, wide()), 5);
}

TEST(EstimateEdgeCoverage, StraightChainKeepsCoverage) {
  for (std::uint32_t c : {1U, 7U, 40U}) {
    const auto ag = fixture::make_ag(5, {20, 20, 20, 20, 20}, {{0, 1, c}, {1, 2, c}, {2, 3, c}, {3, 4, c}});
    const auto info = fixture::make_pairs(5, {});
    EXPECT_EQ(estimate_edge_coverage(ag, info, 0, 1, 2, 4, {0, 1, 2, 4}, wide()), c);
    EXPECT_EQ(estimate_edge_coverage(ag, info, 0, 1, 0, 1, {0, 1}, wide()), c);
  }
}

TEST(EstimateEdgeCoverage, BranchDagEstimate) {
  const auto f = fixture::branch_fixture();
  LocalDag dag = build_local_dag(f.ag, f.info, U(2), U(4), wide());
  estimate_dag_coverages(f.ag, f.info, dag, wide());
  std::map<std::pair<UnitigId, UnitigId>, std::int64_t> cov;
  for (const auto& e : dag.graph.edges) cov[{dag.unitigs[e.from], dag.unitigs[e.to]}] = e.cov;
  EXPECT_EQ(cov[std::make_pair(U(2), U(4))], 10);
  EXPECT_EQ(cov[std::make_pair(U(4), U(5))], 10);
  EXPECT_EQ(cov[std::make_pair(U(4), U(6))], 2);
}

TEST(Readjust, SingleOutgoingTakesInSum) {
  LocalDag dag;
  dag.unitigs = {0, 1, 2, 3};
  dag.anchor_from = 0;
  dag.anchor_to = 2;
  dag.graph = CoverageGraph(4);
  dag.graph.add_edge(0, 2, 6);
  dag.graph.add_edge(1, 2, 5);
  dag.graph.add_edge(2, 3, 8);
  readjust_coverages(dag);
  EXPECT_EQ(dag.graph.edges[2].cov, 11);
}

TEST(Readjust, BalancedNodeUntouched) {
  LocalDag dag;
  dag.unitigs = {0, 1, 2, 3};
  dag.anchor_from = 0;
  dag.anchor_to = 1;
  dag.graph = CoverageGraph(4);
  dag.graph.add_edge(0, 1, 9);
  dag.graph.add_edge(1, 2, 4);
  dag.graph.add_edge(1, 3, 5);
  const auto before = dag.graph.edges;
  readjust_coverages(dag);
  for (std::size_t i = 0; i < before.size(); ++i) EXPECT_EQ(dag.graph.edges[i].cov, before[i].cov);
}

TEST(Readjust, SingleIncomingRedistributes) {
  // Node 3 has in 10 and outs {7, 2}; the anchor edge 0 -> 1 carries 6.
  LocalDag dag;
  dag.unitigs = {0, 1, 2, 3, 4, 5};
  dag.anchor_from = 0;
  dag.anchor_to = 1;
  dag.graph = CoverageGraph(6);
  dag.graph.add_edge(0, 1, 6);
  dag.graph.add_edge(2, 3, 10);
  dag.graph.add_edge(3, 4, 7);
  dag.graph.add_edge(3, 5, 2);
  readjust_coverages(dag);
  // diff = {1, 4}, sum 5, weights {4, 1}.
  EXPECT_EQ(dag.graph.edges[2].cov, 8);
  EXPECT_EQ(dag.graph.edges[3].cov, 2);
  EXPECT_EQ(dag.graph.edges[2].cov + dag.graph.edges[3].cov, 10);
}

TEST(Readjust, BranchDagCaseB) {
  const auto f = fixture::branch_fixture();
  LocalDag dag = build_local_dag(f.ag, f.info, U(2), U(4), wide());
  estimate_dag_coverages(f.ag, f.info, dag, wide());
  readjust_coverages(dag);
  std::map<std::pair<UnitigId, UnitigId>, std::int64_t> cov;
  for (const auto& e : dag.graph.edges) cov[{dag.unitigs[e.from], dag.unitigs[e.to]}] = e.cov;
  EXPECT_EQ(cov[std::make_pair(U(4), U(5))], 10);
  EXPECT_EQ(cov[std::make_pair(U(4), U(6))], 0);
}

TEST(ProportionalSplit, LargestRemainderAndEqualFallback) {
  EXPECT_EQ(proportional_split(10, {1, 1, 1}), (std::vector<std::int64_t>{4, 3, 3}));
  EXPECT_EQ(proportional_split(7, {0, 0}), (std::vector<std::int64_t>{4, 3}));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> w(0.0, 5.0);
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> weights{w(rng), w(rng), w(rng), w(rng)};
    const auto s = proportional_split(97, weights);
    EXPECT_EQ(std::accumulate(s.begin(), s.end(), std::int64_t{0}), 97);
  }
}

TEST(ErrObjective, ExactPathsScoreZero) {
  CoverageGraph g(3);
  g.add_edge(0, 1, 4);
  g.add_edge(1, 2, 4);
  EXPECT_EQ(err_objective(g, {{{0, 1, 2}, 4}}), 0);
}

TEST(ErrObjective, SingleEdgeResidual) {
  CoverageGraph g(2);
  g.add_edge(0, 1, 10);
  EXPECT_EQ(err_objective(g, {{{0, 1}, 7}}), 27);
}

TEST(ErrObjective, MissingEdgeThrows) {
  CoverageGraph g(3);
  g.add_edge(0, 1, 1);
  EXPECT_THROW(err_objective(g, {{{0, 2}, 1}}), std::invalid_argument);
}
