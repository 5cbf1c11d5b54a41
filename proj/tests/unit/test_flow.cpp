#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "quasiflow/flow.hpp"

using namespace quasiflow;

namespace {

CoverageGraph branch_dag() {
  // U2 -> U4 (10), U4 -> U5 (10), U4 -> U6 (2).
  CoverageGraph g(4);
  g.add_edge(0, 1, 10);
  g.add_edge(1, 2, 10);
  g.add_edge(1, 3, 2);
  return g;
}

std::size_t count_if_arcs(const FlowNetwork& net, auto pred) {
  std::size_t n = 0;
  for (const auto& a : net.arcs) n += pred(a) ? 1 : 0;
  return n;
}

}  // namespace

TEST(ArcCost, Shapes) {
  EXPECT_EQ(arc_cost({0, 1, 10, ArcCost::kZero, 0}, 7), 0);
  EXPECT_EQ(arc_cost({0, 1, 10, ArcCost::kSquare, 0}, 7), 49);
  EXPECT_EQ(arc_cost({0, 1, 10, ArcCost::kSquareAround, 3}, 7), 16);
}

TEST(OffsetNetwork, NodeAndArcCounts) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    const CoverageGraph g = fixture::random_dag(rng, 8, 10);
    const auto net = build_offset_network(g);
    const std::size_t n = g.node_count();
    std::size_t sources = 0;
    std::size_t sinks = 0;
    std::size_t unbalanced = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
      sources += g.is_source(v) ? 1 : 0;
      sinks += g.is_sink(v) ? 1 : 0;
      unbalanced += g.out_sum(v) != g.in_sum(v) ? 1 : 0;
    }
    EXPECT_EQ(net.node_count, 2 * n + 4);
    EXPECT_EQ(net.arcs.size(), 2 * n + 2 * g.edge_count() + sources + sinks + unbalanced + 1);
  }
}

TEST(OffsetNetwork, BranchDagBalanceArc) {
  const CoverageGraph g = branch_dag();
  const auto net = build_offset_network(g);
  EXPECT_EQ(net.exogenous[1], 2);
  // U4's surplus leaves its out half towards T*.
  EXPECT_EQ(count_if_arcs(net, [&](const FlowArc& a) {
              return a.from == net.out_node[1] && a.to == net.super_sink && a.cap == 2;
            }),
            1U);
  EXPECT_EQ(net.arcs[net.node_dec[1]].cap, 10);
  EXPECT_EQ(net.arcs[net.edge_dec[2]].cap, 2);
  EXPECT_EQ(net.arcs[net.edge_inc[2]].cap, net.infinity);
}

TEST(OffsetNetwork, AllZeroDagHasNoBalanceArcs) {
  CoverageGraph g(3);
  g.add_edge(0, 1, 0);
  g.add_edge(1, 2, 0);
  const auto net = build_offset_network(g);
  EXPECT_EQ(count_if_arcs(net, [&](const FlowArc& a) { return a.from == net.super_source || a.to == net.super_sink; }),
            0U);
  EXPECT_EQ(net.supply[net.super_source], 0);
  EXPECT_EQ(net.supply[net.super_sink], 0);
}

TEST(MinCostFlow, ConsistentDagNeedsNoCorrection) {
  CoverageGraph g(4);
  g.add_edge(0, 1, 6);
  g.add_edge(1, 2, 4);
  g.add_edge(1, 3, 2);
  const auto net = build_offset_network(g);
  const auto flow = solve_min_cost_flow(net);
  EXPECT_EQ(flow.objective, 0);
  for (std::size_t e = 0; e < g.edge_count(); ++e) {
    EXPECT_EQ(flow.flow[net.edge_dec[e]], 0);
    EXPECT_EQ(flow.flow[net.edge_inc[e]], 0);
  }
  const CoverageGraph same = apply_flow_correction(g, net, flow);
  for (std::size_t e = 0; e < g.edge_count(); ++e) EXPECT_EQ(same.edges[e].cov, g.edges[e].cov);
}

TEST(MinCostFlow, BranchDagConserves) {
  const CoverageGraph g = branch_dag();
  const auto net = build_offset_network(g);
  const auto flow = solve_min_cost_flow(net);
  const CoverageGraph c = apply_flow_correction(g, net, flow);
  EXPECT_EQ(c.in_sum(1), c.out_sum(1));
  EXPECT_EQ(flow.objective, fixture::brute_force_correction(g, 10));
}

TEST(MinCostFlow, ReadjustedBranchDagIsFixedPoint) {
  CoverageGraph g(4);
  g.add_edge(0, 1, 10);
  g.add_edge(1, 2, 10);
  g.add_edge(1, 3, 0);
  const auto net = build_offset_network(g);
  const CoverageGraph c = apply_flow_correction(g, net, solve_min_cost_flow(net));
  EXPECT_EQ(c.edges[0].cov, 10);
  EXPECT_EQ(c.edges[1].cov, 10);
  EXPECT_EQ(c.edges[2].cov, 0);
}

TEST(MinCostFlow, ConvexArcsSplitEvenly) {
  // 10 or 11 units over two parallel x^2 arcs.
  for (std::int64_t units : {10, 11}) {
    FlowNetwork net;
    const auto s = net.add_node();
    const auto t = net.add_node();
    net.add_arc(s, t, 100, ArcCost::kSquare);
    net.add_arc(s, t, 100, ArcCost::kSquare);
    net.supply[s] = units;
    net.supply[t] = -units;
    const auto flow = solve_min_cost_flow(net);
    const std::int64_t a = units / 2;
    const std::int64_t b = units - a;
    EXPECT_EQ(flow.objective, a * a + b * b);
    EXPECT_EQ(flow.flow[0] + flow.flow[1], units);
  }
}

TEST(MinCostFlow, InfeasibleThrows) {
  FlowNetwork net;
  const auto s = net.add_node();
  const auto t = net.add_node();
  net.add_arc(s, t, 3, ArcCost::kZero);
  net.supply[s] = 5;
  net.supply[t] = -5;
  EXPECT_THROW(solve_min_cost_flow(net), std::runtime_error);
}

TEST(MinCostFlow, MatchesBruteForceOnRandomDags) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 60; ++trial) {
    const CoverageGraph g = fixture::random_dag(rng, 6, 8);
    const auto net = build_offset_network(g);
    const auto flow = solve_min_cost_flow(net);
    const CoverageGraph c = apply_flow_correction(g, net, flow);
    const std::int64_t oracle = fixture::brute_force_correction(g, 8);
    EXPECT_EQ(flow.objective, oracle) << "trial " << trial;
    EXPECT_EQ(fixture::correction_cost(g, c), oracle) << "trial " << trial;
    const auto nodes = corrected_node_coverage(g, net, flow);
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
      EXPECT_EQ(nodes[v], c.node_cov(v));
      if (!c.is_source(v) && !c.is_sink(v)) {
        EXPECT_EQ(c.in_sum(v), c.out_sum(v));
      }
    }
  }
}

TEST(DirectNetwork, KeepsConsistentCoverage) {
  CoverageGraph g(3);
  g.add_edge(0, 1, 5);
  g.add_edge(1, 2, 5);
  const auto net = build_direct_network(g);
  const auto flow = solve_min_cost_flow(net);
  const auto c = apply_direct_flow(g, net, flow);
  EXPECT_EQ(flow.objective, 0);
  EXPECT_EQ(c.edges[0].cov, 5);
  EXPECT_EQ(c.edges[1].cov, 5);
}

TEST(DirectNetwork, AveragesAChain) {
  CoverageGraph g(3);
  g.add_edge(0, 1, 4);
  g.add_edge(1, 2, 8);
  const auto net = build_direct_network(g);
  const auto c = apply_direct_flow(g, net, solve_min_cost_flow(net));
  EXPECT_EQ(c.edges[0].cov, 6);
  EXPECT_EQ(c.edges[1].cov, 6);
}
