#pragma once

#include <cstdint>
#include <vector>

#include "quasiflow/coverage_graph.hpp"

namespace quasiflow {

enum class ArcCost : std::uint8_t {
  kZero,          // 0
  kSquare,        // x^2
  kSquareAround,  // (x - center)^2
};

struct FlowArc {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  std::int64_t cap = 0;
  ArcCost cost = ArcCost::kZero;
  std::int64_t center = 0;
};

std::int64_t arc_cost(const FlowArc& arc, std::int64_t x);

// supply[v] > 0 injects flow at v, supply[v] < 0 absorbs it.
struct FlowNetwork {
  std::size_t node_count = 0;
  std::vector<FlowArc> arcs;
  std::vector<std::int64_t> supply;

  std::uint32_t add_node();
  std::uint32_t add_arc(std::uint32_t from, std::uint32_t to, std::int64_t cap, ArcCost cost,
                        std::int64_t center = 0);
};

// Split network for a coverage graph. For graph node v, in_node[v] and
// out_node[v] are its halves; node_dec/node_inc and edge_dec/edge_inc index
// the offset arcs whose flows lower or raise the coverage.
struct OffsetFlowNetwork : FlowNetwork {
  std::uint32_t source = 0;        // S
  std::uint32_t sink = 0;          // T
  std::uint32_t super_source = 0;  // S*
  std::uint32_t super_sink = 0;    // T*
  std::int64_t infinity = 0;
  std::vector<std::uint32_t> in_node;
  std::vector<std::uint32_t> out_node;
  std::vector<std::uint32_t> node_dec;
  std::vector<std::uint32_t> node_inc;
  std::vector<std::uint32_t> edge_dec;
  std::vector<std::uint32_t> edge_inc;
  std::vector<std::int64_t> exogenous;  // q_v = out-sum minus in-sum
};

// Node offsets cost x^2 when `node_costs` is set and are free otherwise.
OffsetFlowNetwork build_offset_network(const CoverageGraph& graph, bool node_costs = true);

// Circulation on the graph itself: each edge costs (x - cov)^2, S feeds the
// sources, sinks drain to T, and T returns to S.
struct DirectFlowNetwork : FlowNetwork {
  std::uint32_t source = 0;
  std::uint32_t sink = 0;
  std::vector<std::uint32_t> edge_arc;
};
DirectFlowNetwork build_direct_network(const CoverageGraph& graph);

struct FlowAssignment {
  std::vector<std::int64_t> flow;  // per arc
  std::int64_t objective = 0;
};

// Integral min-cost flow by successive shortest paths with potentials.
// Convex arcs are priced by their marginal cost and augmented one unit at a
// time. Throws std::runtime_error when the supplies cannot be routed.
FlowAssignment solve_min_cost_flow(const FlowNetwork& net);

// cov' = cov - dec + inc on every edge. Throws std::logic_error on a negative
// corrected coverage.
CoverageGraph apply_flow_correction(const CoverageGraph& graph, const OffsetFlowNetwork& net,
                                    const FlowAssignment& flow);
// Corrected node coverage c_v - dec + inc.
std::vector<std::int64_t> corrected_node_coverage(const CoverageGraph& graph, const OffsetFlowNetwork& net,
                                                  const FlowAssignment& flow);
CoverageGraph apply_direct_flow(const CoverageGraph& graph, const DirectFlowNetwork& net,
                                const FlowAssignment& flow);

}  // namespace quasiflow
