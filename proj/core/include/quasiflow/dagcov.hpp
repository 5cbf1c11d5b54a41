#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "quasiflow/coverage_graph.hpp"
#include "quasiflow/dbg.hpp"
#include "quasiflow/pairing.hpp"

namespace quasiflow {

inline constexpr std::uint32_t kNoLocal = UINT32_MAX;

// DAG_ij for the AG edge (anchor_from, anchor_to). Node i of `graph` is
// unitig `unitigs[i]`; unitigs are kept in ascending id order.
struct LocalDag {
  UnitigId anchor_from = kNoUnitig;
  UnitigId anchor_to = kNoUnitig;
  std::vector<UnitigId> unitigs;
  CoverageGraph graph;

  std::uint32_t local(UnitigId u) const;  // kNoLocal when absent
  std::int64_t anchor_cov() const;
};

struct WeightedPath {
  std::vector<std::uint32_t> nodes;
  std::int64_t weight = 0;

  friend bool operator==(const WeightedPath&, const WeightedPath&) = default;
};

struct DagOptions {
  std::size_t max_dist = 0;      // bp; must be set by the caller
  std::size_t branch_limit = 10;  // fork expansions per search
  std::size_t state_limit = 1U << 16;
};

// Nodes {Ui, Uj} + P(Ui) + P(Uj). Edges come from a forward search out of
// every node that stops at other DAG nodes; they are added in (distance, ids)
// order and any edge that would close a cycle is skipped. Coverages are 0.
LocalDag build_local_dag(const AssemblyGraph& ag, const PairedInfo& info, UnitigId ui, UnitigId uj,
                         const DagOptions& options);

struct TraversalState {
  std::vector<UnitigId> path;
  std::vector<std::int64_t> bag;
  std::int64_t cov = 0;
  bool reached_s = false;
  std::size_t dist = 0;  // interior bp since Uj (before s) or since s
};

// Bag-based estimate of the coverage of the DAG edge (s, e) restricted to the
// haplotypes passing through Ui and Uj. `dag_nodes` is V_ij.
std::int64_t estimate_edge_coverage(const AssemblyGraph& ag, const PairedInfo& info, UnitigId ui, UnitigId uj,
                                    UnitigId s, UnitigId e, const std::set<UnitigId>& dag_nodes,
                                    const DagOptions& options);

// Fills every edge of `dag` with its estimate and drops the zero ones.
void estimate_dag_coverages(const AssemblyGraph& ag, const PairedInfo& info, LocalDag& dag, const DagOptions& options);

struct CoverageAssignment {
  std::vector<std::size_t> first_choice;  // outgoing index per incoming, first round
  std::int64_t first_cost = 0;
  std::vector<std::vector<std::int64_t>> consumed;  // [incoming][outgoing]
  std::vector<std::int64_t> in_residual;
  std::vector<std::int64_t> out_residual;
  std::vector<std::ptrdiff_t> last_out;  // last outgoing an incoming went to, -1 if none
};

// Iterated single-assignment of incoming to outgoing coverages minimising
// sum_u |oc_u - sum_v ic_v x_vu| per round. Exact for up to 12 incoming values,
// greedy above. `out_ids` breaks ties (lower id first); defaults to the index.
CoverageAssignment assign_coverages(const std::vector<std::int64_t>& incoming,
                                    const std::vector<std::int64_t>& outgoing,
                                    const std::vector<std::uint32_t>& out_ids = {});

// Exhaustive single-round optimum; used by tests and for tiny instances.
std::int64_t brute_force_assignment_cost(const std::vector<std::int64_t>& incoming,
                                         const std::vector<std::int64_t>& outgoing);

void readjust_coverages(LocalDag& dag, double ratio = 0.1);

// Integer split of `total` proportional to `weights` by largest remainder;
// equal split when all weights are zero.
std::vector<std::int64_t> proportional_split(std::int64_t total, const std::vector<double>& weights);

// Squared residuals of nodes and edges against the path weights.
std::int64_t err_objective(const CoverageGraph& graph, const std::vector<WeightedPath>& paths);

}  // namespace quasiflow
