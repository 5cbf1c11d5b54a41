#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "quasiflow/coverage_graph.hpp"
#include "quasiflow/dagcov.hpp"
#include "quasiflow/dbg.hpp"
#include "quasiflow/decompose.hpp"
#include "quasiflow/pairing.hpp"

namespace quasiflow::fixture {

struct GraphFixture {
  AssemblyGraph ag;
  PairedInfo info;
};

// Hand-built AG: unitig i gets `lengths[i]` random bases (no overlap
// consistency); edges are (from, to, support).
AssemblyGraph make_ag(int k, const std::vector<std::size_t>& lengths,
                      const std::vector<std::tuple<UnitigId, UnitigId, std::uint32_t>>& edges);
PairedInfo make_pairs(std::size_t unitigs, const std::vector<std::pair<UnitigId, UnitigId>>& links,
                      std::uint32_t support = 5);

// Two-haplotype bubble chain U1 -> {U2, U3} -> U4 -> {U5, U6}. Unitig Un has
// id n - 1. Supports: U1U2 10, U1U3 2, U2U4 10, U3U4 2, U4U5 10, U4U6 4.
// P(U2) = {U4, U5}, P(U4) = {U5, U6}.
GraphFixture branch_fixture();
inline constexpr UnitigId U(int n) { return static_cast<UnitigId>(n - 1); }

// The coverage-trace AG: Ui -> Uj -> s -> U1 -> U2 -> {U3 -> e, U4}, with
// side inputs Uw -> Uj (10), Ui1 -> U1 (10) and Ui2 -> U2 (3).
struct TraceFixture {
  AssemblyGraph ag;
  PairedInfo info;
  UnitigId ui, uj, s, e, u1, u2, u3, u4;
};
TraceFixture trace_fixture();

// Random DAG over n nodes with edges i -> j (i < j) and coverages in [0, max_cov].
CoverageGraph random_dag(std::mt19937_64& rng, std::size_t max_nodes, std::int64_t max_cov, double density = 0.35,
                         std::size_t max_edges = 11);

// Exhaustive optimum of sum_e (c'_e - c_e)^2 + sum_v (c'_v - c_v)^2 over
// integral conserving corrections with |c'_e - c_e| <= window. Only costs
// below `bound` are searched; if none exists, `bound` is returned.
std::int64_t brute_force_correction(const CoverageGraph& graph, std::int64_t window,
                                    std::int64_t bound = std::numeric_limits<std::int64_t>::max());

// Squared offsets of `corrected` against `original`, edges and nodes.
std::int64_t correction_cost(const CoverageGraph& original, const CoverageGraph& corrected);

// Wraps a coverage graph as a local DAG whose unitig ids equal node ids.
LocalDag as_local_dag(const CoverageGraph& graph);

// Minimises sum_i w_i |a_i - f x| over x >= 0 by scanning the breakpoints
// a_i / f and a uniform grid of `steps` points on [0, 2 max(a_i / f)].
double grid_oracle(const std::vector<double>& ab, const std::vector<double>& w, double f, std::size_t steps = 20000);

std::vector<std::uint64_t> poisson_mixture_histogram(std::uint64_t seed, std::size_t low_n = 100000,
                                                     double low_mean = 2.0, std::size_t high_n = 1000,
                                                     double high_mean = 60.0);

std::string random_dna(std::mt19937_64& rng, std::size_t len);

}  // namespace quasiflow::fixture
