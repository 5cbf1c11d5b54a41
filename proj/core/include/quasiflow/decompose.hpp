#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "quasiflow/dagcov.hpp"

namespace quasiflow {

// Splits the corrected flow of `dag` into weighted source-to-sink paths over
// local node indices. At a fork the walk prefers branches linked by paired
// reads to the reference node: the predecessor of the last join visited, or
// the path's source before any join.
std::vector<WeightedPath> decompose_flow_paths(const LocalDag& dag, const PairedInfo& info);

struct LocalPathFilter {
  std::int64_t min_weight = 1;  // the solid k-mer threshold
  std::size_t min_copath_support = 1;
};

// Keeps paths through both anchors, with weight >= min_weight and at least
// min_copath_support nodes paired to each anchor. An anchor without paired
// unitigs is not held to that rule. Paths that leave a fork through a branch
// an anchor is not paired with, while it is paired with a sibling, are
// dropped.
std::vector<WeightedPath> polish_local_paths(const std::vector<WeightedPath>& paths, const LocalDag& dag,
                                             const AssemblyGraph& ag, const PairedInfo& info,
                                             const LocalPathFilter& filter);

struct ApagNode {
  UnitigId unitig = kNoUnitig;
  std::vector<UnitigId> restricted;  // P(U) restricted to one haplotype, ascending
  std::string seq;
  double abundance = 0.0;
};

struct Apag {
  int k = 0;
  std::vector<ApagNode> nodes;
  CoverageGraph graph;  // edge cov: summed suggested flow

  std::size_t instances_of(UnitigId u) const;
};

struct AnchorPaths {
  const LocalDag* dag = nullptr;
  std::vector<WeightedPath> paths;
};

// One instance per (unitig, restricted paired set). Every path of an anchor
// (Ui, Uj) links the instances of Ui and Uj; parallel links add up. Restricted
// sets are then intersected with the unitigs present in the APAG and equal
// instances merged. AG unitigs without any edge join as lone instances.
Apag build_apag(const AssemblyGraph& ag, const PairedInfo& info, const std::vector<AnchorPaths>& anchors);

}  // namespace quasiflow
