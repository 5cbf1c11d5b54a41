#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quasiflow/dagcov.hpp"
#include "quasiflow/dbg.hpp"
#include "quasiflow/decompose.hpp"
#include "quasiflow/finalize.hpp"
#include "quasiflow/kspectrum.hpp"
#include "quasiflow/pairing.hpp"
#include "quasiflow/seqio.hpp"

namespace quasiflow {

struct AssembleOptions {
  int k = 121;
  std::optional<std::uint32_t> threshold;  // overrides the KDE choice
  double oversmooth = 1.0;
  double filigree_ratio = 5.0;
  std::size_t branch_limit = 10;
  bool forward_only = false;  // strand-specific k-mers instead of canonical
  bool fr_library = true;
  int threads = 1;
  std::size_t min_tip = 0;  // 0 selects 2k
  std::size_t min_copath_support = 1;
  std::uint32_t min_pair_support = 2;
  std::size_t max_dist = 0;  // 0 selects insert + 2 * delta
  std::size_t min_contig_len = 500;
  std::size_t keep_isolated_len = 500;
  double readjust_ratio = 0.1;
};

struct AnchorResult {
  UnitigId from = kNoUnitig;
  UnitigId to = kNoUnitig;
  CoverageGraph estimated;  // before readjustment and flow correction
  LocalDag dag;             // corrected
  std::int64_t correction_cost = 0;
  std::vector<WeightedPath> paths;
};

struct AssemblyResult {
  std::vector<std::uint64_t> histogram;
  ThresholdResult threshold;
  std::size_t solid_kmers = 0;
  AssemblyGraph raw_graph;
  AssemblyGraph graph;
  PairedInfo pairs;
  std::size_t max_dist = 0;
  std::vector<AnchorResult> anchors;  // indexed by edge id of `graph`
  Apag raw_apag;
  Apag apag;
  std::vector<WeightedPath> haplotype_paths;
  ContigSet contigs;
  std::map<std::string, double> seconds;
};

// Throws std::invalid_argument when k is outside [3, 126] or longer than the
// shortest read.
AssemblyResult assemble(const ReadSet& reads, const AssembleOptions& options);

// Runs one anchor through DAG construction, coverage estimation,
// readjustment, flow correction, decomposition and path polishing.
AnchorResult process_anchor(const AssemblyGraph& ag, const PairedInfo& pairs, UnitigId from, UnitigId to,
                            const DagOptions& dag_options, const LocalPathFilter& filter, double readjust_ratio);

}  // namespace quasiflow
