#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quasiflow/decompose.hpp"

namespace quasiflow {

struct ApagPolishOptions {
  std::size_t min_len = 500;      // bp
  std::size_t min_tip_len = 0;    // 0 selects 2k
};

// Drops lone instances that are split artifacts or shorter than min_len,
// short tips hanging off a branch, and acyclic components whose longest
// path spells fewer than min_len bp. Repeats until stable.
Apag polish_apag(const Apag& apag, const ApagPolishOptions& options = {});

// Spells a node path, trimming k-1 bases per junction. Throws
// std::logic_error when consecutive sequences do not overlap.
std::string spell_path(const Apag& apag, const std::vector<std::uint32_t>& nodes);
std::size_t spelled_length(const Apag& apag, const std::vector<std::uint32_t>& nodes);

// Min-cost correction of the APAG flow with cost (x - cov)^2 per edge, then
// widest-path extraction until no source-to-sink flow is left. Lone
// instances become one-node paths weighted by their abundance.
std::vector<WeightedPath> extract_haplotypes(const Apag& apag);

// A path is contradicted when it leaves some node v for successor w while an
// earlier path node is paired with another AG successor of v but not with w.
// Its prefix up to v is spliced onto the heaviest uncontradicted path that
// leaves v acceptably. Paths that cannot be repaired are dropped. Identical
// paths merge, and a path spelling a piece of a longer one is folded into it.
std::vector<WeightedPath> reassign_contradicted_paths(const Apag& apag, const AssemblyGraph& ag,
                                                      const PairedInfo& info, const std::vector<WeightedPath>& paths);

struct LpPolish {
  std::vector<double> multipliers;
  double objective = 0.0;
  double objective_at_one = 0.0;
};

// min sum_u |ab_u - sum_{p owns u} f(p) x_p| (L_u/k - 1) over x >= 0, one
// term per distinct unitig. Source and sink unitigs shorter than 2k are left
// out. Throws std::invalid_argument when `paths` is empty.
LpPolish lp_polish_abundances(const Apag& apag, const std::vector<WeightedPath>& paths);

struct Contig {
  std::string id;
  std::string seq;
  double rel_freq = 0.0;
  std::int64_t raw_flow = 0;
  double multiplier = 1.0;
  std::vector<std::uint32_t> path;  // APAG node ids
  std::vector<UnitigId> unitigs;  // may reach past `path` after extension
};

struct ContigSet {
  std::vector<Contig> contigs;
};

// Spells paths, drops those shorter than min_len or with a zero multiplier
// and normalises f(p) x_p to relative frequencies. Contigs are ordered by decreasing
// frequency.
ContigSet emit_contigs(const Apag& apag, const std::vector<WeightedPath>& paths,
                       const std::vector<double>& multipliers, std::size_t min_len = 500);

// Drops paths shorter than min_len or carrying less than min_flow, then LP
// polish and emission.
ContigSet finalize_contigs(const Apag& apag, const std::vector<WeightedPath>& paths, std::size_t min_len = 500,
                           std::int64_t min_flow = 1);

// Grows each contig through the AG while the next unitig is unambiguous:
// either the only neighbour, or one whose link support from contig unitigs
// paired with exactly one neighbour dominates. Stops at a unitig already on
// the contig. A contig that then lies inside another is folded into it and
// ids are reassigned.
void extend_contigs(ContigSet& set, const AssemblyGraph& ag, const PairedInfo& info);

}  // namespace quasiflow
