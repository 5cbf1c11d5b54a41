#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "quasiflow/kspectrum.hpp"

namespace quasiflow {

using UnitigId = std::uint32_t;
inline constexpr UnitigId kNoUnitig = UINT32_MAX;

struct Unitig {
  UnitigId id = 0;
  std::string seq;
  std::uint32_t kmer_count = 0;
  double abundance = 0.0;     // mean count of the constituent k-mers
  UnitigId twin = kNoUnitig;  // reverse-complement unitig in canonical mode
  std::vector<std::uint32_t> counts;  // per constituent k-mer, in sequence order

  std::size_t length() const { return seq.size(); }
};

struct AgEdge {
  UnitigId from = 0;
  UnitigId to = 0;
  std::uint32_t support = 1;  // count of the (k+1)-mer spanning the junction
};

// Oriented unitig graph. In canonical mode every unitig appears once per
// strand and `twin` links the two copies.
class AssemblyGraph {
 public:
  int k = 0;
  bool canonical = true;
  std::vector<Unitig> unitigs;
  std::vector<AgEdge> edges;

  void index();  // rebuilds adjacency after edits to `edges`

  const std::vector<std::uint32_t>& out_edges(UnitigId u) const { return out_[u]; }
  const std::vector<std::uint32_t>& in_edges(UnitigId u) const { return in_[u]; }
  std::size_t out_degree(UnitigId u) const { return out_[u].size(); }
  std::size_t in_degree(UnitigId u) const { return in_[u].size(); }
  std::optional<std::uint32_t> edge_between(UnitigId from, UnitigId to) const;
  std::uint32_t support(UnitigId from, UnitigId to) const;  // 0 when absent
  // abu(v): maximum support over edges incident to v (0 for isolated unitigs).
  std::uint32_t node_abu(UnitigId u) const;
  // Junction (k+1)-mer of an edge, canonicalised in canonical mode.
  Kmer junction(const AgEdge& e) const;
  // New bases contributed by u when it follows another unitig: |u| - (k-1).
  std::size_t step_length(UnitigId u) const { return unitigs[u].length() - static_cast<std::size_t>(k - 1); }

 private:
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::vector<std::uint32_t>> in_;
};

// Compacts the de Bruijn graph on the solid k-mers. Edge supports come from
// `junctions`, a (k+1)-mer spectrum; without it support falls back to the
// smaller count of the two k-mers. Unitig ids are assigned in sequence order.
AssemblyGraph build_assembly_graph(const SolidSet& solid, const KmerSpectrum* junctions = nullptr);

struct PolishOptions {
  std::size_t min_tip_len = 0;  // 0 selects 2k
  double ratio = 5.0;
  std::size_t keep_isolated_len = 500;
};

// Removes filigree edges, short tips and short isolated unitigs, then
// recompacts. A tip is a dead end shorter than min_tip_len next to a sibling
// branch that is not one. Tags are computed on a snapshot and the pass repeats until
// nothing changes.
AssemblyGraph polish_assembly_graph(const AssemblyGraph& ag, const PolishOptions& options = {});

// In canonical mode every component has a reverse-complement mirror. Keeps
// the member of each mirror pair holding the smaller unitig id; components
// that are their own mirror are kept whole. Ids are renumbered in order.
AssemblyGraph single_strand(const AssemblyGraph& ag);

}  // namespace quasiflow
