#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "quasiflow/dbg.hpp"
#include "quasiflow/seqio.hpp"

namespace quasiflow {

// P(U) per unitig with link supports, plus the reverse index
// paired_with[u] = {v : u in P(v)}.
struct PairedInfo {
  std::vector<std::map<UnitigId, std::uint32_t>> forward;
  std::vector<std::set<UnitigId>> reverse;

  std::size_t size() const { return forward.size(); }
  bool contains(UnitigId u, UnitigId v) const;  // v in P(u)
  std::set<UnitigId> paired(UnitigId u) const;
  std::size_t link_count() const;
};

struct PairingOptions {
  std::uint32_t min_support = 2;
  // Right mate is reverse-complemented (FR library). Canonical graphs are
  // also linked along the opposite strand.
  bool fr_library = true;
  int threads = 1;
};

// Adds unitig(R[j..j+k)) to P(unitig(L[j..j+k))) for every offset j where both
// windows are k-mers of the graph. Self links are not recorded.
PairedInfo associate_paired_unitigs(const ReadSet& reads, const AssemblyGraph& ag, const PairingOptions& options = {});

// Recomputes `reverse` from `forward`.
void build_paired_with_index(PairedInfo& info);

}  // namespace quasiflow
