#include "quasiflow/pairing.hpp"

#include <algorithm>
#include <thread>
#include <unordered_map>

namespace quasiflow {
namespace {

using LinkCounts = std::map<std::pair<UnitigId, UnitigId>, std::uint32_t>;

std::unordered_map<Kmer, UnitigId, KmerHash> index_kmers(const AssemblyGraph& ag) {
  std::unordered_map<Kmer, UnitigId, KmerHash> owner;
  for (const auto& u : ag.unitigs) {
    for_each_kmer(u.seq, ag.k, [&](std::size_t, const Kmer& x) { owner.emplace(x, u.id); });
  }
  return owner;
}

std::vector<UnitigId> window_owners(const std::string& seq, int k,
                                    const std::unordered_map<Kmer, UnitigId, KmerHash>& owner) {
  std::vector<UnitigId> out(seq.size() >= static_cast<std::size_t>(k) ? seq.size() - k + 1 : 0, kNoUnitig);
  for_each_kmer(seq, k, [&](std::size_t pos, const Kmer& x) {
    const auto it = owner.find(x);
    if (it != owner.end()) out[pos] = it->second;
  });
  return out;
}

void link_windows(const std::string& left, const std::string& right, const AssemblyGraph& ag,
                  const std::unordered_map<Kmer, UnitigId, KmerHash>& owner, LinkCounts& links) {
  const auto l = window_owners(left, ag.k, owner);
  const auto r = window_owners(right, ag.k, owner);
  const std::size_t n = std::min(l.size(), r.size());
  for (std::size_t j = 0; j < n; ++j) {
    if (l[j] == kNoUnitig || r[j] == kNoUnitig || l[j] == r[j]) continue;
    ++links[{l[j], r[j]}];
  }
}

}  // namespace

bool PairedInfo::contains(UnitigId u, UnitigId v) const {
  return u < forward.size() && forward[u].contains(v);
}

std::set<UnitigId> PairedInfo::paired(UnitigId u) const {
  std::set<UnitigId> out;
  if (u < forward.size()) {
    for (const auto& [v, _] : forward[u]) out.insert(v);
  }
  return out;
}

std::size_t PairedInfo::link_count() const {
  std::size_t n = 0;
  for (const auto& m : forward) n += m.size();
  return n;
}

PairedInfo associate_paired_unitigs(const ReadSet& reads, const AssemblyGraph& ag, const PairingOptions& options) {
  PairedInfo info;
  info.forward.resize(ag.unitigs.size());
  info.reverse.resize(ag.unitigs.size());
  if (ag.unitigs.empty()) return info;

  const auto owner = index_kmers(ag);
  const std::size_t n = reads.pairs.size();
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.threads, 1)), 1,
                                                      std::max<std::size_t>(n, 1));
  std::vector<LinkCounts> shards(workers);
  auto work = [&](std::size_t w) {
    for (std::size_t i = n * w / workers; i < n * (w + 1) / workers; ++i) {
      const ReadPair& p = reads.pairs[i];
      const std::string mate = options.fr_library ? reverse_complement(p.right) : p.right;
      link_windows(p.left, mate, ag, owner, shards[w]);
      // The same fragment read off the opposite strand.
      if (ag.canonical) link_windows(reverse_complement(mate), reverse_complement(p.left), ag, owner, shards[w]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  LinkCounts merged = std::move(shards[0]);
  for (std::size_t w = 1; w < workers; ++w) {
    for (const auto& [key, c] : shards[w]) merged[key] += c;
  }
  for (const auto& [key, c] : merged) {
    if (c >= options.min_support) info.forward[key.first].emplace(key.second, c);
  }
  build_paired_with_index(info);
  return info;
}

void build_paired_with_index(PairedInfo& info) {
  info.reverse.assign(info.forward.size(), {});
  for (UnitigId u = 0; u < info.forward.size(); ++u) {
    for (const auto& [v, _] : info.forward[u]) {
      if (v >= info.reverse.size()) info.reverse.resize(v + 1);
      info.reverse[v].insert(u);
    }
  }
}

}  // namespace quasiflow
