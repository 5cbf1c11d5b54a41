#include "quasiflow/dbg.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace quasiflow {
namespace {

using KmerSet = std::unordered_set<Kmer, KmerHash>;
using SupportLookup = std::function<std::uint32_t(const Kmer& junction, const Kmer& from, const Kmer& to)>;

Kmer make_junction(const Kmer& from, const Kmer& to, bool canonical) {
  std::string s = from.str();
  s.push_back(to.base(to.k() - 1));
  Kmer j(s);
  return canonical ? canonicalize(j).kmer : j;
}

// Oriented view over a k-mer table keyed by canonical (or forward) k-mers.
class KmerGraph {
 public:
  KmerGraph(const KmerCounts& kmers, bool canonical, const KmerSet& forbidden)
      : kmers_(kmers), canonical_(canonical), forbidden_(forbidden) {}

  std::uint32_t count(const Kmer& x) const {
    const auto it = kmers_.find(canonical_ ? canonicalize(x).kmer : x);
    return it == kmers_.end() ? 0 : it->second;
  }
  bool contains(const Kmer& x) const { return count(x) > 0; }

  std::vector<Kmer> successors(const Kmer& x) const {
    std::vector<Kmer> out;
    for (std::uint8_t c = 0; c < 4; ++c) {
      Kmer y = x.shifted_left(c);
      if (contains(y) && allowed(x, y)) out.push_back(y);
    }
    return out;
  }
  std::vector<Kmer> predecessors(const Kmer& y) const {
    std::vector<Kmer> out;
    for (std::uint8_t c = 0; c < 4; ++c) {
      Kmer x = y.shifted_right(c);
      if (contains(x) && allowed(x, y)) out.push_back(x);
    }
    return out;
  }

 private:
  bool allowed(const Kmer& x, const Kmer& y) const {
    return forbidden_.empty() || !forbidden_.contains(make_junction(x, y, canonical_));
  }

  const KmerCounts& kmers_;
  bool canonical_;
  const KmerSet& forbidden_;
};

AssemblyGraph compact(const KmerCounts& kmers, int k, bool canonical, const SupportLookup& support,
                      const KmerSet& forbidden) {
  KmerGraph g(kmers, canonical, forbidden);
  std::vector<Kmer> nodes;
  nodes.reserve(kmers.size() * (canonical ? 2 : 1));
  for (const auto& [kmer, _] : kmers) {
    nodes.push_back(kmer);
    if (canonical) {
      Kmer rc = kmer.reverse_complement();
      if (rc != kmer) nodes.push_back(rc);
    }
  }
  std::sort(nodes.begin(), nodes.end());

  std::vector<std::vector<Kmer>> paths;
  KmerSet visited;
  auto walk = [&](const Kmer& start) {
    std::vector<Kmer> path{start};
    visited.insert(start);
    Kmer cur = start;
    while (true) {
      auto next = g.successors(cur);
      if (next.size() != 1) break;
      const Kmer& y = next.front();
      if (visited.contains(y) || g.predecessors(y).size() != 1) break;
      path.push_back(y);
      visited.insert(y);
      cur = y;
    }
    paths.push_back(std::move(path));
  };
  for (const Kmer& x : nodes) {
    if (visited.contains(x)) continue;
    auto pred = g.predecessors(x);
    bool start = pred.size() != 1;
    if (!start) start = pred.front() == x || g.successors(pred.front()).size() != 1;
    if (start) walk(x);
  }
  // Whatever is left lies on isolated cycles.
  for (const Kmer& x : nodes) {
    if (!visited.contains(x)) walk(x);
  }

  struct Raw {
    std::string seq;
    std::vector<std::uint32_t> counts;
    Kmer first;
    Kmer last;
  };
  std::vector<Raw> raw;
  raw.reserve(paths.size());
  for (const auto& path : paths) {
    Raw r;
    r.seq = path.front().str();
    for (std::size_t i = 1; i < path.size(); ++i) r.seq.push_back(path[i].base(k - 1));
    for (const Kmer& x : path) r.counts.push_back(g.count(x));
    r.first = path.front();
    r.last = path.back();
    raw.push_back(std::move(r));
  }

  // Deterministic ids: sort by sequence; in canonical mode twins are adjacent,
  // the lexicographically smaller strand first.
  std::vector<std::size_t> order(raw.size());
  std::iota(order.begin(), order.end(), 0);
  std::unordered_map<Kmer, std::size_t, KmerHash> first_of;
  for (std::size_t i = 0; i < raw.size(); ++i) first_of.emplace(raw[i].first, i);
  std::vector<std::size_t> twin_raw(raw.size(), SIZE_MAX);
  if (canonical) {
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto it = first_of.find(raw[i].last.reverse_complement());
      if (it == first_of.end()) throw std::logic_error("unitig without reverse-complement twin");
      twin_raw[i] = it->second;
    }
  }
  auto key = [&](std::size_t i) -> const std::string& {
    if (!canonical) return raw[i].seq;
    const std::size_t t = twin_raw[i];
    return raw[t].seq < raw[i].seq ? raw[t].seq : raw[i].seq;
  };
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& ka = key(a);
    const auto& kb = key(b);
    if (ka != kb) return ka < kb;
    return raw[a].seq < raw[b].seq;
  });

  AssemblyGraph ag;
  ag.k = k;
  ag.canonical = canonical;
  std::vector<UnitigId> id_of(raw.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) id_of[order[pos]] = static_cast<UnitigId>(pos);
  ag.unitigs.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    Unitig& u = ag.unitigs[id_of[i]];
    u.id = id_of[i];
    u.kmer_count = static_cast<std::uint32_t>(raw[i].counts.size());
    u.abundance = std::accumulate(raw[i].counts.begin(), raw[i].counts.end(), 0.0) / u.kmer_count;
    u.seq = std::move(raw[i].seq);
    u.counts = std::move(raw[i].counts);
    if (canonical) u.twin = id_of[twin_raw[i]];
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    for (const Kmer& y : g.successors(raw[i].last)) {
      const auto it = first_of.find(y);
      if (it == first_of.end()) throw std::logic_error("successor k-mer is not a unitig head");
      const std::uint32_t s = support(make_junction(raw[i].last, y, canonical), raw[i].last, y);
      ag.edges.push_back({id_of[i], id_of[it->second], std::max<std::uint32_t>(s, 1)});
    }
  }
  std::sort(ag.edges.begin(), ag.edges.end(),
            [](const AgEdge& a, const AgEdge& b) { return std::tie(a.from, a.to) < std::tie(b.from, b.to); });
  ag.index();
  return ag;
}

}  // namespace

void AssemblyGraph::index() {
  out_.assign(unitigs.size(), {});
  in_.assign(unitigs.size(), {});
  for (std::uint32_t i = 0; i < edges.size(); ++i) {
    out_[edges[i].from].push_back(i);
    in_[edges[i].to].push_back(i);
  }
}

std::optional<std::uint32_t> AssemblyGraph::edge_between(UnitigId from, UnitigId to) const {
  for (std::uint32_t e : out_[from]) {
    if (edges[e].to == to) return e;
  }
  return std::nullopt;
}

std::uint32_t AssemblyGraph::support(UnitigId from, UnitigId to) const {
  const auto e = edge_between(from, to);
  return e ? edges[*e].support : 0;
}

std::uint32_t AssemblyGraph::node_abu(UnitigId u) const {
  std::uint32_t m = 0;
  for (std::uint32_t e : out_[u]) m = std::max(m, edges[e].support);
  for (std::uint32_t e : in_[u]) m = std::max(m, edges[e].support);
  return m;
}

Kmer AssemblyGraph::junction(const AgEdge& e) const {
  const std::string& a = unitigs[e.from].seq;
  const std::string& b = unitigs[e.to].seq;
  Kmer from(std::string_view(a).substr(a.size() - static_cast<std::size_t>(k)));
  Kmer to(std::string_view(b).substr(0, static_cast<std::size_t>(k)));
  return make_junction(from, to, canonical);
}

AssemblyGraph build_assembly_graph(const SolidSet& solid, const KmerSpectrum* junctions) {
  if (junctions != nullptr && junctions->k != solid.k + 1) {
    throw std::invalid_argument("junction spectrum must use k+1");
  }
  const bool canonical = solid.canonical;
  SupportLookup lookup = [&](const Kmer& junction, const Kmer& from, const Kmer& to) -> std::uint32_t {
    if (junctions != nullptr) {
      const auto it = junctions->counts.find(junction);
      return it == junctions->counts.end() ? 0 : it->second;
    }
    auto count = [&](const Kmer& x) {
      const auto it = solid.kmers.find(canonical ? canonicalize(x).kmer : x);
      return it == solid.kmers.end() ? 0U : it->second;
    };
    return std::min(count(from), count(to));
  };
  return compact(solid.kmers, solid.k, canonical, lookup, {});
}

AssemblyGraph polish_assembly_graph(const AssemblyGraph& ag, const PolishOptions& options) {
  if (options.ratio < 1.0) throw std::invalid_argument("filigree ratio must be >= 1");
  const std::size_t min_tip = options.min_tip_len == 0 ? static_cast<std::size_t>(2 * ag.k) : options.min_tip_len;

  std::unordered_map<Kmer, std::uint32_t, KmerHash> supports;
  for (const auto& e : ag.edges) supports.emplace(ag.junction(e), e.support);
  const SupportLookup lookup = [&](const Kmer& junction, const Kmer&, const Kmer&) -> std::uint32_t {
    const auto it = supports.find(junction);
    return it == supports.end() ? 1 : it->second;
  };

  KmerSet forbidden;
  AssemblyGraph cur = ag;
  while (true) {
    std::vector<bool> drop_unitig(cur.unitigs.size(), false);
    bool changed = false;
    for (const auto& e : cur.edges) {
      const double lhs = static_cast<double>(e.support) * options.ratio;
      if (lhs < static_cast<double>(std::min(cur.node_abu(e.from), cur.node_abu(e.to)))) {
        if (forbidden.insert(cur.junction(e)).second) changed = true;
      }
    }
    std::vector<bool> short_end(cur.unitigs.size(), false);
    for (const auto& u : cur.unitigs) {
      short_end[u.id] = (cur.in_degree(u.id) == 0) != (cur.out_degree(u.id) == 0) && u.length() < min_tip;
    }
    for (const auto& u : cur.unitigs) {
      if (cur.in_degree(u.id) == 0 && cur.out_degree(u.id) == 0) {
        drop_unitig[u.id] = u.length() < options.keep_isolated_len;
      } else if (short_end[u.id]) {
        // A tip needs a sibling branch that is not itself a short end;
        // otherwise it is where the genome stops.
        bool at_branch = false;
        if (cur.in_degree(u.id) == 0) {
          for (std::uint32_t e : cur.out_edges(u.id)) {
            for (std::uint32_t f : cur.in_edges(cur.edges[e].to)) {
              const UnitigId w = cur.edges[f].from;
              at_branch |= w != u.id && !short_end[w];
            }
          }
        } else {
          for (std::uint32_t e : cur.in_edges(u.id)) {
            for (std::uint32_t f : cur.out_edges(cur.edges[e].from)) {
              const UnitigId w = cur.edges[f].to;
              at_branch |= w != u.id && !short_end[w];
            }
          }
        }
        drop_unitig[u.id] = at_branch;
      }
      changed |= drop_unitig[u.id];
    }
    if (!changed) break;

    KmerCounts kmers;
    for (const auto& u : cur.unitigs) {
      if (drop_unitig[u.id]) continue;
      for_each_kmer(u.seq, cur.k, [&](std::size_t pos, const Kmer& x) {
        kmers[cur.canonical ? canonicalize(x).kmer : x] = u.counts[pos];
      });
    }
    cur = compact(kmers, cur.k, cur.canonical, lookup, forbidden);
  }
  return cur;
}

AssemblyGraph single_strand(const AssemblyGraph& ag) {
  if (!ag.canonical || ag.unitigs.empty()) return ag;
  const std::size_t n = ag.unitigs.size();
  std::vector<UnitigId> comp(n, kNoUnitig);
  for (UnitigId root = 0; root < n; ++root) {
    if (comp[root] != kNoUnitig) continue;
    std::vector<UnitigId> stack{root};
    comp[root] = root;
    while (!stack.empty()) {
      const UnitigId u = stack.back();
      stack.pop_back();
      auto visit = [&](UnitigId v) {
        if (comp[v] == kNoUnitig) {
          comp[v] = root;
          stack.push_back(v);
        }
      };
      for (std::uint32_t e : ag.out_edges(u)) visit(ag.edges[e].to);
      for (std::uint32_t e : ag.in_edges(u)) visit(ag.edges[e].from);
    }
  }
  // Component ids are their smallest member, so comparing roots is enough.
  std::vector<UnitigId> new_id(n, kNoUnitig);
  AssemblyGraph out;
  out.k = ag.k;
  out.canonical = ag.canonical;
  for (UnitigId u = 0; u < n; ++u) {
    const UnitigId mirror = ag.unitigs[u].twin == kNoUnitig ? comp[u] : comp[ag.unitigs[u].twin];
    if (comp[u] > mirror) continue;
    new_id[u] = static_cast<UnitigId>(out.unitigs.size());
    out.unitigs.push_back(ag.unitigs[u]);
    out.unitigs.back().id = new_id[u];
  }
  for (auto& u : out.unitigs) {
    if (u.twin != kNoUnitig) u.twin = new_id[u.twin];
  }
  for (const auto& e : ag.edges) {
    if (new_id[e.from] != kNoUnitig && new_id[e.to] != kNoUnitig) {
      out.edges.push_back({new_id[e.from], new_id[e.to], e.support});
    }
  }
  out.index();
  return out;
}

}  // namespace quasiflow
