#include "quasiflow/decompose.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <tuple>

namespace quasiflow {
namespace {

using Key = std::pair<UnitigId, std::vector<UnitigId>>;

std::vector<UnitigId> restrict_to(const PairedInfo& info, UnitigId u, const std::set<UnitigId>& path_unitigs) {
  std::vector<UnitigId> out;
  if (u >= info.size()) return out;
  for (const auto& [v, _] : info.forward[u]) {
    if (path_unitigs.contains(v)) out.push_back(v);
  }
  return out;
}

}  // namespace

std::vector<WeightedPath> decompose_flow_paths(const LocalDag& dag, const PairedInfo& info) {
  const CoverageGraph& g = dag.graph;
  std::vector<std::int64_t> residual(g.edge_count());
  std::vector<std::size_t> indeg(g.node_count(), 0);
  for (std::uint32_t e = 0; e < g.edge_count(); ++e) {
    residual[e] = g.edges[e].cov;
    if (residual[e] > 0) ++indeg[g.edges[e].to];
  }
  auto out_res = [&](std::uint32_t v) {
    std::int64_t s = 0;
    for (std::uint32_t e : g.out_edges(v)) s += residual[e];
    return s;
  };
  auto in_res = [&](std::uint32_t v) {
    std::int64_t s = 0;
    for (std::uint32_t e : g.in_edges(v)) s += residual[e];
    return s;
  };
  auto pointed = [&](std::uint32_t ref, std::uint32_t b) {
    return info.contains(dag.unitigs[ref], dag.unitigs[b]) || info.contains(dag.unitigs[b], dag.unitigs[ref]);
  };

  std::vector<WeightedPath> paths;
  while (true) {
    std::uint32_t start = kNoLocal;
    std::int64_t heaviest = 0;
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
      if (in_res(v) != 0) continue;
      const std::int64_t o = out_res(v);
      if (o > heaviest) {
        heaviest = o;
        start = v;
      }
    }
    if (start == kNoLocal) break;

    WeightedPath p;
    std::vector<std::uint32_t> used;
    p.nodes.push_back(start);
    std::uint32_t ref = start;
    std::uint32_t x = start;
    while (true) {
      std::vector<std::uint32_t> branches;
      for (std::uint32_t e : g.out_edges(x)) {
        if (residual[e] > 0) branches.push_back(e);
      }
      if (branches.empty()) break;
      std::vector<std::uint32_t> candidates;
      for (std::uint32_t e : branches) {
        if (pointed(ref, g.edges[e].to)) candidates.push_back(e);
      }
      if (candidates.empty()) candidates = branches;
      std::uint32_t pick = candidates.front();
      for (std::uint32_t e : candidates) {
        const auto a = std::make_tuple(-residual[e], dag.unitigs[g.edges[e].to]);
        const auto b = std::make_tuple(-residual[pick], dag.unitigs[g.edges[pick].to]);
        if (a < b) pick = e;
      }
      used.push_back(pick);
      const std::uint32_t next = g.edges[pick].to;
      if (indeg[next] > 1) ref = x;
      p.nodes.push_back(next);
      x = next;
    }
    p.weight = residual[used.front()];
    for (std::uint32_t e : used) p.weight = std::min(p.weight, residual[e]);
    for (std::uint32_t e : used) residual[e] -= p.weight;
    paths.push_back(std::move(p));
  }
  return paths;
}

std::vector<WeightedPath> polish_local_paths(const std::vector<WeightedPath>& paths, const LocalDag& dag,
                                             const AssemblyGraph& ag, const PairedInfo& info,
                                             const LocalPathFilter& filter) {
  const std::uint32_t li = dag.local(dag.anchor_from);
  const std::uint32_t lj = dag.local(dag.anchor_to);
  auto support = [&](UnitigId anchor, const WeightedPath& p) -> std::optional<std::size_t> {
    if (anchor >= info.size() || info.forward[anchor].empty()) return std::nullopt;
    std::size_t n = 0;
    for (std::uint32_t v : p.nodes) n += info.contains(anchor, dag.unitigs[v]) ? 1 : 0;
    return n;
  };
  // At a fork, an earlier path node paired with a sibling branch but not
  // with the branch taken contradicts the path. A DAG edge that is not an AG edge
  // takes the AG successors lying outside the DAG.
  auto contradicted = [&](const WeightedPath& p) {
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
      const UnitigId u = dag.unitigs[p.nodes[i]];
      const UnitigId v = dag.unitigs[p.nodes[i + 1]];
      const bool direct = ag.edge_between(u, v).has_value();
      std::vector<UnitigId> taken;
      std::vector<UnitigId> siblings;
      for (std::uint32_t e : ag.out_edges(u)) {
        const UnitigId w = ag.edges[e].to;
        const bool takes = direct ? w == v : dag.local(w) == kNoLocal;
        (takes ? taken : siblings).push_back(w);
      }
      for (std::size_t h = 0; h <= i; ++h) {
        const UnitigId a = dag.unitigs[p.nodes[h]];
        const auto paired = [&](UnitigId w) { return w == a || info.contains(a, w); };
        if (std::any_of(taken.begin(), taken.end(), paired)) continue;
        if (std::any_of(siblings.begin(), siblings.end(), paired)) return true;
      }
    }
    return false;
  };
  std::vector<WeightedPath> kept;
  for (const auto& p : paths) {
    const bool has_i = std::find(p.nodes.begin(), p.nodes.end(), li) != p.nodes.end();
    const bool has_j = std::find(p.nodes.begin(), p.nodes.end(), lj) != p.nodes.end();
    if (!has_i || !has_j || p.weight < filter.min_weight) continue;
    const auto si = support(dag.anchor_from, p);
    const auto sj = support(dag.anchor_to, p);
    if (si && *si < filter.min_copath_support) continue;
    if (sj && *sj < filter.min_copath_support) continue;
    if (contradicted(p)) continue;
    kept.push_back(p);
  }
  return kept;
}

std::size_t Apag::instances_of(UnitigId u) const {
  return static_cast<std::size_t>(std::count_if(nodes.begin(), nodes.end(), [&](const ApagNode& n) {
    return n.unitig == u;
  }));
}

Apag build_apag(const AssemblyGraph& ag, const PairedInfo& info, const std::vector<AnchorPaths>& anchors) {
  std::map<Key, std::uint32_t> ids;
  std::vector<Key> keys;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> links;
  auto instance = [&](Key key) {
    const auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(keys.size());
    ids.emplace(key, id);
    keys.push_back(std::move(key));
    return id;
  };

  for (const auto& anchor : anchors) {
    const LocalDag& dag = *anchor.dag;
    if (dag.anchor_from == dag.anchor_to) continue;
    for (const auto& p : anchor.paths) {
      std::set<UnitigId> on_path;
      for (std::uint32_t v : p.nodes) on_path.insert(dag.unitigs[v]);
      const std::uint32_t a = instance({dag.anchor_from, restrict_to(info, dag.anchor_from, on_path)});
      const std::uint32_t b = instance({dag.anchor_to, restrict_to(info, dag.anchor_to, on_path)});
      links[{a, b}] += p.weight;
    }
  }
  for (const auto& u : ag.unitigs) {
    if (ag.in_degree(u.id) == 0 && ag.out_degree(u.id) == 0) instance({u.id, {}});
  }

  std::set<UnitigId> present;
  for (const auto& key : keys) present.insert(key.first);
  std::map<Key, std::uint32_t> merged;
  for (const auto& key : keys) {
    Key reduced{key.first, {}};
    for (UnitigId v : key.second) {
      if (present.contains(v)) reduced.second.push_back(v);
    }
    merged.emplace(std::move(reduced), 0);
  }
  std::uint32_t next = 0;
  for (auto& [key, id] : merged) id = next++;

  Apag apag;
  apag.k = ag.k;
  apag.graph = CoverageGraph(merged.size());
  apag.nodes.resize(merged.size());
  for (const auto& [key, id] : merged) {
    ApagNode& n = apag.nodes[id];
    n.unitig = key.first;
    n.restricted = key.second;
    n.seq = ag.unitigs[key.first].seq;
    n.abundance = ag.unitigs[key.first].abundance;
  }
  auto final_id = [&](std::uint32_t old) {
    Key reduced{keys[old].first, {}};
    for (UnitigId v : keys[old].second) {
      if (present.contains(v)) reduced.second.push_back(v);
    }
    return merged.at(reduced);
  };
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::int64_t> edges;
  for (const auto& [ab, w] : links) edges[{final_id(ab.first), final_id(ab.second)}] += w;
  for (const auto& [ab, w] : edges) apag.graph.add_edge(ab.first, ab.second, w);
  return apag;
}

}  // namespace quasiflow
