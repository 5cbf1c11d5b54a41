#include "quasiflow/dagcov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace quasiflow {
namespace {

constexpr std::size_t kExactLimit = 12;
constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

struct Candidate {
  std::size_t dist;
  UnitigId from;
  UnitigId to;
};

// Forward Dijkstra from `origin` over AG unitigs. DAG nodes are terminal.
void search_from(const AssemblyGraph& ag, const std::set<UnitigId>& dag_nodes, UnitigId origin,
                 const DagOptions& options, std::vector<Candidate>& out) {
  using Item = std::pair<std::size_t, UnitigId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  std::map<UnitigId, std::size_t> best;
  std::set<UnitigId> done;
  queue.push({0, origin});
  best[origin] = 0;
  std::size_t forks = 0;
  while (!queue.empty()) {
    const auto [d, x] = queue.top();
    queue.pop();
    if (done.contains(x) || best[x] != d) continue;
    done.insert(x);
    if (x != origin && dag_nodes.contains(x)) {
      out.push_back({d, origin, x});
      continue;
    }
    if (ag.out_degree(x) >= 2 && ++forks > options.branch_limit) break;
    const std::size_t step = x == origin ? 0 : ag.step_length(x);
    for (std::uint32_t e : ag.out_edges(x)) {
      const UnitigId y = ag.edges[e].to;
      if (y == origin) continue;
      const std::size_t nd = d + step;
      if (nd >= options.max_dist) continue;
      const auto it = best.find(y);
      if (it == best.end() || nd < it->second) {
        best[y] = nd;
        queue.push({nd, y});
      }
    }
  }
}

bool supported(const PairedInfo& info, const std::vector<UnitigId>& path, UnitigId w) {
  return std::any_of(path.begin(), path.end(), [&](UnitigId y) { return info.contains(y, w); });
}

// One round of the minimisation over the active incoming/outgoing values.
// Returns the chosen outgoing position for each incoming position.
std::vector<std::size_t> solve_round(const std::vector<std::int64_t>& ic, const std::vector<std::int64_t>& oc,
                                     std::int64_t& cost) {
  const std::size_t n = ic.size();
  const std::size_t b = oc.size();
  std::vector<std::size_t> choice(n, 0);
  std::vector<std::int64_t> sums(b, 0);
  auto evaluate = [&] {
    std::int64_t c = 0;
    for (std::size_t u = 0; u < b; ++u) c += std::abs(oc[u] - sums[u]);
    return c;
  };
  if (n > kExactLimit) {
    for (std::size_t v = 0; v < n; ++v) {
      std::size_t pick = 0;
      for (std::size_t u = 1; u < b; ++u) {
        if (oc[u] - sums[u] > oc[pick] - sums[pick]) pick = u;
      }
      choice[v] = pick;
      sums[pick] += ic[v];
    }
    cost = evaluate();
    return choice;
  }

  std::vector<std::int64_t> suffix(n + 1, 0);
  for (std::size_t v = n; v-- > 0;) suffix[v] = suffix[v + 1] + ic[v];
  std::vector<std::size_t> current(n, 0);
  std::int64_t best = kInf;
  auto bound = [&](std::size_t next) {
    std::int64_t over = 0;
    std::int64_t under = 0;
    for (std::size_t u = 0; u < b; ++u) {
      over += std::max<std::int64_t>(0, sums[u] - oc[u]);
      under += std::max<std::int64_t>(0, oc[u] - sums[u]);
    }
    return over + std::max<std::int64_t>(0, under - suffix[next]);
  };
  auto dfs = [&](auto&& self, std::size_t v) -> void {
    if (bound(v) >= best) return;
    if (v == n) {
      best = evaluate();
      choice = current;
      return;
    }
    for (std::size_t u = 0; u < b; ++u) {
      current[v] = u;
      sums[u] += ic[v];
      self(self, v + 1);
      sums[u] -= ic[v];
    }
  };
  dfs(dfs, 0);
  cost = best;
  return choice;
}

}  // namespace

std::uint32_t LocalDag::local(UnitigId u) const {
  const auto it = std::lower_bound(unitigs.begin(), unitigs.end(), u);
  return it != unitigs.end() && *it == u ? static_cast<std::uint32_t>(it - unitigs.begin()) : kNoLocal;
}

std::int64_t LocalDag::anchor_cov() const {
  const auto e = graph.find_edge(local(anchor_from), local(anchor_to));
  return e ? graph.edges[*e].cov : 0;
}

LocalDag build_local_dag(const AssemblyGraph& ag, const PairedInfo& info, UnitigId ui, UnitigId uj,
                         const DagOptions& options) {
  if (!ag.edge_between(ui, uj)) throw std::invalid_argument("anchor is not an AG edge");
  if (options.max_dist == 0) throw std::invalid_argument("max_dist must be positive");
  std::set<UnitigId> nodes{ui, uj};
  for (UnitigId u : {ui, uj}) {
    if (u < info.size()) {
      for (const auto& [v, _] : info.forward[u]) nodes.insert(v);
    }
  }
  LocalDag dag;
  dag.anchor_from = ui;
  dag.anchor_to = uj;
  dag.unitigs.assign(nodes.begin(), nodes.end());
  dag.graph = CoverageGraph(dag.unitigs.size());

  std::vector<Candidate> candidates;
  for (UnitigId u : dag.unitigs) search_from(ag, nodes, u, options, candidates);
  std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
    return std::tie(a.dist, a.from, a.to) < std::tie(b.dist, b.from, b.to);
  });
  for (const auto& c : candidates) {
    const std::uint32_t from = dag.local(c.from);
    const std::uint32_t to = dag.local(c.to);
    if (dag.graph.find_edge(from, to) || dag.graph.reaches(to, from)) continue;
    dag.graph.add_edge(from, to, 0);
  }
  return dag;
}

std::int64_t estimate_edge_coverage(const AssemblyGraph& ag, const PairedInfo& info, UnitigId ui, UnitigId uj,
                                    UnitigId s, UnitigId e, const std::set<UnitigId>& dag_nodes,
                                    const DagOptions& options) {
  if (s == ui) return e == uj ? ag.support(ui, uj) : 0;

  TraversalState start;
  start.path = {ui, uj};
  start.cov = ag.support(ui, uj);
  for (std::uint32_t id : ag.in_edges(uj)) {
    if (ag.edges[id].from != ui) start.bag.push_back(ag.edges[id].support);
  }
  start.reached_s = uj == s;

  std::int64_t total = 0;
  std::vector<TraversalState> stack{std::move(start)};
  std::size_t states = 0;
  while (!stack.empty() && states++ < options.state_limit) {
    TraversalState t = std::move(stack.back());
    stack.pop_back();
    const UnitigId x = t.path.back();
    const auto& outs = ag.out_edges(x);
    if (outs.empty()) continue;

    std::vector<std::int64_t> incoming = t.bag;
    incoming.push_back(t.cov);
    std::vector<std::int64_t> outgoing;
    std::vector<std::uint32_t> ids;
    for (std::uint32_t id : outs) {
      outgoing.push_back(ag.edges[id].support);
      ids.push_back(ag.edges[id].to);
    }
    const CoverageAssignment assignment = assign_coverages(incoming, outgoing, ids);

    std::vector<bool> pointed(outs.size());
    bool any_pointed = false;
    for (std::size_t u = 0; u < outs.size(); ++u) {
      pointed[u] = supported(info, t.path, ids[u]);
      any_pointed = any_pointed || pointed[u];
    }

    std::vector<TraversalState> children;
    for (std::size_t u = 0; u < outs.size(); ++u) {
      const UnitigId w = ids[u];
      if (std::find(t.path.begin(), t.path.end(), w) != t.path.end()) continue;
      if (t.reached_s && w != e && dag_nodes.contains(w)) continue;
      if (any_pointed && !pointed[u]) continue;

      TraversalState next;
      std::int64_t assigned = 0;
      for (std::size_t v = 0; v < t.bag.size(); ++v) {
        const std::int64_t c = assignment.consumed[v][u];
        if (c > 0) {
          next.bag.push_back(c);
          assigned += c;
        }
      }
      next.cov = std::max<std::int64_t>(outgoing[u] - assigned, 0);
      if (next.cov == 0) continue;
      if (t.reached_s && w == e) {
        total += next.cov;
        continue;
      }
      next.path = t.path;
      next.path.push_back(w);
      if (!t.reached_s && w == s) {
        next.reached_s = true;
        next.dist = 0;
      } else {
        next.reached_s = t.reached_s;
        next.dist = t.dist + ag.step_length(w);
        const std::size_t limit = t.reached_s ? options.max_dist : 2 * options.max_dist;
        if (next.dist >= limit) continue;
      }
      for (std::uint32_t id : ag.in_edges(w)) {
        if (ag.edges[id].from != x) next.bag.push_back(ag.edges[id].support);
      }
      children.push_back(std::move(next));
    }
    for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(std::move(*it));
  }
  return total;
}

void estimate_dag_coverages(const AssemblyGraph& ag, const PairedInfo& info, LocalDag& dag,
                            const DagOptions& options) {
  const std::set<UnitigId> nodes(dag.unitigs.begin(), dag.unitigs.end());
  std::vector<CovEdge> kept;
  for (const auto& edge : dag.graph.edges) {
    const std::int64_t c = estimate_edge_coverage(ag, info, dag.anchor_from, dag.anchor_to, dag.unitigs[edge.from],
                                                  dag.unitigs[edge.to], nodes, options);
    if (c > 0) kept.push_back({edge.from, edge.to, c});
  }
  dag.graph.edges = std::move(kept);
  dag.graph.index();
}

CoverageAssignment assign_coverages(const std::vector<std::int64_t>& incoming,
                                    const std::vector<std::int64_t>& outgoing,
                                    const std::vector<std::uint32_t>& out_ids) {
  const std::size_t n = incoming.size();
  const std::size_t b = outgoing.size();
  CoverageAssignment r;
  r.first_choice.assign(n, 0);
  r.consumed.assign(n, std::vector<std::int64_t>(b, 0));
  r.in_residual = incoming;
  r.out_residual = outgoing;
  r.last_out.assign(n, -1);
  if (n == 0 || b == 0) return r;
  auto id_of = [&](std::size_t u) { return out_ids.empty() ? static_cast<std::uint32_t>(u) : out_ids[u]; };

  for (bool first = true;; first = false) {
    std::vector<std::size_t> ins;
    std::vector<std::size_t> outs;
    for (std::size_t v = 0; v < n; ++v) {
      if (r.in_residual[v] > 0) ins.push_back(v);
    }
    for (std::size_t u = 0; u < b; ++u) {
      if (r.out_residual[u] > 0) outs.push_back(u);
    }
    if (ins.empty() || outs.empty()) {
      if (first) {
        r.first_cost = std::accumulate(incoming.begin(), incoming.end(), std::int64_t{0}) +
                       std::accumulate(outgoing.begin(), outgoing.end(), std::int64_t{0});
      }
      break;
    }
    std::stable_sort(ins.begin(), ins.end(),
                     [&](std::size_t a, std::size_t c) { return r.in_residual[a] > r.in_residual[c]; });
    std::stable_sort(outs.begin(), outs.end(), [&](std::size_t a, std::size_t c) {
      if (r.out_residual[a] != r.out_residual[c]) return r.out_residual[a] > r.out_residual[c];
      return id_of(a) < id_of(c);
    });
    std::vector<std::int64_t> ic;
    std::vector<std::int64_t> oc;
    for (std::size_t v : ins) ic.push_back(r.in_residual[v]);
    for (std::size_t u : outs) oc.push_back(r.out_residual[u]);

    std::int64_t cost = 0;
    const auto choice = solve_round(ic, oc, cost);
    if (first) {
      r.first_cost = cost;
      for (std::size_t i = 0; i < ins.size(); ++i) r.first_choice[ins[i]] = outs[choice[i]];
    }
    // Incoming values are already in descending order, so consumption per
    // outgoing proceeds largest first.
    for (std::size_t j = 0; j < outs.size(); ++j) {
      const std::size_t u = outs[j];
      std::int64_t room = r.out_residual[u];
      for (std::size_t i = 0; i < ins.size(); ++i) {
        if (choice[i] != j) continue;
        const std::size_t v = ins[i];
        const std::int64_t take = std::min(r.in_residual[v], room);
        r.consumed[v][u] += take;
        r.in_residual[v] -= take;
        room -= take;
        r.last_out[v] = static_cast<std::ptrdiff_t>(u);
      }
      r.out_residual[u] = room;
    }
  }
  return r;
}

std::int64_t brute_force_assignment_cost(const std::vector<std::int64_t>& incoming,
                                         const std::vector<std::int64_t>& outgoing) {
  const std::size_t n = incoming.size();
  const std::size_t b = outgoing.size();
  if (b == 0) return 0;
  std::int64_t best = kInf;
  std::vector<std::size_t> choice(n, 0);
  while (true) {
    std::vector<std::int64_t> sums(b, 0);
    for (std::size_t v = 0; v < n; ++v) sums[choice[v]] += incoming[v];
    std::int64_t c = 0;
    for (std::size_t u = 0; u < b; ++u) c += std::abs(outgoing[u] - sums[u]);
    best = std::min(best, c);
    std::size_t v = 0;
    while (v < n && ++choice[v] == b) choice[v++] = 0;
    if (v == n) break;
  }
  return best;
}

std::vector<std::int64_t> proportional_split(std::int64_t total, const std::vector<double>& weights) {
  const std::size_t m = weights.size();
  std::vector<std::int64_t> out(m, 0);
  if (m == 0) return out;
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> exact(m);
  for (std::size_t i = 0; i < m; ++i) {
    exact[i] = sum > 0.0 ? static_cast<double>(total) * weights[i] / sum
                         : static_cast<double>(total) / static_cast<double>(m);
  }
  std::int64_t given = 0;
  for (std::size_t i = 0; i < m; ++i) {
    out[i] = static_cast<std::int64_t>(std::floor(exact[i] + 1e-9));
    given += out[i];
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return exact[a] - std::floor(exact[a] + 1e-9) > exact[b] - std::floor(exact[b] + 1e-9);
  });
  for (std::size_t i = 0; given < total; i = (i + 1) % m, ++given) ++out[order[i]];
  return out;
}

void readjust_coverages(LocalDag& dag, double ratio) {
  CoverageGraph& g = dag.graph;
  const auto order = g.topological_order();
  if (!order) throw std::logic_error("local DAG has a cycle");
  for (std::uint32_t v : *order) {
    const auto& ins = g.in_edges(v);
    const auto& outs = g.out_edges(v);
    if (ins.empty() || outs.empty()) continue;
    const std::int64_t in = g.in_sum(v);
    const std::int64_t out = g.out_sum(v);
    const auto lo = static_cast<double>(std::min(in, out));
    if (static_cast<double>(std::max(in, out)) <= (1.0 + ratio) * lo) continue;

    if (outs.size() == 1) {
      g.edges[outs.front()].cov = in;
    } else if (ins.size() == 1) {
      const std::int64_t anchor = dag.anchor_cov();
      std::vector<double> diff;
      for (std::uint32_t e : outs) diff.push_back(std::abs(static_cast<double>(g.edges[e].cov - anchor)));
      const double total = std::accumulate(diff.begin(), diff.end(), 0.0);
      std::vector<double> weight;
      for (double d : diff) weight.push_back(std::abs(d - total));
      const auto split = proportional_split(in, weight);
      for (std::size_t i = 0; i < outs.size(); ++i) g.edges[outs[i]].cov = split[i];
    } else {
      std::vector<std::int64_t> ic;
      std::vector<std::int64_t> oc;
      std::vector<std::uint32_t> ids;
      for (std::uint32_t e : ins) ic.push_back(g.edges[e].cov);
      for (std::uint32_t e : outs) {
        oc.push_back(g.edges[e].cov);
        ids.push_back(dag.unitigs[g.edges[e].to]);
      }
      const auto a = assign_coverages(ic, oc, ids);
      std::vector<std::int64_t> next(outs.size(), 0);
      for (std::size_t i = 0; i < ic.size(); ++i) {
        for (std::size_t u = 0; u < outs.size(); ++u) next[u] += a.consumed[i][u];
        const std::size_t sink = a.last_out[i] < 0 ? 0 : static_cast<std::size_t>(a.last_out[i]);
        next[sink] += a.in_residual[i];
      }
      for (std::size_t u = 0; u < outs.size(); ++u) g.edges[outs[u]].cov = next[u];
    }
  }
}

std::int64_t err_objective(const CoverageGraph& graph, const std::vector<WeightedPath>& paths) {
  std::vector<std::int64_t> node_flow(graph.node_count(), 0);
  std::vector<std::int64_t> edge_flow(graph.edge_count(), 0);
  for (const auto& p : paths) {
    for (std::uint32_t v : p.nodes) node_flow[v] += p.weight;
    for (std::size_t i = 0; i + 1 < p.nodes.size(); ++i) {
      const auto e = graph.find_edge(p.nodes[i], p.nodes[i + 1]);
      if (!e) throw std::invalid_argument("path uses a missing edge");
      edge_flow[*e] += p.weight;
    }
  }
  std::int64_t cost = 0;
  for (std::uint32_t v = 0; v < graph.node_count(); ++v) {
    const std::int64_t d = graph.node_cov(v) - node_flow[v];
    cost += d * d;
  }
  for (std::uint32_t e = 0; e < graph.edge_count(); ++e) {
    const std::int64_t d = graph.edges[e].cov - edge_flow[e];
    cost += d * d;
  }
  return cost;
}

}  // namespace quasiflow
