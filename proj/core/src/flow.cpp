#include "quasiflow/flow.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace quasiflow {
namespace {

constexpr std::int64_t kUnreached = std::numeric_limits<std::int64_t>::max() / 4;

struct Residual {
  std::uint32_t arc;
  bool forward;
};

class Solver {
 public:
  explicit Solver(const FlowNetwork& net) : net_(net), adj_(net.node_count) {
    flow_.resize(net.arcs.size(), 0);
    excess_ = net.supply;
    excess_.resize(net.node_count, 0);
    for (std::uint32_t a = 0; a < net.arcs.size(); ++a) {
      const FlowArc& arc = net.arcs[a];
      adj_[arc.from].push_back({a, true});
      adj_[arc.to].push_back({a, false});
      if (arc.cost == ArcCost::kSquareAround) flow_[a] = std::clamp<std::int64_t>(arc.center, 0, arc.cap);
      excess_[arc.from] -= flow_[a];
      excess_[arc.to] += flow_[a];
    }
    potential_.assign(net.node_count, 0);
  }

  FlowAssignment run() {
    while (true) {
      std::vector<std::uint32_t> sources;
      for (std::uint32_t v = 0; v < net_.node_count; ++v) {
        if (excess_[v] > 0) sources.push_back(v);
      }
      if (sources.empty()) break;
      augment(sources);
    }
    for (std::uint32_t v = 0; v < net_.node_count; ++v) {
      if (excess_[v] != 0) throw std::runtime_error("min-cost flow: unbalanced network");
    }
    FlowAssignment out;
    out.flow = flow_;
    for (std::uint32_t a = 0; a < net_.arcs.size(); ++a) out.objective += arc_cost(net_.arcs[a], flow_[a]);
    return out;
  }

 private:
  std::int64_t capacity(const Residual& r) const {
    const FlowArc& arc = net_.arcs[r.arc];
    return r.forward ? arc.cap - flow_[r.arc] : flow_[r.arc];
  }
  std::int64_t marginal(const Residual& r) const {
    const FlowArc& arc = net_.arcs[r.arc];
    const std::int64_t x = flow_[r.arc];
    return r.forward ? arc_cost(arc, x + 1) - arc_cost(arc, x) : arc_cost(arc, x - 1) - arc_cost(arc, x);
  }
  std::uint32_t head(const Residual& r) const { return r.forward ? net_.arcs[r.arc].to : net_.arcs[r.arc].from; }

  void augment(const std::vector<std::uint32_t>& sources) {
    const std::size_t n = net_.node_count;
    std::vector<std::int64_t> dist(n, kUnreached);
    std::vector<Residual> via(n, {UINT32_MAX, true});
    std::vector<bool> done(n, false);
    using Item = std::pair<std::int64_t, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    for (std::uint32_t s : sources) {
      dist[s] = 0;
      queue.push({0, s});
    }
    std::uint32_t target = UINT32_MAX;
    while (!queue.empty()) {
      const auto [d, v] = queue.top();
      queue.pop();
      if (done[v] || d != dist[v]) continue;
      done[v] = true;
      if (excess_[v] < 0) {
        target = v;
        break;
      }
      for (const Residual& r : adj_[v]) {
        if (capacity(r) <= 0) continue;
        const std::uint32_t w = head(r);
        const std::int64_t nd = d + marginal(r) + potential_[v] - potential_[w];
        if (nd < dist[w]) {
          dist[w] = nd;
          via[w] = r;
          queue.push({nd, w});
        }
      }
    }
    if (target == UINT32_MAX) throw std::runtime_error("min-cost flow: infeasible supplies");
    const std::int64_t reach = dist[target];
    for (std::uint32_t v = 0; v < n; ++v) potential_[v] += std::min(dist[v], reach);

    std::vector<Residual> path;
    std::uint32_t v = target;
    while (via[v].arc != UINT32_MAX) {
      path.push_back(via[v]);
      v = via[v].forward ? net_.arcs[via[v].arc].from : net_.arcs[via[v].arc].to;
    }
    const std::uint32_t origin = v;
    std::int64_t amount = std::min(excess_[origin], -excess_[target]);
    for (const Residual& r : path) {
      amount = std::min(amount, capacity(r));
      if (net_.arcs[r.arc].cost != ArcCost::kZero) amount = std::min<std::int64_t>(amount, 1);
    }
    for (const Residual& r : path) flow_[r.arc] += r.forward ? amount : -amount;
    excess_[origin] -= amount;
    excess_[target] += amount;
  }

  const FlowNetwork& net_;
  std::vector<std::vector<Residual>> adj_;
  std::vector<std::int64_t> flow_;
  std::vector<std::int64_t> excess_;
  std::vector<std::int64_t> potential_;
};

}  // namespace

std::int64_t arc_cost(const FlowArc& arc, std::int64_t x) {
  switch (arc.cost) {
    case ArcCost::kZero:
      return 0;
    case ArcCost::kSquare:
      return x * x;
    case ArcCost::kSquareAround:
      return (x - arc.center) * (x - arc.center);
  }
  return 0;
}

std::uint32_t FlowNetwork::add_node() {
  supply.push_back(0);
  return static_cast<std::uint32_t>(node_count++);
}

std::uint32_t FlowNetwork::add_arc(std::uint32_t from, std::uint32_t to, std::int64_t cap, ArcCost cost,
                                   std::int64_t center) {
  arcs.push_back({from, to, cap, cost, center});
  return static_cast<std::uint32_t>(arcs.size() - 1);
}

OffsetFlowNetwork build_offset_network(const CoverageGraph& graph, bool node_costs) {
  OffsetFlowNetwork net;
  const std::size_t n = graph.node_count();
  std::int64_t total = 1;
  for (std::uint32_t v = 0; v < n; ++v) total += graph.node_cov(v);
  total += graph.total_cov();
  net.infinity = total;
  const ArcCost node_cost = node_costs ? ArcCost::kSquare : ArcCost::kZero;

  for (std::uint32_t v = 0; v < n; ++v) {
    net.in_node.push_back(net.add_node());
    net.out_node.push_back(net.add_node());
  }
  net.source = net.add_node();
  net.sink = net.add_node();
  net.super_source = net.add_node();
  net.super_sink = net.add_node();

  for (std::uint32_t v = 0; v < n; ++v) {
    net.node_dec.push_back(net.add_arc(net.out_node[v], net.in_node[v], graph.node_cov(v), node_cost));
    net.node_inc.push_back(net.add_arc(net.in_node[v], net.out_node[v], net.infinity, node_cost));
  }
  for (const auto& e : graph.edges) {
    net.edge_dec.push_back(net.add_arc(net.in_node[e.to], net.out_node[e.from], e.cov, ArcCost::kSquare));
    net.edge_inc.push_back(net.add_arc(net.out_node[e.from], net.in_node[e.to], net.infinity, ArcCost::kSquare));
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (graph.is_source(v)) net.add_arc(net.source, net.in_node[v], net.infinity, ArcCost::kZero);
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (graph.is_sink(v)) net.add_arc(net.out_node[v], net.sink, net.infinity, ArcCost::kZero);
  }
  net.add_arc(net.sink, net.source, net.infinity, ArcCost::kZero);

  std::int64_t pushed = 0;
  for (std::uint32_t v = 0; v < n; ++v) {
    const std::int64_t q = graph.out_sum(v) - graph.in_sum(v);
    net.exogenous.push_back(q);
    if (q == 0) continue;
    const std::uint32_t at = graph.is_source(v) ? net.in_node[v] : net.out_node[v];
    if (q > 0) {
      net.add_arc(at, net.super_sink, q, ArcCost::kZero);
    } else {
      net.add_arc(net.super_source, at, -q, ArcCost::kZero);
    }
    pushed += std::max<std::int64_t>(q, 0);
  }
  net.supply[net.super_source] = pushed;
  net.supply[net.super_sink] = -pushed;
  return net;
}

DirectFlowNetwork build_direct_network(const CoverageGraph& graph) {
  DirectFlowNetwork net;
  const std::size_t n = graph.node_count();
  for (std::uint32_t v = 0; v < n; ++v) net.add_node();
  net.source = net.add_node();
  net.sink = net.add_node();
  const std::int64_t inf = 2 * graph.total_cov() + 1;
  for (const auto& e : graph.edges) {
    net.edge_arc.push_back(net.add_arc(e.from, e.to, inf, ArcCost::kSquareAround, e.cov));
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (graph.is_source(v) && !graph.is_sink(v)) net.add_arc(net.source, v, inf, ArcCost::kZero);
  }
  for (std::uint32_t v = 0; v < n; ++v) {
    if (graph.is_sink(v) && !graph.is_source(v)) net.add_arc(v, net.sink, inf, ArcCost::kZero);
  }
  net.add_arc(net.sink, net.source, inf, ArcCost::kZero);
  return net;
}

FlowAssignment solve_min_cost_flow(const FlowNetwork& net) {
  if (net.supply.size() != net.node_count) throw std::invalid_argument("supply size mismatch");
  return Solver(net).run();
}

CoverageGraph apply_flow_correction(const CoverageGraph& graph, const OffsetFlowNetwork& net,
                                    const FlowAssignment& flow) {
  CoverageGraph out = graph;
  for (std::uint32_t e = 0; e < out.edges.size(); ++e) {
    out.edges[e].cov += flow.flow[net.edge_inc[e]] - flow.flow[net.edge_dec[e]];
    if (out.edges[e].cov < 0) throw std::logic_error("negative corrected coverage");
  }
  return out;
}

std::vector<std::int64_t> corrected_node_coverage(const CoverageGraph& graph, const OffsetFlowNetwork& net,
                                                  const FlowAssignment& flow) {
  std::vector<std::int64_t> out;
  for (std::uint32_t v = 0; v < graph.node_count(); ++v) {
    out.push_back(graph.node_cov(v) + flow.flow[net.node_inc[v]] - flow.flow[net.node_dec[v]]);
  }
  return out;
}

CoverageGraph apply_direct_flow(const CoverageGraph& graph, const DirectFlowNetwork& net, const FlowAssignment& flow) {
  CoverageGraph out = graph;
  for (std::uint32_t e = 0; e < out.edges.size(); ++e) out.edges[e].cov = flow.flow[net.edge_arc[e]];
  return out;
}

}  // namespace quasiflow
