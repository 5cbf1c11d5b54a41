#include "quasiflow/coverage_graph.hpp"

#include <functional>
#include <queue>
#include <stdexcept>

namespace quasiflow {

std::uint32_t CoverageGraph::add_node() {
  out_.emplace_back();
  in_.emplace_back();
  return static_cast<std::uint32_t>(node_count_++);
}

std::uint32_t CoverageGraph::add_edge(std::uint32_t from, std::uint32_t to, std::int64_t cov) {
  if (from >= node_count_ || to >= node_count_) throw std::out_of_range("edge endpoint out of range");
  const auto id = static_cast<std::uint32_t>(edges.size());
  edges.push_back({from, to, cov});
  out_[from].push_back(id);
  in_[to].push_back(id);
  return id;
}

void CoverageGraph::index() {
  out_.assign(node_count_, {});
  in_.assign(node_count_, {});
  for (std::uint32_t e = 0; e < edges.size(); ++e) {
    out_[edges[e].from].push_back(e);
    in_[edges[e].to].push_back(e);
  }
}

std::optional<std::uint32_t> CoverageGraph::find_edge(std::uint32_t from, std::uint32_t to) const {
  for (std::uint32_t e : out_[from]) {
    if (edges[e].to == to) return e;
  }
  return std::nullopt;
}

std::int64_t CoverageGraph::in_sum(std::uint32_t v) const {
  std::int64_t s = 0;
  for (std::uint32_t e : in_[v]) s += edges[e].cov;
  return s;
}

std::int64_t CoverageGraph::out_sum(std::uint32_t v) const {
  std::int64_t s = 0;
  for (std::uint32_t e : out_[v]) s += edges[e].cov;
  return s;
}

std::int64_t CoverageGraph::total_cov() const {
  std::int64_t s = 0;
  for (const auto& e : edges) s += e.cov;
  return s;
}

std::optional<std::vector<std::uint32_t>> CoverageGraph::topological_order() const {
  std::vector<std::size_t> indeg(node_count_);
  for (std::uint32_t v = 0; v < node_count_; ++v) indeg[v] = in_[v].size();
  std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
  for (std::uint32_t v = 0; v < node_count_; ++v) {
    if (indeg[v] == 0) ready.push(v);
  }
  std::vector<std::uint32_t> order;
  order.reserve(node_count_);
  while (!ready.empty()) {
    const std::uint32_t v = ready.top();
    ready.pop();
    order.push_back(v);
    for (std::uint32_t e : out_[v]) {
      if (--indeg[edges[e].to] == 0) ready.push(edges[e].to);
    }
  }
  if (order.size() != node_count_) return std::nullopt;
  return order;
}

bool CoverageGraph::reaches(std::uint32_t from, std::uint32_t to) const {
  std::vector<bool> seen(node_count_, false);
  std::vector<std::uint32_t> stack{from};
  seen[from] = true;
  while (!stack.empty()) {
    const std::uint32_t v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    for (std::uint32_t e : out_[v]) {
      const std::uint32_t w = edges[e].to;
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
    }
  }
  return false;
}

}  // namespace quasiflow
