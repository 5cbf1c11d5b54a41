#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace quasiflow {

struct CovEdge {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  std::int64_t cov = 0;
};

// Directed graph over dense node indices with integer edge coverages.
class CoverageGraph {
 public:
  CoverageGraph() = default;
  explicit CoverageGraph(std::size_t nodes) : node_count_(nodes) { index(); }

  std::size_t node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges.size(); }
  std::uint32_t add_node();
  std::uint32_t add_edge(std::uint32_t from, std::uint32_t to, std::int64_t cov);
  void index();  // call after editing `edges` directly

  const std::vector<std::uint32_t>& out_edges(std::uint32_t v) const { return out_[v]; }
  const std::vector<std::uint32_t>& in_edges(std::uint32_t v) const { return in_[v]; }
  std::optional<std::uint32_t> find_edge(std::uint32_t from, std::uint32_t to) const;

  std::int64_t in_sum(std::uint32_t v) const;
  std::int64_t out_sum(std::uint32_t v) const;
  bool is_source(std::uint32_t v) const { return in_[v].empty(); }
  bool is_sink(std::uint32_t v) const { return out_[v].empty(); }
  // In-sum for nodes with predecessors, out-sum for sources.
  std::int64_t node_cov(std::uint32_t v) const { return is_source(v) ? out_sum(v) : in_sum(v); }
  std::int64_t total_cov() const;

  // Kahn order with smallest index first; nullopt when a cycle exists.
  std::optional<std::vector<std::uint32_t>> topological_order() const;
  bool reaches(std::uint32_t from, std::uint32_t to) const;

  std::vector<CovEdge> edges;

 private:
  std::size_t node_count_ = 0;
  std::vector<std::vector<std::uint32_t>> out_;
  std::vector<std::vector<std::uint32_t>> in_;
};

}  // namespace quasiflow
