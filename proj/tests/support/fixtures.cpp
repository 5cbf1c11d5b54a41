#include "fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace quasiflow::fixture {

std::string random_dna(std::mt19937_64& rng, std::size_t len) {
  static constexpr char kBases[] = "ACGT";
  std::uniform_int_distribution<int> pick(0, 3);
  std::string s(len, 'A');
  for (char& c : s) c = kBases[pick(rng)];
  return s;
}

AssemblyGraph make_ag(int k, const std::vector<std::size_t>& lengths,
                      const std::vector<std::tuple<UnitigId, UnitigId, std::uint32_t>>& edges) {
  std::mt19937_64 rng(k * 7919 + lengths.size());
  AssemblyGraph ag;
  ag.k = k;
  ag.canonical = false;
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    Unitig u;
    u.id = static_cast<UnitigId>(i);
    u.seq = random_dna(rng, lengths[i]);
    u.kmer_count = static_cast<std::uint32_t>(lengths[i] - static_cast<std::size_t>(k) + 1);
    u.abundance = 10.0;
    ag.unitigs.push_back(std::move(u));
  }
  for (const auto& [from, to, support] : edges) ag.edges.push_back({from, to, support});
  ag.index();
  return ag;
}

PairedInfo make_pairs(std::size_t unitigs, const std::vector<std::pair<UnitigId, UnitigId>>& links,
                      std::uint32_t support) {
  PairedInfo info;
  info.forward.resize(unitigs);
  for (const auto& [u, v] : links) info.forward[u][v] = support;
  build_paired_with_index(info);
  return info;
}

GraphFixture branch_fixture() {
  GraphFixture f;
  f.ag = make_ag(5, std::vector<std::size_t>(6, 20),
                 {{U(1), U(2), 10}, {U(1), U(3), 2}, {U(2), U(4), 10}, {U(3), U(4), 2}, {U(4), U(5), 10},
                  {U(4), U(6), 4}});
  f.info = make_pairs(6, {{U(2), U(4)}, {U(2), U(5)}, {U(4), U(5)}, {U(4), U(6)}});
  return f;
}

TraceFixture trace_fixture() {
  // ids: 0 Ui, 1 Uj, 2 s, 3 U1, 4 U2, 5 U3, 6 U4, 7 e, 8 Uw, 9 Ui1, 10 Ui2
  TraceFixture t{};
  t.ui = 0;
  t.uj = 1;
  t.s = 2;
  t.u1 = 3;
  t.u2 = 4;
  t.u3 = 5;
  t.u4 = 6;
  t.e = 7;
  t.ag = make_ag(5, std::vector<std::size_t>(11, 20),
                 {{0, 1, 5}, {8, 1, 10}, {1, 2, 15}, {2, 3, 15}, {9, 3, 10}, {3, 4, 25}, {10, 4, 3}, {4, 5, 5},
                  {4, 6, 23}, {5, 7, 5}});
  t.info = make_pairs(11, {});
  return t;
}

CoverageGraph random_dag(std::mt19937_64& rng, std::size_t max_nodes, std::int64_t max_cov, double density,
                         std::size_t max_edges) {
  std::uniform_int_distribution<std::size_t> nodes(2, max_nodes);
  std::uniform_int_distribution<std::int64_t> cov(0, max_cov);
  std::bernoulli_distribution coin(density);
  const std::size_t n = nodes(rng);
  CoverageGraph g(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (g.edge_count() < max_edges && coin(rng)) g.add_edge(i, j, cov(rng));
    }
  }
  if (g.edge_count() == 0) g.add_edge(0, 1, cov(rng));
  return g;
}

namespace {

struct BruteForce {
  const CoverageGraph& g;
  std::int64_t window;
  std::vector<std::int64_t> value;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();

  static std::int64_t sq(std::int64_t x) { return x * x; }

  std::int64_t lo(std::uint32_t e) const { return std::max<std::int64_t>(0, g.edges[e].cov - window); }
  std::int64_t hi(std::uint32_t e) const { return g.edges[e].cov + window; }

  void node(std::uint32_t v, std::int64_t cost) {
    if (cost >= best) return;
    if (v == g.node_count()) {
      best = cost;
      return;
    }
    const auto& outs = g.out_edges(v);
    if (g.is_source(v)) {
      if (outs.empty()) return node(v + 1, cost);
      return free_out(v, 0, 0, cost);
    }
    std::int64_t in = 0;
    for (std::uint32_t e : g.in_edges(v)) in += value[e];
    const std::int64_t c = cost + sq(in - g.in_sum(v));
    if (outs.empty()) return node(v + 1, c);
    fixed_out(v, 0, in, c);
  }

  // Source: every out-edge free within its window; node cost on the out-sum.
  void free_out(std::uint32_t v, std::size_t i, std::int64_t sum, std::int64_t cost) {
    if (cost >= best) return;
    const auto& outs = g.out_edges(v);
    if (i == outs.size()) return node(v + 1, cost + sq(sum - g.out_sum(v)));
    const std::uint32_t e = outs[i];
    for (std::int64_t x = lo(e); x <= hi(e); ++x) {
      value[e] = x;
      free_out(v, i + 1, sum + x, cost + sq(x - g.edges[e].cov));
    }
  }

  // Internal node: out-edges must add up to the in-sum.
  void fixed_out(std::uint32_t v, std::size_t i, std::int64_t left, std::int64_t cost) {
    if (cost >= best) return;
    const auto& outs = g.out_edges(v);
    if (i == outs.size()) {
      if (left == 0) node(v + 1, cost);
      return;
    }
    std::int64_t rest_lo = 0;
    std::int64_t rest_hi = 0;
    for (std::size_t j = i + 1; j < outs.size(); ++j) {
      rest_lo += lo(outs[j]);
      rest_hi += hi(outs[j]);
    }
    const std::uint32_t e = outs[i];
    for (std::int64_t x = lo(e); x <= hi(e); ++x) {
      const std::int64_t after = left - x;
      if (after < rest_lo) break;
      if (after > rest_hi) continue;
      value[e] = x;
      fixed_out(v, i + 1, after, cost + sq(x - g.edges[e].cov));
    }
  }
};

}  // namespace

std::int64_t brute_force_correction(const CoverageGraph& graph, std::int64_t window, std::int64_t bound) {
  BruteForce bf{graph, window, std::vector<std::int64_t>(graph.edge_count(), 0), bound};
  bf.node(0, 0);
  return bf.best;
}

std::int64_t correction_cost(const CoverageGraph& original, const CoverageGraph& corrected) {
  std::int64_t cost = 0;
  for (std::size_t e = 0; e < original.edges.size(); ++e) {
    const std::int64_t d = corrected.edges[e].cov - original.edges[e].cov;
    cost += d * d;
  }
  for (std::uint32_t v = 0; v < original.node_count(); ++v) {
    const std::int64_t d = corrected.node_cov(v) - original.node_cov(v);
    cost += d * d;
  }
  return cost;
}

LocalDag as_local_dag(const CoverageGraph& graph) {
  LocalDag dag;
  for (std::uint32_t v = 0; v < graph.node_count(); ++v) dag.unitigs.push_back(v);
  dag.anchor_from = 0;
  dag.anchor_to = graph.node_count() > 1 ? 1 : 0;
  dag.graph = graph;
  return dag;
}

double grid_oracle(const std::vector<double>& ab, const std::vector<double>& w, double f, std::size_t steps) {
  auto objective = [&](double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < ab.size(); ++i) s += w[i] * std::abs(ab[i] - f * x);
    return s;
  };
  double best = objective(0.0);
  double top = 0.0;
  for (double a : ab) {
    best = std::min(best, objective(a / f));
    top = std::max(top, a / f);
  }
  for (std::size_t i = 0; i <= steps; ++i) best = std::min(best, objective(2.0 * top * static_cast<double>(i) / static_cast<double>(steps)));
  return best;
}

std::vector<std::uint64_t> poisson_mixture_histogram(std::uint64_t seed, std::size_t low_n, double low_mean,
                                                     std::size_t high_n, double high_mean) {
  std::mt19937_64 rng(seed);
  std::poisson_distribution<int> low(low_mean);
  std::poisson_distribution<int> high(high_mean);
  std::vector<std::uint64_t> hist;
  auto add = [&](int c) {
    if (c <= 0) return;  // a k-mer seen zero times is not in the spectrum
    if (hist.size() <= static_cast<std::size_t>(c)) hist.resize(static_cast<std::size_t>(c) + 1, 0);
    ++hist[static_cast<std::size_t>(c)];
  };
  for (std::size_t i = 0; i < low_n; ++i) add(low(rng));
  for (std::size_t i = 0; i < high_n; ++i) add(high(rng));
  return hist;
}

}  // namespace quasiflow::fixture
