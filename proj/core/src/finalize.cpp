#include "quasiflow/finalize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>

#include "quasiflow/flow.hpp"
#include "quasiflow/lp.hpp"

namespace quasiflow {
namespace {

Apag induced(const Apag& apag, const std::vector<bool>& keep) {
  Apag out;
  out.k = apag.k;
  std::vector<std::uint32_t> id(apag.nodes.size(), kNoLocal);
  for (std::uint32_t v = 0; v < apag.nodes.size(); ++v) {
    if (!keep[v]) continue;
    id[v] = static_cast<std::uint32_t>(out.nodes.size());
    out.nodes.push_back(apag.nodes[v]);
  }
  out.graph = CoverageGraph(out.nodes.size());
  for (const auto& e : apag.graph.edges) {
    if (keep[e.from] && keep[e.to]) out.graph.add_edge(id[e.from], id[e.to], e.cov);
  }
  return out;
}

// Weakly connected components as lists of node ids.
std::vector<std::vector<std::uint32_t>> components(const CoverageGraph& g) {
  std::vector<std::uint32_t> comp(g.node_count(), kNoLocal);
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint32_t s = 0; s < g.node_count(); ++s) {
    if (comp[s] != kNoLocal) continue;
    const auto c = static_cast<std::uint32_t>(out.size());
    out.emplace_back();
    std::vector<std::uint32_t> stack{s};
    comp[s] = c;
    while (!stack.empty()) {
      const std::uint32_t v = stack.back();
      stack.pop_back();
      out[c].push_back(v);
      auto visit = [&](std::uint32_t w) {
        if (comp[w] == kNoLocal) {
          comp[w] = c;
          stack.push_back(w);
        }
      };
      for (std::uint32_t e : g.out_edges(v)) visit(g.edges[e].to);
      for (std::uint32_t e : g.in_edges(v)) visit(g.edges[e].from);
    }
    std::sort(out[c].begin(), out[c].end());
  }
  return out;
}

// Longest spelled path inside one component; nullopt when it has a cycle.
std::optional<std::size_t> longest_spelling(const Apag& apag, const std::vector<std::uint32_t>& nodes) {
  const CoverageGraph& g = apag.graph;
  const auto overlap = static_cast<std::size_t>(apag.k - 1);
  std::map<std::uint32_t, std::size_t> indeg;
  for (std::uint32_t v : nodes) indeg[v] = g.in_edges(v).size();
  std::vector<std::uint32_t> ready;
  for (const auto& [v, d] : indeg) {
    if (d == 0) ready.push_back(v);
  }
  std::map<std::uint32_t, std::size_t> best;
  std::size_t seen = 0;
  std::size_t longest = 0;
  while (!ready.empty()) {
    const std::uint32_t v = ready.back();
    ready.pop_back();
    ++seen;
    const std::size_t here = best[v] + apag.nodes[v].seq.size();
    longest = std::max(longest, here);
    for (std::uint32_t e : g.out_edges(v)) {
      const std::uint32_t w = g.edges[e].to;
      best[w] = std::max(best[w], here - overlap);
      if (--indeg[w] == 0) ready.push_back(w);
    }
  }
  if (seen != nodes.size()) return std::nullopt;
  return longest;
}

std::int64_t residual_sum(const std::vector<std::int64_t>& residual,
                          const std::vector<std::uint32_t>& edges) {
  std::int64_t s = 0;
  for (std::uint32_t e : edges) s += residual[e];
  return s;
}

}  // namespace

Apag polish_apag(const Apag& apag, const ApagPolishOptions& options) {
  const std::size_t min_tip = options.min_tip_len == 0 ? static_cast<std::size_t>(2 * apag.k) : options.min_tip_len;
  Apag cur = apag;
  while (true) {
    const CoverageGraph& g = cur.graph;
    std::vector<bool> keep(cur.nodes.size(), true);
    std::map<UnitigId, std::size_t> copies;
    for (const auto& n : cur.nodes) ++copies[n.unitig];
    for (std::uint32_t v = 0; v < cur.nodes.size(); ++v) {
      const std::size_t in = g.in_edges(v).size();
      const std::size_t out = g.out_edges(v).size();
      const std::size_t len = cur.nodes[v].seq.size();
      if (in == 0 && out == 0) {
        keep[v] = copies[cur.nodes[v].unitig] == 1 && len >= options.min_len;
      } else if ((in == 0) != (out == 0) && len < min_tip) {
        bool at_branch = false;
        if (in == 0) {
          for (std::uint32_t e : g.out_edges(v)) at_branch |= g.in_edges(g.edges[e].to).size() >= 2;
        } else {
          for (std::uint32_t e : g.in_edges(v)) at_branch |= g.out_edges(g.edges[e].from).size() >= 2;
        }
        keep[v] = !at_branch;
      }
    }
    for (const auto& comp : components(g)) {
      if (comp.size() < 2) continue;
      const auto longest = longest_spelling(cur, comp);
      if (longest && *longest < options.min_len) {
        for (std::uint32_t v : comp) keep[v] = false;
      }
    }
    if (std::all_of(keep.begin(), keep.end(), [](bool b) { return b; })) return cur;
    cur = induced(cur, keep);
  }
}

std::string spell_path(const Apag& apag, const std::vector<std::uint32_t>& nodes) {
  std::string out;
  const auto overlap = static_cast<std::size_t>(apag.k - 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::string& s = apag.nodes[nodes[i]].seq;
    if (i == 0) {
      out = s;
      continue;
    }
    if (s.size() < overlap || out.compare(out.size() - overlap, overlap, s, 0, overlap) != 0) {
      throw std::logic_error("unitig overlap mismatch while spelling a path");
    }
    out.append(s, overlap, std::string::npos);
  }
  return out;
}

std::size_t spelled_length(const Apag& apag, const std::vector<std::uint32_t>& nodes) {
  std::size_t len = 0;
  for (std::uint32_t v : nodes) len += apag.nodes[v].seq.size();
  if (!nodes.empty()) len -= (nodes.size() - 1) * static_cast<std::size_t>(apag.k - 1);
  return len;
}

std::vector<WeightedPath> extract_haplotypes(const Apag& apag) {
  const CoverageGraph& g = apag.graph;
  std::vector<WeightedPath> paths;
  if (g.edge_count() > 0) {
    const OffsetFlowNetwork net = build_offset_network(g, false);
    const FlowAssignment flow = solve_min_cost_flow(net);
    const CoverageGraph corrected = apply_flow_correction(g, net, flow);
    std::vector<std::int64_t> residual(corrected.edge_count());
    for (std::uint32_t e = 0; e < corrected.edge_count(); ++e) residual[e] = corrected.edges[e].cov;

    const std::size_t n = g.node_count();
    while (true) {
      // Widest path from any node without incoming residual flow.
      std::vector<std::int64_t> width(n, 0);
      std::vector<std::uint32_t> via(n, kNoLocal);
      std::vector<bool> done(n, false);
      using Item = std::pair<std::int64_t, std::uint32_t>;
      auto cmp = [](const Item& a, const Item& b) {
        return a.first != b.first ? a.first < b.first : a.second > b.second;
      };
      std::priority_queue<Item, std::vector<Item>, decltype(cmp)> queue(cmp);
      for (std::uint32_t v = 0; v < n; ++v) {
        if (residual_sum(residual, g.in_edges(v)) == 0 && residual_sum(residual, g.out_edges(v)) > 0) {
          width[v] = std::numeric_limits<std::int64_t>::max();
          queue.push({width[v], v});
        }
      }
      std::uint32_t end = kNoLocal;
      while (!queue.empty()) {
        const auto [w, v] = queue.top();
        queue.pop();
        if (done[v] || w != width[v]) continue;
        done[v] = true;
        if (via[v] != kNoLocal && residual_sum(residual, g.out_edges(v)) == 0) {
          if (end == kNoLocal || w > width[end] || (w == width[end] && v < end)) end = v;
        }
        for (std::uint32_t e : g.out_edges(v)) {
          const std::uint32_t x = g.edges[e].to;
          const std::int64_t nw = std::min(w, residual[e]);
          if (nw > width[x] && !done[x]) {
            width[x] = nw;
            via[x] = e;
            queue.push({nw, x});
          }
        }
      }
      if (end == kNoLocal) break;
      WeightedPath p;
      p.weight = width[end];
      std::vector<std::uint32_t> used;
      for (std::uint32_t v = end; via[v] != kNoLocal; v = g.edges[via[v]].from) used.push_back(via[v]);
      std::reverse(used.begin(), used.end());
      p.nodes.push_back(g.edges[used.front()].from);
      for (std::uint32_t e : used) {
        p.nodes.push_back(g.edges[e].to);
        residual[e] -= p.weight;
      }
      paths.push_back(std::move(p));
    }
  }
  for (std::uint32_t v = 0; v < g.node_count(); ++v) {
    if (g.in_edges(v).empty() && g.out_edges(v).empty()) {
      paths.push_back({{v}, std::max<std::int64_t>(1, std::llround(apag.nodes[v].abundance))});
    }
  }
  return paths;
}

std::vector<WeightedPath> reassign_contradicted_paths(const Apag& apag, const AssemblyGraph& ag,
                                                      const PairedInfo& info, const std::vector<WeightedPath>& paths) {
  // Last node of p.nodes[0..i) whose pairing contradicts leaving p.nodes[i]
  // for `next`, if any.
  auto evidence = [&](const WeightedPath& p, std::size_t i, std::uint32_t next) -> std::optional<std::size_t> {
    const UnitigId taken = apag.nodes[next].unitig;
    std::optional<std::size_t> last;
    for (std::uint32_t e : ag.out_edges(apag.nodes[p.nodes[i]].unitig)) {
      const UnitigId sibling = ag.edges[e].to;
      if (sibling == taken) continue;
      for (std::size_t j = 0; j < i; ++j) {
        const UnitigId a = apag.nodes[p.nodes[j]].unitig;
        if (info.contains(a, sibling) && !info.contains(a, taken) && (!last || j > *last)) last = j;
      }
    }
    return last;
  };
  auto bad_step = [&](const WeightedPath& p, std::size_t i, std::uint32_t next) {
    return evidence(p, i, next).has_value();
  };
  auto first_fork = [&](const WeightedPath& p) -> std::optional<std::size_t> {
    for (std::size_t i = 1; i + 1 < p.nodes.size(); ++i) {
      if (bad_step(p, i, p.nodes[i + 1])) return i;
    }
    return std::nullopt;
  };

  std::vector<WeightedPath> kept;
  std::vector<std::pair<std::size_t, std::size_t>> moved;  // (path, fork)
  for (std::size_t i = 0; i < paths.size(); ++i) {
    if (const auto fork = first_fork(paths[i])) {
      moved.emplace_back(i, *fork);
    } else {
      kept.push_back(paths[i]);
    }
  }
  // When more of the path follows the contradicting node than precedes the
  // fork, the prefix through that node is cut off. Otherwise the prefix up to
  // the fork is spliced onto the heaviest clean path that leaves the fork node
  // acceptably. Either result may fork badly again.
  const std::size_t clean = kept.size();
  for (auto [i, fork] : moved) {
    WeightedPath p = paths[i];
    for (std::size_t round = 0; round <= p.nodes.size() + clean; ++round) {
      const std::size_t cut = *evidence(p, fork, p.nodes[fork + 1]) + 1;
      if (p.nodes.size() - cut > fork + 1) {
        p.nodes.erase(p.nodes.begin(), p.nodes.begin() + static_cast<std::ptrdiff_t>(cut));
        const auto next = first_fork(p);
        if (!next) {
          kept.push_back(std::move(p));
          break;
        }
        fork = *next;
        continue;
      }
      const WeightedPath* best = nullptr;
      std::size_t best_at = 0;
      for (std::size_t q = 0; q < clean; ++q) {
        const auto& nodes = kept[q].nodes;
        const auto at = std::find(nodes.begin(), nodes.end(), p.nodes[fork]);
        if (at == nodes.end() || at + 1 == nodes.end() || bad_step(p, fork, *(at + 1))) continue;
        if (!best || kept[q].weight > best->weight) {
          best = &kept[q];
          best_at = static_cast<std::size_t>(at - nodes.begin());
        }
      }
      if (!best) break;
      p.nodes.resize(fork + 1);
      p.nodes.insert(p.nodes.end(), best->nodes.begin() + static_cast<std::ptrdiff_t>(best_at) + 1, best->nodes.end());
      std::set<std::uint32_t> seen(p.nodes.begin(), p.nodes.end());
      if (seen.size() != p.nodes.size()) break;
      const auto next = first_fork(p);
      if (!next) {
        kept.push_back(std::move(p));
        break;
      }
      fork = *next;
    }
  }

  std::map<std::vector<std::uint32_t>, std::size_t> index;
  std::vector<WeightedPath> merged;
  for (auto& p : kept) {
    const auto [it, fresh] = index.emplace(p.nodes, merged.size());
    if (fresh) {
      merged.push_back(std::move(p));
    } else {
      merged[it->second].weight += p.weight;
    }
  }

  // A path spelling a contiguous piece of another adds no sequence; fold it
  // into the heaviest path containing it.
  auto spelled = [&](const WeightedPath& p) {
    std::vector<UnitigId> u;
    for (std::uint32_t v : p.nodes) u.push_back(apag.nodes[v].unitig);
    return u;
  };
  std::vector<std::vector<UnitigId>> seqs;
  for (const auto& p : merged) seqs.push_back(spelled(p));
  std::vector<std::size_t> order(merged.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return seqs[a].size() < seqs[b].size();
  });
  std::vector<bool> folded(merged.size(), false);
  for (std::size_t a : order) {
    std::optional<std::size_t> host;
    for (std::size_t b = 0; b < merged.size(); ++b) {
      if (b == a || folded[b] || seqs[b].size() <= seqs[a].size()) continue;
      if (std::search(seqs[b].begin(), seqs[b].end(), seqs[a].begin(), seqs[a].end()) == seqs[b].end()) continue;
      if (!host || merged[b].weight > merged[*host].weight) host = b;
    }
    if (host) {
      merged[*host].weight += merged[a].weight;
      folded[a] = true;
    }
  }
  std::vector<WeightedPath> out;
  for (std::size_t i = 0; i < merged.size(); ++i) {
    if (!folded[i]) out.push_back(std::move(merged[i]));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const WeightedPath& a, const WeightedPath& b) { return a.weight > b.weight; });
  return out;
}

LpPolish lp_polish_abundances(const Apag& apag, const std::vector<WeightedPath>& paths) {
  if (paths.empty()) throw std::invalid_argument("nothing to polish");
  const CoverageGraph& g = apag.graph;
  const auto k = static_cast<double>(apag.k);
  const std::size_t min_end = 2 * static_cast<std::size_t>(apag.k);

  // Per unitig: weight and summed path flow coefficients.
  std::map<UnitigId, bool> terminal_only;
  for (std::uint32_t v = 0; v < apag.nodes.size(); ++v) {
    const bool terminal = g.in_edges(v).empty() || g.out_edges(v).empty();
    auto [it, fresh] = terminal_only.emplace(apag.nodes[v].unitig, terminal);
    if (!fresh) it->second = it->second && terminal;
  }
  std::map<UnitigId, std::vector<double>> coef;
  for (std::size_t p = 0; p < paths.size(); ++p) {
    for (std::uint32_t v : paths[p].nodes) {
      auto& row = coef[apag.nodes[v].unitig];
      row.resize(paths.size(), 0.0);
      row[p] += static_cast<double>(paths[p].weight);
    }
  }
  struct Term {
    double weight;
    double ab;
    std::vector<double> row;
  };
  std::vector<Term> terms;
  for (auto& [u, row] : coef) {
    const auto it = std::find_if(apag.nodes.begin(), apag.nodes.end(), [&](const ApagNode& n) { return n.unitig == u; });
    const std::size_t len = it->seq.size();
    if (terminal_only[u] && len < min_end) continue;
    const double w = static_cast<double>(len) / k - 1.0;
    if (w <= 0.0) continue;
    terms.push_back({w, it->abundance, std::move(row)});
  }

  const std::size_t np = paths.size();
  LpPolish out;
  auto objective = [&](const std::vector<double>& x) {
    double s = 0.0;
    for (const auto& t : terms) {
      double fit = 0.0;
      for (std::size_t p = 0; p < np; ++p) fit += t.row[p] * x[p];
      s += t.weight * std::abs(t.ab - fit);
    }
    return s;
  };
  out.objective_at_one = objective(std::vector<double>(np, 1.0));
  if (terms.empty()) {
    out.multipliers.assign(np, 1.0);
    out.objective = out.objective_at_one;
    return out;
  }

  // Variables: x_p, then s+_u and s-_u per term.
  const std::size_t nt = terms.size();
  LinearProgram lp;
  lp.c.assign(np + 2 * nt, 0.0);
  for (std::size_t i = 0; i < nt; ++i) {
    lp.c[np + 2 * i] = terms[i].weight;
    lp.c[np + 2 * i + 1] = terms[i].weight;
  }
  for (std::size_t i = 0; i < nt; ++i) {
    std::vector<double> row(lp.c.size(), 0.0);
    std::copy(terms[i].row.begin(), terms[i].row.end(), row.begin());
    row[np + 2 * i] = -1.0;
    row[np + 2 * i + 1] = 1.0;
    lp.add_row(std::move(row), Relation::kEqual, terms[i].ab);
  }
  // The L1 optimum is rarely unique; prefer the one closest to the flow.
  std::vector<std::size_t> vars(np);
  std::iota(vars.begin(), vars.end(), 0);
  const LpSolution sol = solve_lp_closest(lp, vars, std::vector<double>(np, 1.0));
  if (sol.status != LpStatus::kOptimal) throw std::runtime_error("abundance LP did not reach an optimum");
  out.multipliers.assign(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(np));
  // A path that touches no weighted unitig is unconstrained; keep its flow.
  for (std::size_t p = 0; p < np; ++p) {
    const bool free = std::all_of(terms.begin(), terms.end(), [&](const Term& t) { return t.row[p] == 0.0; });
    if (free) out.multipliers[p] = 1.0;
  }
  out.objective = objective(out.multipliers);
  return out;
}

ContigSet emit_contigs(const Apag& apag, const std::vector<WeightedPath>& paths,
                       const std::vector<double>& multipliers, std::size_t min_len) {
  if (multipliers.size() != paths.size()) throw std::invalid_argument("one multiplier per path required");
  ContigSet set;
  double total = 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    Contig c;
    c.seq = spell_path(apag, paths[i].nodes);
    if (c.seq.size() < min_len) continue;
    c.raw_flow = paths[i].weight;
    c.multiplier = multipliers[i];
    c.path = paths[i].nodes;
    for (std::uint32_t v : c.path) c.unitigs.push_back(apag.nodes[v].unitig);
    c.rel_freq = static_cast<double>(c.raw_flow) * c.multiplier;
    if (c.rel_freq <= 0.0 && std::any_of(multipliers.begin(), multipliers.end(), [](double x) { return x > 0.0; })) {
      continue;
    }
    total += c.rel_freq;
    set.contigs.push_back(std::move(c));
  }
  if (total <= 0.0) {
    // Every multiplier vanished; fall back to the raw flows.
    total = 0.0;
    for (auto& c : set.contigs) total += (c.rel_freq = static_cast<double>(c.raw_flow));
  }
  for (auto& c : set.contigs) c.rel_freq /= total;
  std::stable_sort(set.contigs.begin(), set.contigs.end(), [](const Contig& a, const Contig& b) {
    if (a.rel_freq != b.rel_freq) return a.rel_freq > b.rel_freq;
    return a.seq < b.seq;
  });
  for (std::size_t i = 0; i < set.contigs.size(); ++i) set.contigs[i].id = "contig_" + std::to_string(i + 1);
  return set;
}

ContigSet finalize_contigs(const Apag& apag, const std::vector<WeightedPath>& paths, std::size_t min_len,
                           std::int64_t min_flow) {
  std::vector<WeightedPath> long_paths;
  for (const auto& p : paths) {
    if (p.weight >= min_flow && spelled_length(apag, p.nodes) >= min_len) long_paths.push_back(p);
  }
  if (long_paths.empty()) return {};
  const LpPolish polish = lp_polish_abundances(apag, long_paths);
  return emit_contigs(apag, long_paths, polish.multipliers, min_len);
}

void extend_contigs(ContigSet& set, const AssemblyGraph& ag, const PairedInfo& info) {
  constexpr std::uint64_t kDominance = 4;
  const auto overlap = static_cast<std::size_t>(ag.k - 1);
  // Returns the candidate whose support is at least kDominance times that of
  // every other candidate.
  auto pick = [&](const Contig& c, const std::vector<UnitigId>& cands, const std::set<UnitigId>& used,
                  bool forward) -> std::optional<std::size_t> {
    for (UnitigId w : cands) {
      if (used.contains(w)) return std::nullopt;
    }
    if (cands.size() == 1) return 0;
    // Exclusive pairings vote with their link support.
    std::vector<std::uint64_t> votes(cands.size(), 0);
    for (UnitigId u : c.unitigs) {
      std::optional<std::size_t> only;
      std::uint64_t support = 0;
      std::size_t hits = 0;
      for (std::size_t i = 0; i < cands.size(); ++i) {
        const UnitigId from = forward ? u : cands[i];
        const UnitigId to = forward ? cands[i] : u;
        if (const auto it = info.forward[from].find(to); it != info.forward[from].end()) {
          only = i;
          support = it->second;
          ++hits;
        }
      }
      if (hits == 1) votes[*only] += support;
    }
    const auto best = static_cast<std::size_t>(std::max_element(votes.begin(), votes.end()) - votes.begin());
    if (votes[best] == 0) return std::nullopt;
    for (std::size_t i = 0; i < cands.size(); ++i) {
      if (i != best && kDominance * votes[i] > votes[best]) return std::nullopt;
    }
    return best;
  };
  std::vector<std::set<UnitigId>> before;
  std::vector<double> before_len;
  for (const auto& c : set.contigs) {
    before.emplace_back(c.unitigs.begin(), c.unitigs.end());
    before_len.push_back(static_cast<double>(c.seq.size()));
  }
  for (auto& c : set.contigs) {
    if (c.unitigs.empty()) continue;
    std::set<UnitigId> used(c.unitigs.begin(), c.unitigs.end());
    while (true) {
      std::vector<UnitigId> cands;
      for (std::uint32_t e : ag.out_edges(c.unitigs.back())) cands.push_back(ag.edges[e].to);
      const auto i = cands.empty() ? std::nullopt : pick(c, cands, used, true);
      if (!i) break;
      const std::string& seq = ag.unitigs[cands[*i]].seq;
      if (seq.compare(0, overlap, c.seq, c.seq.size() - overlap, overlap) != 0) {
        throw std::logic_error("unitig overlap mismatch while extending a contig");
      }
      c.seq.append(seq, overlap, std::string::npos);
      c.unitigs.push_back(cands[*i]);
      used.insert(cands[*i]);
    }
    while (true) {
      std::vector<UnitigId> cands;
      for (std::uint32_t e : ag.in_edges(c.unitigs.front())) cands.push_back(ag.edges[e].from);
      const auto i = cands.empty() ? std::nullopt : pick(c, cands, used, false);
      if (!i) break;
      const std::string& seq = ag.unitigs[cands[*i]].seq;
      if (seq.compare(seq.size() - overlap, overlap, c.seq, 0, overlap) != 0) {
        throw std::logic_error("unitig overlap mismatch while extending a contig");
      }
      c.seq.insert(0, seq, 0, seq.size() - overlap);
      c.unitigs.insert(c.unitigs.begin(), cands[*i]);
      used.insert(cands[*i]);
    }
  }

  // Extension can make contigs nested or identical; fold each into the
  // heaviest contig holding it. Contigs that shared unitigs before extension
  // split one flow and add up; disjoint pieces of one haplotype average.
  auto& cs = set.contigs;
  std::vector<std::size_t> order(cs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cs[a].seq.size() < cs[b].seq.size(); });
  std::vector<bool> folded(cs.size(), false);
  for (std::size_t x = 0; x < order.size(); ++x) {
    const std::size_t a = order[x];
    std::optional<std::size_t> host;
    for (std::size_t y = x + 1; y < order.size(); ++y) {
      const std::size_t b = order[y];
      if (folded[b] || cs[b].seq.find(cs[a].seq) == std::string::npos) continue;
      if (!host || cs[b].rel_freq > cs[*host].rel_freq) host = b;
    }
    if (!host) continue;
    const bool shared = std::any_of(before[a].begin(), before[a].end(),
                                    [&](UnitigId u) { return before[*host].contains(u); });
    if (shared) {
      cs[*host].rel_freq += cs[a].rel_freq;
      cs[*host].raw_flow += cs[a].raw_flow;
    } else {
      const double la = before_len[a];
      const double lh = before_len[*host];
      cs[*host].rel_freq = (lh * cs[*host].rel_freq + la * cs[a].rel_freq) / (lh + la);
      before_len[*host] += la;
    }
    before[*host].insert(before[a].begin(), before[a].end());
    folded[a] = true;
  }
  std::vector<Contig> kept;
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (!folded[i]) kept.push_back(std::move(cs[i]));
  }
  double total = 0.0;
  for (const auto& c : kept) total += c.rel_freq;
  if (total > 0.0) {
    for (auto& c : kept) c.rel_freq /= total;
  }
  std::stable_sort(kept.begin(), kept.end(), [](const Contig& a, const Contig& b) {
    if (a.rel_freq != b.rel_freq) return a.rel_freq > b.rel_freq;
    return a.seq < b.seq;
  });
  for (std::size_t i = 0; i < kept.size(); ++i) kept[i].id = "contig_" + std::to_string(i + 1);
  cs = std::move(kept);
}

}  // namespace quasiflow
