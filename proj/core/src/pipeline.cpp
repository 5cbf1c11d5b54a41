#include "quasiflow/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <spdlog/spdlog.h>

#include "quasiflow/flow.hpp"
#include "quasiflow/kmer.hpp"

namespace quasiflow {
namespace {

class Stopwatch {
 public:
  explicit Stopwatch(std::map<std::string, double>& sink) : sink_(sink) {}
  void lap(const std::string& name) {
    const auto now = std::chrono::steady_clock::now();
    sink_[name] = std::chrono::duration<double>(now - last_).count();
    last_ = now;
  }

 private:
  std::map<std::string, double>& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

// Work items are claimed from a shared counter; results land at their own
// index so the output does not depend on scheduling.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

AnchorResult process_anchor(const AssemblyGraph& ag, const PairedInfo& pairs, UnitigId from, UnitigId to,
                            const DagOptions& dag_options, const LocalPathFilter& filter, double readjust_ratio) {
  AnchorResult r;
  r.from = from;
  r.to = to;
  r.dag = build_local_dag(ag, pairs, from, to, dag_options);
  estimate_dag_coverages(ag, pairs, r.dag, dag_options);
  r.estimated = r.dag.graph;
  readjust_coverages(r.dag, readjust_ratio);
  const OffsetFlowNetwork net = build_offset_network(r.dag.graph);
  const FlowAssignment flow = solve_min_cost_flow(net);
  r.correction_cost = flow.objective;
  r.dag.graph = apply_flow_correction(r.dag.graph, net, flow);
  r.paths = polish_local_paths(decompose_flow_paths(r.dag, pairs), r.dag, ag, pairs, filter);
  return r;
}

AssemblyResult assemble(const ReadSet& input, const AssembleOptions& options) {
  if (options.k < 3 || options.k + 1 > Kmer::kMaxK) throw std::invalid_argument("k must be in [3, 126]");
  input.validate();
  if (input.pairs.empty()) throw std::invalid_argument("no read pairs");
  if (static_cast<std::size_t>(options.k) > input.min_read_length()) {
    throw std::invalid_argument("k exceeds the shortest read length");
  }
  AssemblyResult res;
  Stopwatch clock(res.seconds);

  // Strand-specific graphs need every mate on the forward strand.
  ReadSet flipped;
  const bool flip = options.forward_only && options.fr_library;
  if (flip) {
    flipped = input;
    for (auto& p : flipped.pairs) p.right = reverse_complement(p.right);
  }
  const ReadSet& reads = flip ? flipped : input;

  const CountOptions count_options{!options.forward_only, options.threads};
  const KmerSpectrum spectrum = count_kmers(reads, options.k, count_options);
  const KmerSpectrum junctions = count_kmers(reads, options.k + 1, count_options);
  res.histogram = spectrum.histogram();
  clock.lap("count");

  res.threshold = kde_threshold(res.histogram, options.oversmooth);
  if (options.threshold) res.threshold.t = *options.threshold;
  const SolidSet solid = filter_solid(spectrum, res.threshold.t);
  res.solid_kmers = solid.kmers.size();
  spdlog::debug("threshold {} keeps {} solid k-mers", res.threshold.t, res.solid_kmers);
  clock.lap("threshold");

  res.raw_graph = build_assembly_graph(solid, &junctions);
  PolishOptions polish;
  polish.min_tip_len = options.min_tip;
  polish.ratio = options.filigree_ratio;
  polish.keep_isolated_len = options.keep_isolated_len;
  res.graph = single_strand(polish_assembly_graph(res.raw_graph, polish));
  clock.lap("graph");

  PairingOptions pairing;
  pairing.min_support = options.min_pair_support;
  pairing.fr_library = options.fr_library && !flip;
  pairing.threads = options.threads;
  res.pairs = associate_paired_unitigs(reads, res.graph, pairing);
  clock.lap("pairing");

  DagOptions dag_options;
  res.max_dist = options.max_dist != 0
                     ? options.max_dist
                     : static_cast<std::size_t>(std::max(input.insert_size + 2 * input.delta, 1));
  dag_options.max_dist = res.max_dist;
  dag_options.branch_limit = options.branch_limit;
  LocalPathFilter filter;
  filter.min_weight = res.threshold.t;
  filter.min_copath_support = options.min_copath_support;
  const AssemblyGraph& ag = res.graph;
  res.anchors.resize(ag.edges.size());
  parallel_for(ag.edges.size(), options.threads, [&](std::size_t e) {
    res.anchors[e] = process_anchor(ag, res.pairs, ag.edges[e].from, ag.edges[e].to, dag_options, filter,
                                    options.readjust_ratio);
  });
  clock.lap("anchors");

  std::vector<AnchorPaths> anchor_paths;
  anchor_paths.reserve(res.anchors.size());
  for (const auto& a : res.anchors) anchor_paths.push_back({&a.dag, a.paths});
  res.raw_apag = build_apag(ag, res.pairs, anchor_paths);
  ApagPolishOptions apag_polish;
  apag_polish.min_len = options.min_contig_len;
  apag_polish.min_tip_len = options.min_tip;
  res.apag = polish_apag(res.raw_apag, apag_polish);
  clock.lap("apag");

  res.haplotype_paths = reassign_contradicted_paths(res.apag, ag, res.pairs, extract_haplotypes(res.apag));
  if (!res.haplotype_paths.empty()) {
    res.contigs = finalize_contigs(res.apag, res.haplotype_paths, options.min_contig_len, res.threshold.t);
    extend_contigs(res.contigs, ag, res.pairs);
  }
  clock.lap("finalize");
  return res;
}

}  // namespace quasiflow
