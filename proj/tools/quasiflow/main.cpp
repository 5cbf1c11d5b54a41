#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "quasiflow/evaluate.hpp"
#include "quasiflow/export.hpp"
#include "quasiflow/pipeline.hpp"
#include "quasiflow/simulate.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace quasiflow;

namespace {

struct AssembleArgs {
  std::string left;
  std::string right;
  int insert = 0;
  std::optional<int> delta;
  std::optional<std::uint32_t> threshold;
  std::string out = "quasiflow_out";
  std::string dump_dag;
  AssembleOptions options;
};

struct SimulateArgs {
  std::size_t length = 2000;
  std::size_t haplotypes = 2;
  double divergence = 0.02;
  std::vector<double> freqs{0.3, 0.7};
  std::uint64_t seed = 1;
  ReadSimOptions reads;
  std::string out = "sim_out";
};

struct EvalArgs {
  std::string contigs;
  std::string truth;
  std::string report = "json";
  std::string out;
};

template <typename Fn>
std::string render(Fn&& fn) {
  std::ostringstream s;
  fn(s);
  return s.str();
}

std::pair<UnitigId, UnitigId> parse_anchor(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("--dump-dag expects U_i,U_j");
  auto id = [](std::string s) {
    if (!s.empty() && (s[0] == 'U' || s[0] == 'u')) s.erase(0, 1);
    return static_cast<UnitigId>(std::stoul(s));
  };
  return {id(text.substr(0, comma)), id(text.substr(comma + 1))};
}

int run_assemble(AssembleArgs& a) {
  const int delta = a.delta.value_or(static_cast<int>(std::lround(0.15 * a.insert)));
  const ReadSet reads = load_paired_reads(a.left, a.right, a.insert, delta);
  if (reads.dropped) spdlog::warn("dropped {} pairs with invalid sequence", reads.dropped);
  a.options.threshold = a.threshold;
  const AssemblyResult r = assemble(reads, a.options);

  const fs::path out(a.out);
  fs::create_directories(out);
  write_file(out / "contigs.fasta", render([&](auto& s) { write_contigs_fasta(s, r.contigs); }));
  write_file(out / "abundance.tsv", render([&](auto& s) { write_abundance_tsv(s, r.contigs); }));
  write_file(out / "assembly_graph.gfa", render([&](auto& s) { write_gfa(s, r.graph); }));
  write_file(out / "apag.gfa", render([&](auto& s) { write_gfa(s, r.apag); }));
  write_file(out / "pairs.tsv", render([&](auto& s) { write_pairs_tsv(s, r.pairs); }));
  write_file(out / "histogram.tsv", render([&](auto& s) { write_histogram_tsv(s, r.histogram); }));
  write_file(out / "density.tsv", render([&](auto& s) { write_density_tsv(s, r.threshold.curve); }));

  json summary = json::parse(summary_json(r, a.options));
  summary["command"] = "assemble";
  summary["inputs"] = {{"left", a.left}, {"right", a.right}, {"pairs", reads.pairs.size()},
                       {"insert", a.insert}, {"delta", delta}};
  write_file(out / "summary.json", summary.dump(2) + "\n");
  if (!a.dump_dag.empty()) {
    const auto [ui, uj] = parse_anchor(a.dump_dag);
    const auto e = ui < r.graph.unitigs.size() && uj < r.graph.unitigs.size() ? r.graph.edge_between(ui, uj)
                                                                               : std::nullopt;
    if (!e) {
      spdlog::warn("--dump-dag: no assembly graph edge U{}->U{}", ui, uj);
      return 0;
    }
    const AnchorResult& anchor = r.anchors[*e];
    const std::string stem = "dag_" + std::to_string(ui) + "_" + std::to_string(uj);
    LocalDag estimated = anchor.dag;
    estimated.graph = anchor.estimated;
    write_file(out / (stem + ".estimated.dot"), render([&](auto& s) { write_dot(s, estimated); }));
    write_file(out / (stem + ".dot"), render([&](auto& s) { write_dot(s, anchor.dag); }));
  }

  spdlog::info("{} contigs written to {}", r.contigs.contigs.size(), out.string());
  return 0;
}

int run_simulate(const SimulateArgs& a) {
  const HaplotypeSample sample = simulate_sample(a.length, a.haplotypes, a.divergence, a.freqs, a.seed);
  ReadSimOptions ro = a.reads;
  ro.seed = a.seed + 1;
  const ReadSet reads = simulate_reads(sample, ro);

  const fs::path out(a.out);
  fs::create_directories(out);
  write_paired_reads(out / "reads_1.fq", out / "reads_2.fq", reads);
  std::vector<SeqRecord> haps;
  for (std::size_t i = 0; i < sample.haplotypes.size(); ++i) {
    std::ostringstream desc;
    desc << "freq=" << sample.freqs[i];
    haps.push_back({"hap_" + std::to_string(i), sample.haplotypes[i], {}, desc.str()});
  }
  write_fasta(out / "haplotypes.fasta", haps, 80);

  json summary = {{"command", "simulate"},
                  {"length", a.length},
                  {"haplotypes", a.haplotypes},
                  {"divergence", a.divergence},
                  {"freqs", a.freqs},
                  {"seed", a.seed},
                  {"coverage", ro.coverage},
                  {"read_len", ro.read_len},
                  {"insert", ro.insert_size},
                  {"delta", ro.delta},
                  {"error_rate", ro.error_rate},
                  {"pairs", reads.pairs.size()}};
  write_file(out / "summary.json", summary.dump(2) + "\n");
  return 0;
}

json metrics_json(const Metrics& m) {
  json j = {{"empty", m.empty},
            {"genome_fraction", m.genome_fraction},
            {"n50", m.n50},
            {"error_rate", m.error_rate},
            {"misassemblies", m.misassemblies},
            {"unaligned", m.unaligned},
            {"mee", m.mee ? json(*m.mee) : json(nullptr)},
            {"s_hat", m.s_hat ? json(*m.s_hat) : json(nullptr)}};
  json haps = json::array();
  for (const auto& h : m.haplotypes) {
    haps.push_back({{"id", h.id},
                    {"true_freq", h.true_freq},
                    {"est_freq", h.est_freq},
                    {"longest_contig", h.longest_contig ? json(*h.longest_contig) : json(nullptr)},
                    {"identity", h.identity},
                    {"covered", h.covered}});
  }
  j["haplotypes"] = std::move(haps);
  return j;
}

std::string metrics_tsv(const Metrics& m) {
  std::ostringstream s;
  auto opt = [](const std::optional<double>& v) { return v ? std::to_string(*v) : std::string("NA"); };
  s << "metric\tvalue\n";
  s << "genome_fraction\t" << m.genome_fraction << "\n";
  s << "n50\t" << m.n50 << "\n";
  s << "error_rate\t" << m.error_rate << "\n";
  s << "misassemblies\t" << m.misassemblies << "\n";
  s << "unaligned\t" << m.unaligned << "\n";
  s << "mee\t" << opt(m.mee) << "\n";
  s << "s_hat\t" << opt(m.s_hat) << "\n";
  for (const auto& h : m.haplotypes) {
    s << "haplotype:" << h.id << "\ttrue=" << h.true_freq << ";est=" << h.est_freq << ";identity=" << h.identity
      << ";covered=" << h.covered << "\n";
  }
  return s.str();
}

int run_eval(const EvalArgs& a) {
  std::vector<EvalContig> contigs;
  for (auto& r : read_fastx(a.contigs)) {
    contigs.push_back({r.id, std::move(r.seq), header_freq(r.description).value_or(0.0)});
  }
  std::vector<EvalTruth> truth;
  for (auto& r : read_fastx(a.truth)) {
    const auto f = header_freq(r.description);
    if (!f) throw std::runtime_error("truth record " + r.id + " lacks freq=");
    truth.push_back({r.id, std::move(r.seq), *f});
  }
  const Metrics m = evaluate_assembly(contigs, truth);
  const std::string text = a.report == "tsv" ? metrics_tsv(m) : metrics_json(m).dump(2) + "\n";
  if (a.out.empty()) {
    std::cout << text;
  } else {
    write_file(a.out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasiflow: viral quasispecies assembly from paired-end reads"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  AssembleArgs as;
  auto* assemble_cmd = app.add_subcommand("assemble", "Assemble haplotype contigs with frequencies");
  assemble_cmd->add_option("--left", as.left, "Left mates (FASTA/FASTQ, optionally .gz)")->required()->check(CLI::ExistingFile);
  assemble_cmd->add_option("--right", as.right, "Right mates")->required()->check(CLI::ExistingFile);
  assemble_cmd->add_option("--insert", as.insert, "Insert size (distance between mate starts)")->required()->check(CLI::PositiveNumber);
  assemble_cmd->add_option("--delta", as.delta, "Insert size deviation (default 0.15 * insert)")->check(CLI::NonNegativeNumber);
  assemble_cmd->add_option("-k,--kmer-size", as.options.k, "k-mer size")->capture_default_str()->check(CLI::Range(3, 126));
  assemble_cmd->add_option("--threshold", as.threshold, "Solid k-mer threshold (skips KDE)");
  assemble_cmd->add_option("--oversmooth", as.options.oversmooth, "KDE bandwidth factor")->capture_default_str();
  assemble_cmd->add_option("--filigree-ratio", as.options.filigree_ratio, "Filigree edge ratio")->capture_default_str();
  assemble_cmd->add_option("--branch-limit", as.options.branch_limit, "Branch expansions per DAG search")->capture_default_str();
  assemble_cmd->add_flag("--forward-only", as.options.forward_only, "Strand-specific k-mers");
  assemble_cmd->add_option("-t,--threads", as.options.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  assemble_cmd->add_option("-o,--out", as.out, "Output directory")->capture_default_str();
  assemble_cmd->add_option("--min-tip", as.options.min_tip, "Tip length limit in bp (0 selects 2k)")->capture_default_str();
  assemble_cmd->add_option("--min-copath-support", as.options.min_copath_support, "Paired nodes required per anchor")->capture_default_str();
  assemble_cmd->add_option("--min-contig-len", as.options.min_contig_len, "Shortest reported contig")->capture_default_str();
  assemble_cmd->add_option("--max-dist", as.options.max_dist, "DAG search distance in bp (0 selects insert + 2 delta)")->capture_default_str();
  assemble_cmd->add_option("--dump-dag", as.dump_dag, "Write DOT files for the local DAG of edge U_i,U_j");

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate a haplotype population and paired reads");
  simulate_cmd->add_option("--length", sim.length, "Ancestor length")->capture_default_str();
  simulate_cmd->add_option("--haplotypes", sim.haplotypes, "Number of haplotypes")->capture_default_str();
  simulate_cmd->add_option("--divergence", sim.divergence, "Mutations per base per haplotype")->capture_default_str();
  simulate_cmd->add_option("--freqs", sim.freqs, "Haplotype frequencies summing to 1")->delimiter(',')->capture_default_str();
  simulate_cmd->add_option("--coverage", sim.reads.coverage, "Total coverage")->capture_default_str();
  simulate_cmd->add_option("--read-len", sim.reads.read_len, "Read length")->capture_default_str();
  simulate_cmd->add_option("--insert", sim.reads.insert_size, "Insert size")->capture_default_str();
  simulate_cmd->add_option("--delta", sim.reads.delta, "Insert size deviation")->capture_default_str();
  simulate_cmd->add_option("--error-rate", sim.reads.error_rate, "Substitution error rate")->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate_cmd->add_option("-o,--out", sim.out, "Output directory")->capture_default_str();

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score contigs against known haplotypes");
  eval_cmd->add_option("--contigs", ev.contigs, "Contig FASTA with freq= headers")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--truth", ev.truth, "Haplotype FASTA with freq= headers")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--report", ev.report, "Report format")->check(CLI::IsMember({"json", "tsv"}))->capture_default_str();
  eval_cmd->add_option("-o,--out", ev.out, "Report file (default stdout)");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::info);
  try {
    if (*assemble_cmd) return run_assemble(as);
    if (*simulate_cmd) return run_simulate(sim);
    if (*eval_cmd) return run_eval(ev);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    if (*assemble_cmd || *simulate_cmd) {
      // Best effort: the summary records the failure.
      const fs::path out(*assemble_cmd ? as.out : sim.out);
      std::error_code ec;
      fs::create_directories(out, ec);
      std::ofstream(out / "summary.json") << json{{"command", *assemble_cmd ? "assemble" : "simulate"},
                                                  {"error", e.what()}}
                                                 .dump(2)
                                          << "\n";
    }
    return 1;
  }
  return 1;
}
