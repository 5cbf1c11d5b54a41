#include "quasiflow/export.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace quasiflow {
namespace {

const char* cost_name(ArcCost c) {
  switch (c) {
    case ArcCost::kZero:
      return "zero";
    case ArcCost::kSquare:
      return "square";
    case ArcCost::kSquareAround:
      return "square_around";
  }
  return "?";
}

std::string apag_name(const Apag& apag, std::uint32_t v) {
  return std::to_string(v) + "_u" + std::to_string(apag.nodes[v].unitig);
}

}  // namespace

void write_gfa(std::ostream& out, const AssemblyGraph& ag) {
  out << "H\tVN:Z:1.0\n";
  out << std::setprecision(6) << std::fixed;
  for (const auto& u : ag.unitigs) {
    out << "S\t" << u.id << '\t' << u.seq << "\tLN:i:" << u.seq.size() << "\tdp:f:" << u.abundance << '\n';
  }
  for (const auto& e : ag.edges) {
    out << "L\t" << e.from << "\t+\t" << e.to << "\t+\t" << (ag.k - 1) << "M\tRC:i:" << e.support << '\n';
  }
}

void write_gfa(std::ostream& out, const Apag& apag) {
  out << "H\tVN:Z:1.0\n";
  out << std::setprecision(6) << std::fixed;
  for (std::uint32_t v = 0; v < apag.nodes.size(); ++v) {
    const auto& n = apag.nodes[v];
    out << "S\t" << apag_name(apag, v) << '\t' << n.seq << "\tLN:i:" << n.seq.size() << "\tdp:f:" << n.abundance
        << '\n';
  }
  for (const auto& e : apag.graph.edges) {
    out << "L\t" << apag_name(apag, e.from) << "\t+\t" << apag_name(apag, e.to) << "\t+\t" << (apag.k - 1)
        << "M\tRC:i:" << e.cov << '\n';
  }
}

void write_dot(std::ostream& out, const LocalDag& dag) {
  out << "digraph dag_" << dag.anchor_from << '_' << dag.anchor_to << " {\n  rankdir=LR;\n";
  for (std::uint32_t v = 0; v < dag.unitigs.size(); ++v) {
    const UnitigId u = dag.unitigs[v];
    const bool anchor = u == dag.anchor_from || u == dag.anchor_to;
    out << "  n" << v << " [label=\"U" << u << "\"" << (anchor ? ", shape=box" : "") << "];\n";
  }
  for (const auto& e : dag.graph.edges) {
    out << "  n" << e.from << " -> n" << e.to << " [label=\"" << e.cov << "\"];\n";
  }
  out << "}\n";
}

void write_network(std::ostream& out, const FlowNetwork& net, const FlowAssignment* flow) {
  out << "from\tto\tcap\tcost\tcenter\tflow\n";
  for (std::size_t a = 0; a < net.arcs.size(); ++a) {
    const auto& arc = net.arcs[a];
    out << arc.from << '\t' << arc.to << '\t' << arc.cap << '\t' << cost_name(arc.cost) << '\t' << arc.center
        << '\t';
    if (flow) {
      out << flow->flow[a];
    } else {
      out << '.';
    }
    out << '\n';
  }
  for (std::size_t v = 0; v < net.supply.size(); ++v) {
    if (net.supply[v] != 0) out << "# supply " << v << ' ' << net.supply[v] << '\n';
  }
}

void write_pairs_tsv(std::ostream& out, const PairedInfo& info) {
  out << "left_unitig\tright_unitig\tsupport\n";
  for (UnitigId u = 0; u < info.forward.size(); ++u) {
    for (const auto& [v, support] : info.forward[u]) out << u << '\t' << v << '\t' << support << '\n';
  }
}

void write_histogram_tsv(std::ostream& out, const std::vector<std::uint64_t>& hist) {
  out << "count\tkmers\n";
  for (std::size_t c = 0; c < hist.size(); ++c) {
    if (hist[c] != 0) out << c << '\t' << hist[c] << '\n';
  }
}

void write_density_tsv(std::ostream& out, const DensityCurve& curve) {
  out << "x\tdensity\n" << std::setprecision(10);
  for (std::size_t i = 0; i < curve.grid.size(); ++i) out << curve.grid[i] << '\t' << curve.density[i] << '\n';
}

void write_contigs_fasta(std::ostream& out, const ContigSet& set) {
  out << std::setprecision(6) << std::fixed;
  for (const auto& c : set.contigs) {
    out << '>' << c.id << " freq=" << c.rel_freq << " len=" << c.seq.size() << '\n';
    for (std::size_t i = 0; i < c.seq.size(); i += 80) out << c.seq.substr(i, 80) << '\n';
  }
}

void write_abundance_tsv(std::ostream& out, const ContigSet& set) {
  out << "contig\traw_flow\tfreq\n" << std::setprecision(6) << std::fixed;
  for (const auto& c : set.contigs) out << c.id << '\t' << c.raw_flow << '\t' << c.rel_freq << '\n';
}

std::string summary_json(const AssemblyResult& r, const AssembleOptions& o) {
  using nlohmann::json;
  json j;
  j["options"] = {{"k", o.k},
                  {"oversmooth", o.oversmooth},
                  {"filigree_ratio", o.filigree_ratio},
                  {"branch_limit", o.branch_limit},
                  {"forward_only", o.forward_only},
                  {"threads", o.threads},
                  {"min_tip", o.min_tip},
                  {"min_copath_support", o.min_copath_support},
                  {"min_contig_len", o.min_contig_len}};
  j["threshold"] = {{"t", r.threshold.t},
                    {"bandwidth", r.threshold.curve.bandwidth},
                    {"oversmooth", r.threshold.oversmooth},
                    {"degenerate", r.threshold.degenerate},
                    {"manual", o.threshold.has_value()}};
  j["solid_kmers"] = r.solid_kmers;
  j["graph"] = {{"raw_unitigs", r.raw_graph.unitigs.size()},
                {"unitigs", r.graph.unitigs.size()},
                {"edges", r.graph.edges.size()},
                {"paired_links", r.pairs.link_count()},
                {"max_dist", r.max_dist}};
  j["apag"] = {{"raw_nodes", r.raw_apag.nodes.size()},
               {"nodes", r.apag.nodes.size()},
               {"edges", r.apag.graph.edge_count()},
               {"haplotype_paths", r.haplotype_paths.size()}};
  json contigs = json::array();
  for (const auto& c : r.contigs.contigs) {
    contigs.push_back({{"id", c.id}, {"len", c.seq.size()}, {"freq", c.rel_freq}, {"raw_flow", c.raw_flow}});
  }
  j["contigs"] = std::move(contigs);
  j["seconds"] = r.seconds;
  return j.dump(2) + "\n";
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace quasiflow
