#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "quasiflow/dagcov.hpp"
#include "quasiflow/finalize.hpp"
#include "quasiflow/flow.hpp"
#include "quasiflow/pipeline.hpp"

namespace quasiflow {

// GFA1. Segments carry `dp:f:` abundance, links carry `RC:i:` support and
// the k-1 overlap as CIGAR.
void write_gfa(std::ostream& out, const AssemblyGraph& ag);
// APAG segments are named `<instance>_u<unitig>`; links carry the summed flow.
void write_gfa(std::ostream& out, const Apag& apag);

// Graphviz digraph of a local DAG with unitig ids as labels and edge
// coverages; anchors are drawn as boxes.
void write_dot(std::ostream& out, const LocalDag& dag);

// One arc per line: from, to, cap, cost kind, center, flow.
void write_network(std::ostream& out, const FlowNetwork& net, const FlowAssignment* flow = nullptr);

// left_unitig, right_unitig, support.
void write_pairs_tsv(std::ostream& out, const PairedInfo& info);

// count, distinct k-mers; zero rows skipped.
void write_histogram_tsv(std::ostream& out, const std::vector<std::uint64_t>& hist);
void write_density_tsv(std::ostream& out, const DensityCurve& curve);

// `>contig_<i> freq=<f> len=<L>` with f printed to six decimals.
void write_contigs_fasta(std::ostream& out, const ContigSet& set);
// contig id, raw flow, polished relative frequency.
void write_abundance_tsv(std::ostream& out, const ContigSet& set);

std::string summary_json(const AssemblyResult& result, const AssembleOptions& options);

// Opens `path` for writing and throws std::runtime_error on failure.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace quasiflow
