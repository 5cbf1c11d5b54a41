#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace quasiflow {

struct FrequencyErrors {
  double mee = 0.0;                   // percentage points
  std::optional<double> s_hat;        // absent with fewer than two haplotypes
  std::vector<double> per_haplotype;  // |est - truth|
};

// Inputs in percent, same haplotype order. Throws std::invalid_argument on a
// size mismatch or an empty set.
FrequencyErrors frequency_errors(const std::vector<double>& estimated, const std::vector<double>& truth);

// Smallest length L such that contigs of length >= L hold at least half of
// the total assembled bases. 0 for an empty set.
std::size_t n50(std::vector<std::size_t> lengths);

struct Alignment {
  std::size_t ref = 0;  // haplotype index
  bool reverse = false;
  std::size_t ref_begin = 0;
  std::size_t ref_end = 0;  // half-open
  std::size_t mismatches = 0;
  std::size_t insertions = 0;  // bases present only in the contig
  std::size_t deletions = 0;   // bases present only in the reference
  std::size_t ns = 0;
  std::size_t columns = 0;
  bool split = false;  // hits on a second diagonal more than 1 kb away

  std::size_t edits() const { return mismatches + insertions + deletions + ns; }
  double identity() const { return columns == 0 ? 0.0 : 1.0 - static_cast<double>(edits()) / static_cast<double>(columns); }
};

struct EvalContig {
  std::string id;
  std::string seq;
  double freq = 0.0;  // relative, in [0, 1]
};

struct EvalTruth {
  std::string id;
  std::string seq;
  double freq = 0.0;
};

// Seeds with shared 15-mers, picks the densest diagonal over both strands
// and all references, then runs a banded semi-global edit alignment.
// nullopt when the contig shares no seed with any reference.
std::optional<Alignment> align_contig(std::string_view contig, const std::vector<std::string>& refs);

struct HaplotypeReport {
  std::string id;
  double true_freq = 0.0;  // percent
  double est_freq = 0.0;   // percent, from the longest assigned contig
  std::optional<std::size_t> longest_contig;
  double identity = 0.0;
  double covered = 0.0;  // fraction of the haplotype
};

struct Metrics {
  bool empty = false;
  double genome_fraction = 0.0;  // percent
  std::size_t n50 = 0;
  double error_rate = 0.0;  // percent
  std::size_t misassemblies = 0;
  std::size_t unaligned = 0;
  std::optional<double> mee;
  std::optional<double> s_hat;
  std::vector<HaplotypeReport> haplotypes;
  std::vector<std::optional<Alignment>> placements;
};

Metrics evaluate_assembly(const std::vector<EvalContig>& contigs, const std::vector<EvalTruth>& truth);

// Reads "freq=<x>" from a FASTA description. nullopt if absent.
std::optional<double> header_freq(std::string_view header);

}  // namespace quasiflow
