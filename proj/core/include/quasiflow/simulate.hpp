#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "quasiflow/seqio.hpp"

namespace quasiflow {

struct HaplotypeSample {
  std::string ancestor;
  std::vector<std::string> haplotypes;
  std::vector<double> freqs;  // positive, sum to 1
  double divergence = 0.0;
  std::uint64_t seed = 0;
};

// Random ancestor; each haplotype receives round(divergence * length)
// independent mutations, 90% substitutions, 5% insertions, 5% deletions.
HaplotypeSample simulate_sample(std::size_t ancestor_len, std::size_t n, double divergence,
                                const std::vector<double>& freqs, std::uint64_t seed);

struct ReadSimOptions {
  double coverage = 100.0;  // total sample coverage, both mates counted
  std::size_t read_len = 100;
  int insert_size = 350;  // distance between mate starts
  int delta = 35;
  double error_rate = 0.0;  // per-base substitution probability
  std::uint64_t seed = 1;
  bool fr = true;  // emit the right mate reverse-complemented
};

// Throws std::invalid_argument when a haplotype cannot hold a full fragment.
ReadSet simulate_reads(const HaplotypeSample& sample, const ReadSimOptions& options);

// Records which haplotype each simulated pair came from (same order as pairs).
std::vector<std::size_t> simulated_origins(const HaplotypeSample& sample, const ReadSimOptions& options);

std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace quasiflow
