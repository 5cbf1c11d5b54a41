#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "quasiflow/kmer.hpp"
#include "quasiflow/seqio.hpp"

namespace quasiflow {

using KmerCounts = std::unordered_map<Kmer, std::uint32_t, KmerHash>;

struct KmerSpectrum {
  int k = 0;
  bool canonical = true;
  KmerCounts counts;

  std::uint32_t count(const Kmer& kmer) const;  // looks up the canonical form when canonical
  std::uint64_t total() const;
  // hist[c] = number of distinct k-mers seen exactly c times.
  std::vector<std::uint64_t> histogram() const;
};

struct CountOptions {
  bool canonical = true;
  int threads = 1;
};

// Throws std::invalid_argument when k exceeds the shortest read or kMaxK.
KmerSpectrum count_kmers(const ReadSet& reads, int k, const CountOptions& options = {});

struct DensityCurve {
  std::vector<double> grid;
  std::vector<double> density;
  double bandwidth = 0.0;
};

struct ThresholdResult {
  DensityCurve curve;
  std::uint32_t t = 2;
  bool degenerate = false;  // no valley above an error mode; t fell back to 2
  double oversmooth = 1.0;  // factor actually applied to the base bandwidth
};

// Silverman's rule of thumb on the count samples, one sample per distinct k-mer.
double silverman_bandwidth(const std::vector<std::uint64_t>& hist);
DensityCurve estimate_density(const std::vector<std::uint64_t>& hist, double bandwidth);

struct Extrema {
  std::vector<double> minima;  // abscissas of internal local minima, ascending
  std::vector<double> maxima;  // abscissas of internal local maxima, ascending
};
Extrema find_extrema(const DensityCurve& curve);

ThresholdResult kde_threshold(const std::vector<std::uint64_t>& hist, double oversmooth = 1.0);
ThresholdResult kde_threshold(const KmerSpectrum& spectrum, double oversmooth = 1.0);

struct SolidSet {
  std::uint32_t threshold = 1;
  int k = 0;
  bool canonical = true;
  KmerCounts kmers;  // solid k-mers with their counts
};

SolidSet filter_solid(const KmerSpectrum& spectrum, std::uint32_t t);

}  // namespace quasiflow
