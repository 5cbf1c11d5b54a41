#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "quasiflow/kmer.hpp"
#include "quasiflow/kspectrum.hpp"

using namespace quasiflow;

namespace {

ReadSet single_reads(std::vector<std::string> seqs) {
  ReadSet reads;
  reads.insert_size = 1000;
  for (std::size_t i = 0; i + 1 < seqs.size(); i += 2) reads.pairs.push_back({seqs[i], seqs[i + 1], std::to_string(i)});
  return reads;
}

// Plain-text reference counter.
std::map<std::string, std::uint32_t> naive_counts(const ReadSet& reads, int k, bool canonical) {
  std::map<std::string, std::uint32_t> m;
  for (const auto& p : reads.pairs) {
    for (const std::string* s : {&p.left, &p.right}) {
      for (std::size_t i = 0; i + static_cast<std::size_t>(k) <= s->size(); ++i) {
        std::string w = s->substr(i, static_cast<std::size_t>(k));
        if (canonical) w = std::min(w, reverse_complement(w));
        ++m[w];
      }
    }
  }
  return m;
}

double valley_of(const DensityCurve& c, double from, double to) {
  double best_x = from;
  double best = INFINITY;
  for (std::size_t i = 0; i < c.grid.size(); ++i) {
    if (c.grid[i] > from && c.grid[i] < to && c.density[i] < best) {
      best = c.density[i];
      best_x = c.grid[i];
    }
  }
  return best_x;
}

}  // namespace

TEST(CountKmers, ForwardOnlyHandCount) {
  CountOptions o;
  o.canonical = false;
  const auto s = count_kmers(single_reads({"AAAA", "CCC"}), 3, o);
  EXPECT_EQ(s.count(Kmer("AAA")), 2U);
  EXPECT_EQ(s.count(Kmer("CCC")), 1U);
  EXPECT_EQ(s.counts.size(), 2U);
}

TEST(CountKmers, CanonicalSymmetry) {
  std::mt19937_64 rng(3);
  const std::string read = fixture::random_dna(rng, 60);
  const auto once = count_kmers(single_reads({read, read}), 15);
  const auto mirrored = count_kmers(single_reads({read, reverse_complement(read)}), 15);
  EXPECT_EQ(once.counts, mirrored.counts);
}

TEST(CountKmers, MatchesNaiveCounter) {
  std::mt19937_64 rng(17);
  std::vector<std::string> seqs;
  const std::string genome = fixture::random_dna(rng, 300);
  std::uniform_int_distribution<std::size_t> start(0, 300 - 50);
  for (int i = 0; i < 80; ++i) seqs.push_back(genome.substr(start(rng), 50));
  const ReadSet reads = single_reads(seqs);
  for (bool canonical : {false, true}) {
    CountOptions o;
    o.canonical = canonical;
    o.threads = 3;
    const auto s = count_kmers(reads, 11, o);
    const auto ref = naive_counts(reads, 11, canonical);
    ASSERT_EQ(s.counts.size(), ref.size());
    for (const auto& [w, c] : ref) EXPECT_EQ(s.counts.at(Kmer(w)), c) << w;
  }
}

TEST(CountKmers, KLongerThanReadThrows) {
  EXPECT_THROW(count_kmers(single_reads({"ACGT", "ACGT"}), 5), std::invalid_argument);
}

TEST(KdeThreshold, FlatSpectrumIsDegenerate) {
  std::vector<std::uint64_t> hist(51, 0);
  hist[50] = 1000;
  const auto r = kde_threshold(hist);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.t, 2U);
}

TEST(KdeThreshold, BimodalHistogram) {
  std::vector<std::uint64_t> hist(23, 0);
  hist[1] = 1000;
  hist[2] = 500;
  hist[3] = 100;
  hist[20] = 50;
  hist[21] = 60;
  hist[22] = 50;
  const auto r = kde_threshold(hist);
  EXPECT_FALSE(r.degenerate);
  EXPECT_GT(r.t, 3U);
  EXPECT_LT(r.t, 20U);
}

TEST(KdeThreshold, MixtureSeparatesModes) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto hist = fixture::poisson_mixture_histogram(seed);
    const auto r = kde_threshold(hist);
    EXPECT_GT(r.t, 6U) << seed;
    EXPECT_LT(r.t, 40U) << seed;
    // Fine-grid oracle: the valley of the curve between the two modes.
    const double valley = valley_of(r.curve, 4.0, 50.0);
    EXPECT_GT(valley, 6.0);
    EXPECT_LT(valley, 40.0);
  }
}

TEST(KdeThreshold, RejectsUndersmoothing) {
  EXPECT_THROW(kde_threshold(std::vector<std::uint64_t>{0, 10, 5}, 0.5), std::invalid_argument);
}

TEST(Density, IntegratesToAboutOne) {
  // The curve lives on the integer grid, so the bandwidth must span a few
  // grid steps and the mode must sit away from the boundary at 1.
  const auto hist = fixture::poisson_mixture_histogram(4, 0, 1.0, 5000, 30.0);
  const DensityCurve c = estimate_density(hist, 2.0);
  ASSERT_GE(c.grid.size(), 2U);
  double area = 0.0;
  for (std::size_t i = 1; i < c.grid.size(); ++i) {
    area += 0.5 * (c.density[i] + c.density[i - 1]) * (c.grid[i] - c.grid[i - 1]);
  }
  EXPECT_NEAR(area, 1.0, 0.05);
  for (double d : c.density) EXPECT_GE(d, 0.0);
}

TEST(FilterSolid, DirectFilterAndIdentity) {
  KmerSpectrum s;
  s.k = 3;
  s.canonical = false;
  s.counts[Kmer("AAA")] = 5;
  s.counts[Kmer("CCC")] = 1;
  const auto two = filter_solid(s, 2);
  EXPECT_EQ(two.kmers.size(), 1U);
  EXPECT_TRUE(two.kmers.contains(Kmer("AAA")));
  EXPECT_EQ(filter_solid(s, 1).kmers.size(), 2U);
}

TEST(FilterSolid, MonotoneInThreshold) {
  const auto hist_reads = [] {
    std::mt19937_64 rng(8);
    std::vector<std::string> seqs;
    const std::string g = fixture::random_dna(rng, 200);
    std::uniform_int_distribution<std::size_t> start(0, 150);
    for (int i = 0; i < 60; ++i) seqs.push_back(g.substr(start(rng), 50));
    return single_reads(seqs);
  }();
  const auto s = count_kmers(hist_reads, 9);
  std::size_t last = SIZE_MAX;
  for (std::uint32_t t = 1; t < 30; ++t) {
    const auto solid = filter_solid(s, t);
    EXPECT_LE(solid.kmers.size(), last);
    last = solid.kmers.size();
    for (const auto& [kmer, c] : solid.kmers) EXPECT_GE(c, t);
  }
}
