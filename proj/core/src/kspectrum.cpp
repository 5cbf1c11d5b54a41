#include "quasiflow/kspectrum.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace quasiflow {
namespace {

constexpr int kMaxDoublings = 10;

void count_sequence(std::string_view seq, int k, bool canonical, KmerCounts& counts) {
  if (!canonical) {
    for_each_kmer(seq, k, [&](std::size_t, const Kmer& kmer) { ++counts[kmer]; });
    return;
  }
  for_each_kmer(seq, k, [&](std::size_t, const Kmer& kmer) { ++counts[canonicalize(kmer).kmer]; });
}

// Value at rank r (0-based) of the sorted sample encoded by hist.
double sample_at_rank(const std::vector<std::uint64_t>& hist, std::uint64_t rank) {
  std::uint64_t seen = 0;
  for (std::size_t c = 1; c < hist.size(); ++c) {
    seen += hist[c];
    if (rank < seen) return static_cast<double>(c);
  }
  return static_cast<double>(hist.size() - 1);
}

double quantile(const std::vector<std::uint64_t>& hist, std::uint64_t n, double p) {
  const double pos = p * static_cast<double>(n - 1);
  const auto lo = static_cast<std::uint64_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(lo);
  const double a = sample_at_rank(hist, lo);
  const double b = frac > 0.0 ? sample_at_rank(hist, lo + 1) : a;
  return a + frac * (b - a);
}

std::uint64_t sample_size(const std::vector<std::uint64_t>& hist) {
  std::uint64_t n = 0;
  for (std::size_t c = 1; c < hist.size(); ++c) n += hist[c];
  return n;
}

// Internal extrema after merging light modes: while the samples between two
// consecutive minima (or a minimum and the data edge) fall under 0.1% of the
// total, the shallower bounding minimum is dropped.
Extrema significant_extrema(const DensityCurve& curve, const std::vector<std::uint64_t>& hist) {
  Extrema ex = find_extrema(curve);
  auto& m = ex.minima;
  const double floor = 1e-3 * static_cast<double>(sample_size(hist));
  auto mass = [&](double lo, double hi) {
    double sum = 0.0;
    for (std::size_t c = 1; c < hist.size(); ++c) {
      const auto x = static_cast<double>(c);
      if (x > lo && x <= hi) sum += static_cast<double>(hist[c]);
    }
    return sum;
  };
  auto density_at = [&](double x) {
    const auto it = std::lower_bound(curve.grid.begin(), curve.grid.end(), x);
    return curve.density[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - curve.grid.begin(),
                                                                           std::ssize(curve.grid) - 1))];
  };
  while (!m.empty()) {
    std::size_t light = 0;
    double lightest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= m.size(); ++i) {
      const double lo = i == 0 ? 0.0 : m[i - 1];
      const double hi = i == m.size() ? static_cast<double>(hist.size()) : m[i];
      const double w = mass(lo, hi);
      if (w < lightest) {
        lightest = w;
        light = i;
      }
    }
    if (lightest >= floor) break;
    std::size_t drop = 0;
    if (light == 0) {
      drop = 0;
    } else if (light == m.size()) {
      drop = m.size() - 1;
    } else {
      drop = density_at(m[light - 1]) > density_at(m[light]) ? light - 1 : light;
    }
    m.erase(m.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  return ex;
}

}  // namespace

std::uint32_t KmerSpectrum::count(const Kmer& kmer) const {
  const auto it = counts.find(canonical ? canonicalize(kmer).kmer : kmer);
  return it == counts.end() ? 0 : it->second;
}

std::uint64_t KmerSpectrum::total() const {
  std::uint64_t t = 0;
  for (const auto& [_, c] : counts) t += c;
  return t;
}

std::vector<std::uint64_t> KmerSpectrum::histogram() const {
  std::uint32_t max_count = 0;
  for (const auto& [_, c] : counts) max_count = std::max(max_count, c);
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(max_count) + 1, 0);
  for (const auto& [_, c] : counts) ++hist[c];
  return hist;
}

KmerSpectrum count_kmers(const ReadSet& reads, int k, const CountOptions& options) {
  if (k < 1 || k > Kmer::kMaxK) throw std::invalid_argument("k must be in [1, 127]");
  if (!reads.pairs.empty() && static_cast<std::size_t>(k) > reads.min_read_length()) {
    throw std::invalid_argument("k exceeds the shortest read length");
  }
  KmerSpectrum spectrum;
  spectrum.k = k;
  spectrum.canonical = options.canonical;

  const std::size_t n = reads.pairs.size();
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.threads, 1)), 1,
                                                      std::max<std::size_t>(n, 1));
  std::vector<KmerCounts> shards(workers);
  auto work = [&](std::size_t w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    for (std::size_t i = begin; i < end; ++i) {
      count_sequence(reads.pairs[i].left, k, options.canonical, shards[w]);
      count_sequence(reads.pairs[i].right, k, options.canonical, shards[w]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  spectrum.counts = std::move(shards[0]);
  for (std::size_t w = 1; w < workers; ++w) {
    for (const auto& [kmer, c] : shards[w]) spectrum.counts[kmer] += c;
  }
  return spectrum;
}

double silverman_bandwidth(const std::vector<std::uint64_t>& hist) {
  const std::uint64_t n = sample_size(hist);
  if (n < 2) return 0.0;
  double mean = 0.0;
  for (std::size_t c = 1; c < hist.size(); ++c) mean += static_cast<double>(c) * static_cast<double>(hist[c]);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t c = 1; c < hist.size(); ++c) {
    const double d = static_cast<double>(c) - mean;
    ss += d * d * static_cast<double>(hist[c]);
  }
  const double sigma = std::sqrt(ss / static_cast<double>(n - 1));
  const double iqr = quantile(hist, n, 0.75) - quantile(hist, n, 0.25);
  const double spread = iqr > 0.0 ? std::min(sigma, iqr / 1.34) : sigma;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

DensityCurve estimate_density(const std::vector<std::uint64_t>& hist, double bandwidth) {
  DensityCurve curve;
  curve.bandwidth = bandwidth;
  const std::uint64_t n = sample_size(hist);
  if (n == 0 || bandwidth <= 0.0) return curve;
  // Grid 1..cap where cap is the 99.9th percentile of the counts.
  const auto cap = static_cast<std::size_t>(std::max(1.0, quantile(hist, n, 0.999)));
  const double reach = 8.0 * bandwidth;
  const double norm = 1.0 / (static_cast<double>(n) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  curve.grid.reserve(cap);
  curve.density.reserve(cap);
  for (std::size_t x = 1; x <= cap; ++x) {
    const double xd = static_cast<double>(x);
    const auto lo = static_cast<std::size_t>(std::max(1.0, std::ceil(xd - reach)));
    const auto hi = std::min(hist.size() - 1, static_cast<std::size_t>(std::floor(xd + reach)));
    double sum = 0.0;
    for (std::size_t c = lo; c <= hi; ++c) {
      if (hist[c] == 0) continue;
      const double z = (xd - static_cast<double>(c)) / bandwidth;
      sum += static_cast<double>(hist[c]) * std::exp(-0.5 * z * z);
    }
    curve.grid.push_back(xd);
    curve.density.push_back(sum * norm);
  }
  return curve;
}

Extrema find_extrema(const DensityCurve& curve) {
  Extrema ex;
  const auto& f = curve.density;
  if (f.size() < 3) return ex;
  const double eps = 1e-12 * *std::max_element(f.begin(), f.end());
  // Derivative sign per grid step, with differences below eps treated as flat.
  std::vector<int> sign(f.size() - 1);
  for (std::size_t i = 0; i + 1 < f.size(); ++i) {
    const double d = f[i + 1] - f[i];
    sign[i] = d > eps ? 1 : (d < -eps ? -1 : 0);
  }
  int last = 0;
  std::size_t last_end = 0;  // grid index where the last non-flat step ended
  for (std::size_t i = 0; i < sign.size(); ++i) {
    if (sign[i] == 0) continue;
    if (last != 0 && sign[i] != last) {
      // The turning point spans the flat run between grid indices last_end and i.
      const double x = 0.5 * (curve.grid[last_end] + curve.grid[i]);
      (last < 0 ? ex.minima : ex.maxima).push_back(x);
    }
    last = sign[i];
    last_end = i + 1;
  }
  return ex;
}

ThresholdResult kde_threshold(const std::vector<std::uint64_t>& hist, double oversmooth) {
  if (oversmooth < 1.0) throw std::invalid_argument("oversmooth factor must be >= 1");
  if (sample_size(hist) == 0) throw std::invalid_argument("empty k-mer spectrum");
  ThresholdResult result;
  const double base = silverman_bandwidth(hist);
  auto degenerate = [&](ThresholdResult r) {
    spdlog::warn("k-mer spectrum has no usable valley; falling back to threshold 2");
    r.t = 2;
    r.degenerate = true;
    return r;
  };
  if (base <= 0.0) return degenerate(std::move(result));

  double factor = oversmooth;
  result.curve = estimate_density(hist, base * factor);
  result.oversmooth = factor;
  Extrema ex = significant_extrema(result.curve, hist);
  for (int doubling = 0; doubling < kMaxDoublings && !ex.maxima.empty(); ++doubling) {
    const double rightmost = ex.maxima.back();
    const auto below = std::count_if(ex.minima.begin(), ex.minima.end(), [&](double m) { return m < rightmost; });
    if (below <= 1) break;
    DensityCurve next = estimate_density(hist, base * factor * 2.0);
    Extrema next_ex = significant_extrema(next, hist);
    // Stop before smoothing swallows the first valley, i.e. when the next
    // curve's first minimum is gone or has moved by more than a bandwidth.
    if (!ex.minima.empty() &&
        (next_ex.minima.empty() || std::abs(next_ex.minima.front() - ex.minima.front()) > next.bandwidth)) {
      break;
    }
    factor *= 2.0;
    result.curve = std::move(next);
    result.oversmooth = factor;
    ex = std::move(next_ex);
  }
  if (ex.minima.empty() || ex.maxima.empty() || ex.minima.front() > ex.maxima.back()) {
    return degenerate(std::move(result));
  }
  const double valley = ex.minima.front();
  // Without low-abundance mass the first valley separates two genomic modes.
  const auto& c = result.curve;
  const auto at = [&](double x) {
    const auto it = std::lower_bound(c.grid.begin(), c.grid.end(), x);
    return c.density[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - c.grid.begin(), std::ssize(c.grid) - 1))];
  };
  if (c.density.front() <= at(valley)) {
    spdlog::warn("k-mer spectrum has no error mode; falling back to threshold 2");
    result.t = 2;
    result.degenerate = true;
    return result;
  }
  double peak = result.curve.grid.front();
  for (double m : ex.maxima) {
    if (m < valley) peak = m;
  }
  result.t = static_cast<std::uint32_t>(std::max(1.0, std::round(0.5 * (valley + peak))));
  return result;
}

ThresholdResult kde_threshold(const KmerSpectrum& spectrum, double oversmooth) {
  return kde_threshold(spectrum.histogram(), oversmooth);
}

SolidSet filter_solid(const KmerSpectrum& spectrum, std::uint32_t t) {
  SolidSet solid;
  solid.threshold = std::max<std::uint32_t>(t, 1);
  solid.k = spectrum.k;
  solid.canonical = spectrum.canonical;
  for (const auto& [kmer, c] : spectrum.counts) {
    if (c >= solid.threshold) solid.kmers.emplace(kmer, c);
  }
  return solid;
}

}  // namespace quasiflow
