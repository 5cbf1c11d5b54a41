#include "quasiflow/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "quasiflow/kmer.hpp"

namespace quasiflow {
namespace {

constexpr char kBases[] = {'A', 'C', 'G', 'T'};

char other_base(char c, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 2);
  const int skip = base_code(c);
  int b = pick(rng);
  if (skip == kInvalidBase) return kBases[b];
  if (b >= skip) ++b;
  return kBases[b];
}

std::string mutate(const std::string& ancestor, std::size_t count, std::mt19937_64& rng) {
  std::vector<std::size_t> positions(ancestor.size());
  std::iota(positions.begin(), positions.end(), 0);
  std::shuffle(positions.begin(), positions.end(), rng);
  positions.resize(std::min(count, positions.size()));
  std::sort(positions.begin(), positions.end(), std::greater<>());
  std::uniform_real_distribution<double> kind(0.0, 1.0);
  std::uniform_int_distribution<int> base(0, 3);
  std::string h = ancestor;
  for (std::size_t pos : positions) {
    const double r = kind(rng);
    if (r < 0.90) {
      h[pos] = other_base(h[pos], rng);
    } else if (r < 0.95) {
      h.insert(h.begin() + static_cast<std::ptrdiff_t>(pos), kBases[base(rng)]);
    } else {
      h.erase(pos, 1);
    }
  }
  return h;
}

struct Fragment {
  std::size_t hap;
  std::size_t start;
  std::size_t gap;
};

template <typename Fn>
void for_each_fragment(const HaplotypeSample& sample, const ReadSimOptions& o, Fn&& fn) {
  if (o.insert_size <= static_cast<int>(o.read_len)) throw std::invalid_argument("insert size must exceed read length");
  if (o.delta < 0 || o.delta >= o.insert_size) throw std::invalid_argument("delta out of range");
  const std::size_t span = static_cast<std::size_t>(o.insert_size + o.delta) + o.read_len;
  double mean_len = 0.0;
  for (std::size_t i = 0; i < sample.haplotypes.size(); ++i) {
    if (sample.haplotypes[i].size() < span) throw std::invalid_argument("haplotype shorter than a fragment");
    mean_len += sample.freqs[i] * static_cast<double>(sample.haplotypes[i].size());
  }
  const auto pairs = static_cast<std::size_t>(std::llround(o.coverage * mean_len / (2.0 * static_cast<double>(o.read_len))));
  std::mt19937_64 rng(o.seed);
  std::discrete_distribution<std::size_t> which(sample.freqs.begin(), sample.freqs.end());
  std::uniform_int_distribution<int> gap(o.insert_size - o.delta, o.insert_size + o.delta);
  for (std::size_t i = 0; i < pairs; ++i) {
    const std::size_t h = which(rng);
    const auto g = static_cast<std::size_t>(gap(rng));
    std::uniform_int_distribution<std::size_t> start(0, sample.haplotypes[h].size() - g - o.read_len);
    fn(i, Fragment{h, start(rng), g}, rng);
  }
}

}  // namespace

HaplotypeSample simulate_sample(std::size_t ancestor_len, std::size_t n, double divergence,
                                const std::vector<double>& freqs, std::uint64_t seed) {
  if (divergence < 0.0 || divergence >= 0.2) throw std::invalid_argument("divergence must be in [0, 0.2)");
  if (freqs.size() != n) throw std::invalid_argument("one frequency per haplotype required");
  const double total = std::accumulate(freqs.begin(), freqs.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-9 || std::any_of(freqs.begin(), freqs.end(), [](double f) { return f <= 0.0; })) {
    throw std::invalid_argument("frequencies must be positive and sum to 1");
  }
  HaplotypeSample s;
  s.freqs = freqs;
  s.divergence = divergence;
  s.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> base(0, 3);
  s.ancestor.resize(ancestor_len);
  for (char& c : s.ancestor) c = kBases[base(rng)];
  const auto count = static_cast<std::size_t>(std::llround(divergence * static_cast<double>(ancestor_len)));
  for (std::size_t i = 0; i < n; ++i) s.haplotypes.push_back(mutate(s.ancestor, count, rng));
  return s;
}

ReadSet simulate_reads(const HaplotypeSample& sample, const ReadSimOptions& options) {
  ReadSet reads;
  reads.insert_size = options.insert_size;
  reads.delta = options.delta;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto read_at = [&](const std::string& h, std::size_t pos, std::mt19937_64& rng) {
    std::string r = h.substr(pos, options.read_len);
    if (options.error_rate > 0.0) {
      for (char& c : r) {
        if (coin(rng) < options.error_rate) c = other_base(c, rng);
      }
    }
    return r;
  };
  for_each_fragment(sample, options, [&](std::size_t i, const Fragment& f, std::mt19937_64& rng) {
    const std::string& h = sample.haplotypes[f.hap];
    ReadPair p;
    p.id = "sim_" + std::to_string(i);
    p.left = read_at(h, f.start, rng);
    p.right = read_at(h, f.start + f.gap, rng);
    if (options.fr) p.right = reverse_complement(p.right);
    reads.pairs.push_back(std::move(p));
  });
  reads.validate();
  return reads;
}

std::vector<std::size_t> simulated_origins(const HaplotypeSample& sample, const ReadSimOptions& options) {
  std::vector<std::size_t> out;
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for_each_fragment(sample, options, [&](std::size_t, const Fragment& f, std::mt19937_64& rng) {
    out.push_back(f.hap);
    // Consume the same random draws as simulate_reads.
    if (options.error_rate > 0.0) {
      for (std::size_t j = 0; j < 2 * options.read_len; ++j) {
        if (coin(rng) < options.error_rate) other_base('A', rng);
      }
    }
  });
  return out;
}

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1);
  std::vector<std::size_t> cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

}  // namespace quasiflow
