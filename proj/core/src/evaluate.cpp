#include "quasiflow/evaluate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "quasiflow/kmer.hpp"

namespace quasiflow {
namespace {

constexpr std::size_t kSeed = 15;
constexpr std::int64_t kBin = 32;
constexpr std::int64_t kSplitDistance = 1000;
constexpr std::size_t kMaxOccurrences = 8;

// 2-bit packed seeds; windows with a non-ACGT base are skipped.
template <typename Fn>
void for_each_seed(std::string_view s, Fn&& fn) {
  if (s.size() < kSeed) return;
  const std::uint64_t mask = (std::uint64_t{1} << (2 * kSeed)) - 1;
  std::uint64_t code = 0;
  std::size_t valid = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::uint8_t c = base_code(s[i]);
    if (c == kInvalidBase) {
      valid = 0;
      code = 0;
      continue;
    }
    code = ((code << 2) | static_cast<std::uint64_t>(c)) & mask;
    if (++valid >= kSeed) fn(i + 1 - kSeed, code);
  }
}

class SeedIndex {
 public:
  explicit SeedIndex(const std::vector<std::string>& refs) : refs_(refs), index_(refs.size()) {
    for (std::size_t r = 0; r < refs.size(); ++r) {
      for_each_seed(refs[r], [&](std::size_t pos, std::uint64_t code) {
        auto& v = index_[r][code];
        if (v.size() < kMaxOccurrences) v.push_back(static_cast<std::uint32_t>(pos));
      });
    }
  }

  const std::vector<std::string>& refs() const { return refs_; }

  // Diagonals (ref pos - query pos) of every seed hit on reference r.
  std::vector<std::int64_t> hits(std::string_view query, std::size_t r) const {
    std::vector<std::int64_t> out;
    for_each_seed(query, [&](std::size_t pos, std::uint64_t code) {
      const auto it = index_[r].find(code);
      if (it == index_[r].end()) return;
      for (std::uint32_t q : it->second) out.push_back(static_cast<std::int64_t>(q) - static_cast<std::int64_t>(pos));
    });
    return out;
  }

 private:
  const std::vector<std::string>& refs_;
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> index_;
};

std::int64_t bin_of(std::int64_t diag) { return diag >= 0 ? diag / kBin : -((-diag + kBin - 1) / kBin); }

struct DiagonalCall {
  std::size_t votes = 0;
  std::int64_t diag = 0;
  bool split = false;
};

DiagonalCall call_diagonal(std::vector<std::int64_t> hits) {
  DiagonalCall call;
  if (hits.empty()) return call;
  std::unordered_map<std::int64_t, std::size_t> bins;
  for (std::int64_t d : hits) ++bins[bin_of(d)];
  // Score each bin together with its neighbours so indels do not split votes.
  std::int64_t best_bin = 0;
  std::size_t best = 0;
  for (const auto& [b, n] : bins) {
    std::size_t score = n;
    for (std::int64_t nb : {b - 1, b + 1}) {
      const auto it = bins.find(nb);
      if (it != bins.end()) score += it->second;
    }
    if (score > best || (score == best && b < best_bin)) {
      best = score;
      best_bin = b;
    }
  }
  std::vector<std::int64_t> near;
  std::size_t far = 0;
  for (std::int64_t d : hits) {
    const std::int64_t b = bin_of(d);
    if (std::abs(b - best_bin) <= 1) near.push_back(d);
  }
  std::nth_element(near.begin(), near.begin() + static_cast<std::ptrdiff_t>(near.size() / 2), near.end());
  call.diag = near[near.size() / 2];
  call.votes = best;
  std::unordered_map<std::int64_t, std::size_t> far_bins;
  for (std::int64_t d : hits) {
    if (std::abs(d - call.diag) > kSplitDistance) ++far_bins[bin_of(d)];
  }
  for (const auto& [b, n] : far_bins) far = std::max(far, n);
  call.split = far >= std::max<std::size_t>(20, best / 10);
  return call;
}

enum : std::uint8_t { kStart, kDiag, kIns, kDel };

// Banded semi-global edit alignment: the query is aligned end to end, the
// reference ends are free.
std::optional<Alignment> banded_align(std::string_view q, std::string_view ref, std::int64_t diag) {
  const auto n = static_cast<std::int64_t>(q.size());
  const auto m = static_cast<std::int64_t>(ref.size());
  const std::int64_t band = 32 + n / 20;
  const std::int64_t width = 2 * band + 1;
  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max() / 2;
  std::vector<std::uint32_t> prev(static_cast<std::size_t>(width), kInf);
  std::vector<std::uint32_t> cur(static_cast<std::size_t>(width), kInf);
  std::vector<std::uint8_t> trace(static_cast<std::size_t>((n + 1) * width), kStart);
  auto j_of = [&](std::int64_t i, std::int64_t k) { return i + diag + k - band; };
  for (std::int64_t k = 0; k < width; ++k) {
    const std::int64_t j = j_of(0, k);
    if (j >= 0 && j <= m) prev[static_cast<std::size_t>(k)] = 0;
  }
  for (std::int64_t i = 1; i <= n; ++i) {
    for (std::int64_t k = 0; k < width; ++k) {
      const auto ku = static_cast<std::size_t>(k);
      cur[ku] = kInf;
      const std::int64_t j = j_of(i, k);
      if (j < 0 || j > m) continue;
      std::uint32_t best = kInf;
      std::uint8_t op = kStart;
      if (j >= 1 && prev[ku] < kInf) {
        const bool same = q[static_cast<std::size_t>(i - 1)] == ref[static_cast<std::size_t>(j - 1)];
        best = prev[ku] + (same ? 0 : 1);
        op = kDiag;
      }
      if (k + 1 < width && prev[ku + 1] + 1 < best) {
        best = prev[ku + 1] + 1;
        op = kIns;
      }
      if (k >= 1 && cur[ku - 1] + 1 < best) {
        best = cur[ku - 1] + 1;
        op = kDel;
      }
      cur[ku] = best;
      trace[static_cast<std::size_t>(i * width + k)] = op;
    }
    std::swap(prev, cur);
  }
  std::int64_t end_k = -1;
  for (std::int64_t k = 0; k < width; ++k) {
    if (prev[static_cast<std::size_t>(k)] >= kInf) continue;
    if (end_k < 0 || prev[static_cast<std::size_t>(k)] < prev[static_cast<std::size_t>(end_k)]) end_k = k;
  }
  if (end_k < 0) return std::nullopt;

  Alignment a;
  a.ref_end = static_cast<std::size_t>(j_of(n, end_k));
  std::int64_t i = n;
  std::int64_t k = end_k;
  while (i > 0) {
    const std::uint8_t op = trace[static_cast<std::size_t>(i * width + k)];
    const std::int64_t j = j_of(i, k);
    ++a.columns;
    if (op == kDiag) {
      const char qc = q[static_cast<std::size_t>(i - 1)];
      if (qc == 'N' || qc == 'n') {
        ++a.ns;
      } else if (qc != ref[static_cast<std::size_t>(j - 1)]) {
        ++a.mismatches;
      }
      --i;
    } else if (op == kIns) {
      ++a.insertions;
      --i;
      ++k;
    } else if (op == kDel) {
      ++a.deletions;
      --k;
    } else {
      throw std::logic_error("broken alignment trace");
    }
  }
  a.ref_begin = static_cast<std::size_t>(j_of(0, k));
  return a;
}

std::optional<Alignment> align_with(const SeedIndex& index, std::string_view contig) {
  const std::string rc = reverse_complement(contig);
  std::size_t best_votes = 0;
  for (std::size_t r = 0; r < index.refs().size(); ++r) {
    for (bool rev : {false, true}) {
      const DiagonalCall call = call_diagonal(index.hits(rev ? std::string_view(rc) : contig, r));
      best_votes = std::max(best_votes, call.votes);
    }
  }
  if (best_votes == 0) return std::nullopt;
  // Equal seed support on several references is common for close variants;
  // resolve it by edit distance.
  std::optional<Alignment> chosen;
  for (std::size_t r = 0; r < index.refs().size(); ++r) {
    for (bool rev : {false, true}) {
      const std::string_view q = rev ? std::string_view(rc) : contig;
      const DiagonalCall call = call_diagonal(index.hits(q, r));
      if (call.votes == 0 || call.votes * 2 < best_votes) continue;
      auto a = banded_align(q, index.refs()[r], call.diag);
      if (!a) continue;
      a->ref = r;
      a->reverse = rev;
      a->split = call.split;
      if (!chosen || a->edits() < chosen->edits()) chosen = a;
    }
  }
  return chosen;
}

}  // namespace

FrequencyErrors frequency_errors(const std::vector<double>& estimated, const std::vector<double>& truth) {
  if (estimated.size() != truth.size()) throw std::invalid_argument("estimate and truth sizes differ");
  if (estimated.empty()) throw std::invalid_argument("no haplotypes");
  FrequencyErrors out;
  for (std::size_t i = 0; i < truth.size(); ++i) out.per_haplotype.push_back(std::abs(estimated[i] - truth[i]));
  const auto c = static_cast<double>(truth.size());
  out.mee = std::accumulate(out.per_haplotype.begin(), out.per_haplotype.end(), 0.0) / c;
  if (truth.size() >= 2) {
    double ss = 0.0;
    for (double e : out.per_haplotype) ss += (e - out.mee) * (e - out.mee);
    out.s_hat = std::sqrt(ss / (c - 1.0));
  }
  return out;
}

std::size_t n50(std::vector<std::size_t> lengths) {
  std::sort(lengths.begin(), lengths.end(), std::greater<>());
  const std::size_t total = std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
  std::size_t acc = 0;
  for (std::size_t len : lengths) {
    acc += len;
    if (2 * acc >= total) return len;
  }
  return 0;
}

std::optional<Alignment> align_contig(std::string_view contig, const std::vector<std::string>& refs) {
  const SeedIndex index(refs);
  return align_with(index, contig);
}

Metrics evaluate_assembly(const std::vector<EvalContig>& contigs, const std::vector<EvalTruth>& truth) {
  Metrics m;
  for (const auto& t : truth) {
    HaplotypeReport h;
    h.id = t.id;
    h.true_freq = 100.0 * t.freq;
    m.haplotypes.push_back(h);
  }
  if (contigs.empty()) {
    m.empty = true;
    return m;
  }
  std::vector<std::string> refs;
  for (const auto& t : truth) refs.push_back(t.seq);
  const SeedIndex index(refs);

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> covered(truth.size());
  std::size_t edits = 0;
  std::size_t columns = 0;
  std::vector<std::size_t> lengths;
  for (std::size_t c = 0; c < contigs.size(); ++c) {
    lengths.push_back(contigs[c].seq.size());
    auto a = align_with(index, contigs[c].seq);
    m.placements.push_back(a);
    if (!a) {
      ++m.unaligned;
      continue;
    }
    covered[a->ref].emplace_back(a->ref_begin, a->ref_end);
    edits += a->edits();
    columns += a->columns;
    m.misassemblies += a->split ? 1 : 0;
    auto& h = m.haplotypes[a->ref];
    if (!h.longest_contig || contigs[c].seq.size() > contigs[*h.longest_contig].seq.size()) {
      h.longest_contig = c;
      h.identity = a->identity();
      h.est_freq = 100.0 * contigs[c].freq;
    }
  }
  m.n50 = n50(lengths);
  m.error_rate = columns == 0 ? 0.0 : 100.0 * static_cast<double>(edits) / static_cast<double>(columns);

  std::size_t total = 0;
  std::size_t hit = 0;
  for (std::size_t r = 0; r < truth.size(); ++r) {
    auto& iv = covered[r];
    std::sort(iv.begin(), iv.end());
    std::size_t cov = 0;
    std::size_t reach = 0;
    for (const auto& [b, e] : iv) {
      const std::size_t from = std::max(b, reach);
      if (e > from) cov += e - from;
      reach = std::max(reach, e);
    }
    const std::size_t len = truth[r].seq.size();
    m.haplotypes[r].covered = len == 0 ? 0.0 : static_cast<double>(cov) / static_cast<double>(len);
    total += len;
    hit += cov;
  }
  m.genome_fraction = total == 0 ? 0.0 : 100.0 * static_cast<double>(hit) / static_cast<double>(total);

  const double mean_len = truth.empty() ? 0.0 : static_cast<double>(total) / static_cast<double>(truth.size());
  if (!truth.empty() && static_cast<double>(m.n50) > 0.75 * mean_len) {
    std::vector<double> est;
    std::vector<double> tru;
    for (const auto& h : m.haplotypes) {
      est.push_back(h.est_freq);
      tru.push_back(h.true_freq);
    }
    const FrequencyErrors fe = frequency_errors(est, tru);
    m.mee = fe.mee;
    m.s_hat = fe.s_hat;
  }
  return m;
}

std::optional<double> header_freq(std::string_view header) {
  const auto pos = header.find("freq=");
  if (pos == std::string_view::npos) return std::nullopt;
  const char* first = header.data() + pos + 5;
  const char* last = header.data() + header.size();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr == first) return std::nullopt;
  return v;
}

}  // namespace quasiflow
