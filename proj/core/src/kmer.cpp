#include "quasiflow/kmer.hpp"

#include <algorithm>
#include <stdexcept>

namespace quasiflow {

std::uint8_t base_code(char c) noexcept {
  switch (c) {
    case 'A': case 'a': return 0;
    case 'C': case 'c': return 1;
    case 'G': case 'g': return 2;
    case 'T': case 't': return 3;
    default: return kInvalidBase;
  }
}

char code_base(std::uint8_t code) noexcept {
  static constexpr char kBases[] = {'A', 'C', 'G', 'T'};
  return code < 4 ? kBases[code] : 'N';
}

char complement(char c) noexcept {
  switch (c) {
    case 'A': return 'T';
    case 'C': return 'G';
    case 'G': return 'C';
    case 'T': return 'A';
    case 'a': return 't';
    case 'c': return 'g';
    case 'g': return 'c';
    case 't': return 'a';
    default: return 'N';
  }
}

std::string reverse_complement(std::string_view seq) {
  std::string out(seq.size(), 'N');
  std::transform(seq.rbegin(), seq.rend(), out.begin(), complement);
  return out;
}

Kmer::Kmer(std::string_view seq) {
  if (seq.empty() || seq.size() > static_cast<std::size_t>(kMaxK)) {
    throw std::invalid_argument("k-mer length must be in [1, 127]");
  }
  k_ = static_cast<std::uint8_t>(seq.size());
  for (int i = 0; i < k_; ++i) {
    const std::uint8_t c = base_code(seq[i]);
    if (c == kInvalidBase) throw std::invalid_argument("k-mer contains a non-ACGT base");
    set_code(i, c);
  }
}

void Kmer::set_code(int i, std::uint8_t code) noexcept {
  const int shift = 62 - 2 * (i & 31);
  auto& w = words_[i >> 5];
  w = (w & ~(std::uint64_t{3} << shift)) | (std::uint64_t{code} << shift);
}

std::string Kmer::str() const {
  std::string s(k_, 'N');
  for (int i = 0; i < k_; ++i) s[i] = base(i);
  return s;
}

Kmer Kmer::reverse_complement() const {
  Kmer out;
  out.k_ = k_;
  for (int i = 0; i < k_; ++i) out.set_code(k_ - 1 - i, static_cast<std::uint8_t>(3 - code(i)));
  return out;
}

Kmer Kmer::shifted_left(std::uint8_t c) const {
  Kmer out = *this;
  for (int w = 0; w < 4; ++w) {
    out.words_[w] <<= 2;
    if (w + 1 < 4) out.words_[w] |= words_[w + 1] >> 62;
  }
  out.set_code(k_ - 1, c);
  return out;
}

Kmer Kmer::shifted_right(std::uint8_t c) const {
  Kmer out = *this;
  for (int w = 3; w >= 0; --w) {
    out.words_[w] >>= 2;
    if (w > 0) out.words_[w] |= words_[w - 1] << 62;
  }
  // The old last base now sits at position k; positions up to 127 always exist.
  out.words_[k_ >> 5] &= ~(std::uint64_t{3} << (62 - 2 * (k_ & 31)));
  out.set_code(0, c);
  return out;
}

std::size_t Kmer::hash() const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ k_;
  for (std::uint64_t w : words_) {
    std::uint64_t z = w + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    h ^= z ^ (z >> 31);
  }
  return static_cast<std::size_t>(h);
}

CanonicalKmer canonicalize(const Kmer& kmer) {
  Kmer rc = kmer.reverse_complement();
  if (rc < kmer) return {rc, true};
  return {kmer, false};
}

CanonicalKmer canonicalize(std::string_view seq, int k) {
  if (static_cast<int>(seq.size()) != k) throw std::invalid_argument("k-mer has the wrong length");
  if (seq.find_first_of("Nn") != std::string_view::npos) throw std::invalid_argument("k-mer contains N");
  return canonicalize(Kmer(seq));
}

void for_each_kmer(std::string_view seq, int k, const std::function<void(std::size_t, const Kmer&)>& fn) {
  if (k <= 0 || seq.size() < static_cast<std::size_t>(k)) return;
  Kmer cur;
  int valid = 0;  // length of the current N-free run, capped at k
  std::string init(static_cast<std::size_t>(k), 'A');
  cur = Kmer(init);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const std::uint8_t c = base_code(seq[i]);
    if (c == kInvalidBase) {
      valid = 0;
      continue;
    }
    cur = cur.shifted_left(c);
    if (valid < k) ++valid;
    if (valid == k) fn(i + 1 - static_cast<std::size_t>(k), cur);
  }
}

}  // namespace quasiflow
