#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace quasiflow {

// 2-bit base codes: A=0, C=1, G=2, T=3. Anything else maps to kInvalidBase.
inline constexpr std::uint8_t kInvalidBase = 4;

std::uint8_t base_code(char c) noexcept;
char code_base(std::uint8_t code) noexcept;
char complement(char c) noexcept;
std::string reverse_complement(std::string_view seq);

// Fixed-capacity packed k-mer. Bases are stored most-significant first so that
// word-wise comparison equals lexicographic comparison of the sequence.
class Kmer {
 public:
  static constexpr int kMaxK = 127;

  Kmer() = default;
  // Throws std::invalid_argument on length outside [1, kMaxK] or a non-ACGT base.
  explicit Kmer(std::string_view seq);

  int k() const noexcept { return k_; }
  std::uint8_t code(int i) const noexcept {
    return static_cast<std::uint8_t>((words_[i >> 5] >> (62 - 2 * (i & 31))) & 3U);
  }
  char base(int i) const noexcept { return code_base(code(i)); }
  std::string str() const;

  Kmer reverse_complement() const;
  // Drop the first base and append `code` at the end.
  Kmer shifted_left(std::uint8_t code) const;
  // Prepend `code` and drop the last base.
  Kmer shifted_right(std::uint8_t code) const;

  std::size_t hash() const noexcept;

  friend bool operator==(const Kmer&, const Kmer&) = default;
  friend std::strong_ordering operator<=>(const Kmer& a, const Kmer& b) {
    if (auto c = a.k_ <=> b.k_; c != 0) return c;
    return a.words_ <=> b.words_;
  }

 private:
  void set_code(int i, std::uint8_t code) noexcept;

  std::array<std::uint64_t, 4> words_{};
  std::uint8_t k_ = 0;
};

struct KmerHash {
  std::size_t operator()(const Kmer& kmer) const noexcept { return kmer.hash(); }
};

struct CanonicalKmer {
  Kmer kmer;
  bool reversed = false;  // true when the input was the reverse complement of `kmer`
};

CanonicalKmer canonicalize(const Kmer& kmer);
// Throws std::invalid_argument when |seq| != k or seq contains N.
CanonicalKmer canonicalize(std::string_view seq, int k);

// Calls fn(position, kmer) for every N-free window of length k.
void for_each_kmer(std::string_view seq, int k, const std::function<void(std::size_t, const Kmer&)>& fn);

}  // namespace quasiflow
