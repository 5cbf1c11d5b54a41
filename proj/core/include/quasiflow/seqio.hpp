#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace quasiflow {

struct ReadPair {
  std::string left;
  std::string right;
  std::string id;  // shared id without the /1 /2 suffix

  friend bool operator==(const ReadPair&, const ReadPair&) = default;
};

struct ReadSet {
  std::vector<ReadPair> pairs;
  int insert_size = 0;  // expected distance between the starts of the two mates
  int delta = 0;        // maximum deviation of that distance
  std::size_t dropped = 0;

  std::size_t max_read_length() const;
  std::size_t min_read_length() const;
  // Throws std::invalid_argument when the documented invariants do not hold.
  void validate() const;
};

struct SeqRecord {
  std::string id;
  std::string seq;
  std::string qual;  // empty for FASTA
  std::string description;  // header text after the id
};

// Reads FASTA or FASTQ (detected from the first record); `.gz` paths are
// decompressed. Throws std::runtime_error on unreadable or malformed input.
std::vector<SeqRecord> read_fastx(const std::filesystem::path& path);

void write_fasta(const std::filesystem::path& path, const std::vector<SeqRecord>& records, std::size_t width = 0);
void write_fastq(const std::filesystem::path& path, const std::vector<SeqRecord>& records);

// Loads mates positionally. Records whose sequence is empty or contains
// characters outside ACGTN are dropped together with their mate.
ReadSet load_paired_reads(const std::filesystem::path& left_path, const std::filesystem::path& right_path,
                          int insert_size, int delta);

// Writes both mates as FASTQ with ids suffixed /1 and /2.
void write_paired_reads(const std::filesystem::path& left_path, const std::filesystem::path& right_path,
                        const ReadSet& reads);

bool is_dna(std::string_view seq) noexcept;

}  // namespace quasiflow
