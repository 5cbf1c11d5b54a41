#include <filesystem>
#include <fstream>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "quasiflow/kmer.hpp"
#include "quasiflow/seqio.hpp"
#include "quasiflow/simulate.hpp"

namespace fs = std::filesystem;
using namespace quasiflow;

namespace {

class TempDir : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("quasiflow_seqio_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

std::string fastq(int n, const std::string& suffix) {
  std::string s;
  for (int i = 0; i < n; ++i) {
    s += "@r" + std::to_string(i) + suffix + "\nACGTACGTAC\n+\nIIIIIIIIII\n";
  }
  return s;
}

}  // namespace

TEST(Kmer, CanonicalizePalindrome) {
  const auto c = canonicalize("ACGT", 4);
  EXPECT_EQ(c.kmer.str(), "ACGT");
  EXPECT_FALSE(c.reversed);
}

TEST(Kmer, CanonicalizeTakesReverseComplement) {
  const auto c = canonicalize("TTTT", 4);
  EXPECT_EQ(c.kmer.str(), "AAAA");
  EXPECT_TRUE(c.reversed);
}

TEST(Kmer, CanonicalIsLexicographicMinimumOfBothStrands) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 1000; ++i) {
    const std::string s = fixture::random_dna(rng, 21);
    const std::string rc = reverse_complement(s);
    const auto c = canonicalize(s, 21);
    EXPECT_EQ(c.kmer.str(), std::min(s, rc));
    EXPECT_EQ(canonicalize(rc, 21).kmer, c.kmer);
    EXPECT_EQ(c.reversed, rc < s);
  }
}

TEST(Kmer, RejectsN) { EXPECT_THROW(canonicalize("ACNT", 4), std::invalid_argument); }

TEST(Kmer, ShiftsMatchStringOps) {
  const Kmer k("ACGTTGCA");
  EXPECT_EQ(k.shifted_left(base_code('G')).str(), "CGTTGCAG");
  EXPECT_EQ(k.shifted_right(base_code('T')).str(), "TACGTTGC");
  EXPECT_EQ(k.reverse_complement().str(), reverse_complement("ACGTTGCA"));
}

TEST(Kmer, LongKmersRoundTrip) {
  std::mt19937_64 rng(11);
  const std::string s = fixture::random_dna(rng, Kmer::kMaxK);
  EXPECT_EQ(Kmer(s).str(), s);
  EXPECT_EQ(Kmer(s).reverse_complement().str(), reverse_complement(s));
}

TEST_F(TempDir, LoadsSinglePair) {
  const auto l = write("l.fq", fastq(1, "/1"));
  const auto r = write("r.fq", fastq(1, "/2"));
  const ReadSet reads = load_paired_reads(l, r, 300, 30);
  ASSERT_EQ(reads.pairs.size(), 1U);
  EXPECT_EQ(reads.pairs[0].id, "r0");
  EXPECT_EQ(reads.pairs[0].left, "ACGTACGTAC");
  EXPECT_EQ(reads.insert_size, 300);
  EXPECT_EQ(reads.delta, 30);
}

TEST_F(TempDir, PairCountMismatch) {
  const auto l = write("l.fq", fastq(10, "/1"));
  const auto r = write("r.fq", fastq(9, "/2"));
  try {
    load_paired_reads(l, r, 300, 30);
    FAIL() << "expected an error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("pair count mismatch"), std::string::npos);
  }
}

TEST_F(TempDir, DropsInvalidMateWithItsPartner) {
  const auto l = write("l.fa", ">a\nACGT\n>b\nACXT\n");
  const auto r = write("r.fa", ">a\nTTTT\n>b\nGGGG\n");
  const ReadSet reads = load_paired_reads(l, r, 50, 5);
  EXPECT_EQ(reads.pairs.size(), 1U);
  EXPECT_EQ(reads.dropped, 1U);
}

TEST_F(TempDir, MalformedFastqThrows) {
  const auto p = write("bad.fq", "@r\nACGT\nACGT\n");
  EXPECT_THROW(read_fastx(p), std::runtime_error);
}

TEST_F(TempDir, FastaDescriptionAndWrapping) {
  const auto p = dir_ / "x.fa";
  write_fasta(p, {{"c1", std::string(25, 'A'), {}, "freq=0.25"}}, 10);
  const auto records = read_fastx(p);
  ASSERT_EQ(records.size(), 1U);
  EXPECT_EQ(records[0].id, "c1");
  EXPECT_EQ(records[0].description, "freq=0.25");
  EXPECT_EQ(records[0].seq, std::string(25, 'A'));
}

TEST_F(TempDir, SimulatedReadsRoundTrip) {
  const auto sample = simulate_sample(800, 2, 0.02, {0.4, 0.6}, 9);
  ReadSimOptions o;
  o.coverage = 20;
  o.read_len = 80;
  o.insert_size = 250;
  o.delta = 20;
  o.error_rate = 0.01;
  const ReadSet reads = simulate_reads(sample, o);
  ASSERT_FALSE(reads.pairs.empty());
  write_paired_reads(dir_ / "r1.fq", dir_ / "r2.fq", reads);
  const ReadSet back = load_paired_reads(dir_ / "r1.fq", dir_ / "r2.fq", reads.insert_size, reads.delta);
  EXPECT_EQ(back.pairs, reads.pairs);
  EXPECT_EQ(back.dropped, 0U);
}

TEST(ReadSetValidate, InsertMustExceedReadLength) {
  ReadSet reads;
  reads.pairs.push_back({"ACGTACGT", "ACGTACGT", "p"});
  reads.insert_size = 8;
  EXPECT_THROW(reads.validate(), std::invalid_argument);
  reads.insert_size = 9;
  EXPECT_NO_THROW(reads.validate());
}
