#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "quasiflow/kmer.hpp"
#include "quasiflow/pairing.hpp"

using namespace quasiflow;

namespace {

ReadSet pairs_from(const AssemblyGraph& ag, UnitigId a, UnitigId b, std::size_t n, std::size_t len) {
  ReadSet reads;
  reads.insert_size = 1000;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string left = ag.unitigs[a].seq.substr(i, len);
    const std::string right = reverse_complement(ag.unitigs[b].seq.substr(i, len));
    reads.pairs.push_back({left, right, "p" + std::to_string(i)});
  }
  return reads;
}

}  // namespace

TEST(Pairing, PairInsideTwoUnitigs) {
  const auto ag = fixture::make_ag(11, {60, 60, 60}, {});
  const ReadSet reads = pairs_from(ag, 0, 2, 3, 30);
  const PairedInfo info = associate_paired_unitigs(reads, ag);
  EXPECT_TRUE(info.contains(0, 2));
  EXPECT_FALSE(info.contains(2, 0));
  EXPECT_FALSE(info.contains(0, 1));
  // 3 pairs x (30 - 11 + 1) aligned windows.
  EXPECT_EQ(info.forward[0].at(2), 3U * 20U);
  EXPECT_EQ(info.reverse[2], std::set<UnitigId>{0});
}

TEST(Pairing, MinSupportFilters) {
  const auto ag = fixture::make_ag(11, {60, 60}, {});
  ReadSet reads = pairs_from(ag, 0, 1, 1, 12);  // two windows per pair
  PairingOptions o;
  o.min_support = 3;
  EXPECT_FALSE(associate_paired_unitigs(reads, ag, o).contains(0, 1));
  o.min_support = 2;
  EXPECT_TRUE(associate_paired_unitigs(reads, ag, o).contains(0, 1));
}

TEST(Pairing, SelfLinksNotRecorded) {
  const auto ag = fixture::make_ag(11, {80}, {});
  ReadSet reads;
  reads.insert_size = 1000;
  reads.pairs.push_back({ag.unitigs[0].seq.substr(0, 30), reverse_complement(ag.unitigs[0].seq.substr(40, 30)), "p"});
  EXPECT_EQ(associate_paired_unitigs(reads, ag).link_count(), 0U);
}

TEST(Pairing, ThreadCountInvariant) {
  const auto ag = fixture::make_ag(11, {80, 80, 80, 80}, {});
  ReadSet reads;
  reads.insert_size = 1000;
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<UnitigId> unitig(0, 3);
  std::uniform_int_distribution<std::size_t> off(0, 50);
  for (int i = 0; i < 200; ++i) {
    const UnitigId a = unitig(rng);
    const UnitigId b = unitig(rng);
    reads.pairs.push_back({ag.unitigs[a].seq.substr(off(rng), 30), reverse_complement(ag.unitigs[b].seq.substr(off(rng), 30)),
                           std::to_string(i)});
  }
  PairingOptions one;
  PairingOptions four;
  four.threads = 4;
  EXPECT_EQ(associate_paired_unitigs(reads, ag, one).forward, associate_paired_unitigs(reads, ag, four).forward);
}

TEST(PairedWithIndex, SingleLink) {
  PairedInfo info;
  info.forward.resize(2);
  info.forward[0][1] = 4;
  build_paired_with_index(info);
  EXPECT_EQ(info.reverse[1], std::set<UnitigId>{0});
  EXPECT_TRUE(info.reverse[0].empty());
}

TEST(PairedWithIndex, Empty) {
  PairedInfo info;
  build_paired_with_index(info);
  EXPECT_TRUE(info.reverse.empty());
}

TEST(PairedWithIndex, RoundTripsRandomMaps) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    PairedInfo info;
    info.forward.resize(20);
    std::uniform_int_distribution<UnitigId> u(0, 19);
    for (int i = 0; i < 60; ++i) info.forward[u(rng)][u(rng)] = 1;
    build_paired_with_index(info);
    std::vector<std::set<UnitigId>> back(20);
    for (UnitigId v = 0; v < info.reverse.size(); ++v) {
      for (UnitigId w : info.reverse[v]) back[w].insert(v);
    }
    for (UnitigId w = 0; w < 20; ++w) EXPECT_EQ(back[w], info.paired(w));
  }
}
