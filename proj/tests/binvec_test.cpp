#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "lexforge/binvec.hpp"
#include "lexforge/error.hpp"
#include "lexforge/synth.hpp"

namespace lexforge {
namespace {

BinaryVector bits(std::size_t len, std::initializer_list<std::size_t> on, std::string word = "w") {
  BinaryVector v(std::move(word), len);
  for (auto k : on) v.set(k);
  return v;
}

// Direct formula evaluation from counts.
double mi_formula(double o, double a, double b, double len) { return std::log2((o / len) / ((a / len) * (b / len))); }
double t_formula(double o, double a, double b, double len) {
  return (o / len - (a / len) * (b / len)) / std::sqrt((o / len) / len);
}

TEST(BinaryVector, SingleOccurrence) {
  Segmentation seg({9, 19, 29}, {9, 19, 29}, 40, 40);
  auto v = binary_vector({"w", {3}}, seg, Side::kSource);
  EXPECT_EQ(v.length(), 4u);
  EXPECT_EQ(v.set_bits(), (std::vector<std::size_t>{0}));
}

TEST(BinaryVector, RepeatsInOneSegmentSetOneBit) {
  Segmentation seg({9, 19, 29}, {9, 19, 29}, 40, 40);
  auto v = binary_vector({"w", {11, 15}}, seg, Side::kTarget);
  EXPECT_EQ(v.ones(), 1u);
}

TEST(BinaryVector, ProsperitySegments) {
  std::vector<Offset> cuts;
  for (Offset k = 0; k + 1 < 388; ++k) cuts.push_back(100 * k + 99);
  Segmentation seg(cuts, cuts, 38800, 38800);
  const std::vector<std::size_t> want{20, 27, 41, 47, 193, 321, 360};
  PositionVector p{"prosperity", {}};
  for (auto s : want) p.positions.push_back(100 * s + 37);
  auto v = binary_vector(p, seg, Side::kSource);
  EXPECT_EQ(v.length(), 388u);
  EXPECT_EQ(v.set_bits(), want);
}

TEST(BinaryVector, OutsideTheText) {
  Segmentation seg({9}, {9}, 20, 20);
  EXPECT_THROW(binary_vector({"w", {25}}, seg, Side::kSource), InvariantViolation);
}

TEST(MutualInfo, IdenticalEightBits) {
  auto a = bits(388, {1, 5, 9, 100, 200, 250, 300, 387});
  EXPECT_NEAR(mutual_info(a, a), 5.600, 0.001);
  EXPECT_NEAR(mutual_info(a, a), std::log2(388.0 / 8.0), 1e-12);
  EXPECT_NEAR(t_score(a, a), 2.771, 0.001);
}

TEST(MutualInfo, Disjoint) {
  auto a = bits(388, {1, 2, 3}), b = bits(388, {4, 5});
  EXPECT_TRUE(std::isinf(mutual_info(a, b)));
  EXPECT_LT(mutual_info(a, b), 0);
  EXPECT_THROW(t_score(a, b), UndefinedScore);
}

TEST(MutualInfo, ProsperityPair) {
  auto en = bits(388, {20, 27, 41, 47, 193, 321, 360});
  auto zh = bits(388, {20, 27, 41, 47, 193, 200, 201, 202});
  ASSERT_EQ(en.overlap(zh), 5u);
  EXPECT_NEAR(mutual_info(en, zh), 5.1145, 0.001);
  EXPECT_NEAR(t_score(en, zh), 2.171, 0.001);
}

TEST(MutualInfo, LengthMismatch) {
  EXPECT_THROW(mutual_info(bits(10, {1}), bits(11, {1})), DimensionMismatch);
  EXPECT_THROW(t_score(bits(10, {1}), bits(11, {1})), DimensionMismatch);
}

TEST(MutualInfo, RandomAgainstFormula) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t len = 10 + rng() % 1000;
    BinaryVector a("a", len), b("b", len);
    for (int k = 0; k < 1 + static_cast<int>(rng() % 12); ++k) a.set(rng() % len);
    for (int k = 0; k < 1 + static_cast<int>(rng() % 12); ++k) b.set(rng() % len);
    std::size_t o = 0;
    for (std::size_t k = 0; k < len; ++k) o += a.test(k) && b.test(k);
    EXPECT_EQ(a.overlap(b), o);
    if (o == 0) continue;
    const double m = mi_formula(double(o), double(a.ones()), double(b.ones()), double(len));
    EXPECT_NEAR(mutual_info(a, b), m, 1e-9);
    EXPECT_NEAR(t_score(a, b), t_formula(double(o), double(a.ones()), double(b.ones()), double(len)), 1e-9);
    // Symmetry, permutation invariance, upper bound.
    EXPECT_DOUBLE_EQ(mutual_info(a, b), mutual_info(b, a));
    std::vector<std::size_t> perm(len);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_NEAR(mutual_info(a.permuted(perm), b.permuted(perm)), mutual_info(a, b), 1e-12);
    EXPECT_LE(mutual_info(a, b), std::log2(double(len) / double(std::max(a.ones(), b.ones()))) + 1e-12);
  }
}

TEST(MutualInfo, GrowsWithOverlap) {
  for (std::size_t o = 1; o < 8; ++o) {
    BinaryVector a("a", 200), b("b", 200), c("c", 200);
    for (std::size_t k = 0; k < 8; ++k) a.set(k);
    for (std::size_t k = 0; k < 8; ++k) {
      b.set(k < o ? k : 100 + k);
      c.set(k < o + 1 ? k : 100 + k);
    }
    EXPECT_LT(mutual_info(a, b), mutual_info(a, c));
  }
}

TEST(SelectSecondary, PlantedBeatsDistractors) {
  BinaryMap src{{"w", bits(100, {3, 30, 60, 90}, "w")}};
  BinaryMap tgt{{"hit", bits(100, {3, 30, 60, 90}, "hit")},
                {"miss", bits(100, {10, 20, 40, 50}, "miss")},
                {"part", bits(100, {3, 31, 61, 91}, "part")}};
  auto lex = select_secondary(src, tgt, {});
  ASSERT_EQ(lex.size(), 1u);
  EXPECT_EQ(lex[0].stage, Stage::kSecondary);
  ASSERT_EQ(lex[0].candidates.size(), 1u);
  EXPECT_EQ(lex[0].candidates[0].target_word, "hit");
  ASSERT_TRUE(lex[0].candidates[0].t.has_value());
  EXPECT_GT(*lex[0].candidates[0].t, 1.65);
}

TEST(SelectSecondary, NothingPassesGate) {
  BinaryMap src{{"w", bits(4, {0, 1, 2}, "w")}};
  BinaryMap tgt{{"x", bits(4, {0, 1, 2, 3}, "x")}};
  EXPECT_TRUE(select_secondary(src, tgt, {}).empty());
}

TEST(SelectSecondary, ExcludedSourcesNeverEmitted) {
  BinaryMap src{{"w", bits(100, {3, 30, 60}, "w")}, {"v", bits(100, {5, 50, 70}, "v")}};
  BinaryMap tgt{{"x", bits(100, {3, 30, 60}, "x")}, {"y", bits(100, {5, 50, 70}, "y")}};
  auto lex = select_secondary(src, tgt, {}, {"w"});
  ASSERT_EQ(lex.size(), 1u);
  EXPECT_EQ(lex[0].source_word, "v");
}

TEST(SelectSecondary, ThreadCountIrrelevant) {
  std::mt19937_64 rng(21);
  BinaryMap src, tgt;
  for (int w = 0; w < 40; ++w) {
    BinaryVector s("s" + std::to_string(w), 300), t("t" + std::to_string(w), 300);
    for (int k = 0; k < 5; ++k) {
      auto b = rng() % 300;
      s.set(b);
      t.set(rng() % 4 ? b : rng() % 300);
    }
    src.emplace(s.word(), s);
    tgt.emplace(t.word(), t);
  }
  SecondaryConfig one, four;
  four.threads = 4;
  auto a = select_secondary(src, tgt, one), b = select_secondary(src, tgt, four);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].source_word, b[k].source_word);
    ASSERT_EQ(a[k].candidates.size(), b[k].candidates.size());
    for (std::size_t c = 0; c < a[k].candidates.size(); ++c) {
      EXPECT_EQ(a[k].candidates[c].target_word, b[k].candidates[c].target_word);
      if (c > 0) EXPECT_GE(a[k].candidates[c - 1].score, a[k].candidates[c].score);
    }
  }
}

// With cuts taken from the generator's true alignment, the planted
// low-frequency pairs should mostly surface in the top three.
TEST(SelectSecondary, RecoversPlantedLowFrequencyPairs) {
  synth::SynthConfig cfg;
  cfg.seed = 5;
  cfg.low_pairs = 30;
  cfg.high_pairs = 150;
  const auto corpus = synth::generate(cfg);
  std::vector<Offset> sc, tc;
  for (Offset i = 49; i < corpus.source.length(); i += 50) {
    const Offset j = std::min<Offset>(corpus.alignment[i], corpus.target.length() - 1);
    if (!tc.empty() && j < tc.back()) continue;
    sc.push_back(i);
    tc.push_back(j);
  }
  Segmentation seg(sc, tc, corpus.source.length(), corpus.target.length());
  const auto src_pos = noun_positions(corpus.source, TagFilter::penn_nouns());
  const auto tgt_pos = noun_positions(corpus.target, TagFilter::all(), CaseMode::kExact);
  const auto gold = corpus.gold(false);
  std::set<std::string> high;
  for (const auto& [k, v] : corpus.gold(true)) high.insert(k);
  auto lex = select_secondary(binary_vectors(src_pos, seg, Side::kSource, 3, high),
                              binary_vectors(tgt_pos, seg, Side::kTarget, 3), {});
  std::size_t found = 0;
  for (const auto& e : lex) {
    auto g = gold.find(fold_case(e.source_word));
    if (g == gold.end()) continue;
    for (const auto& c : e.candidates) found += g->second.count(c.target_word);
  }
  EXPECT_EQ(gold.size(), 30u);
  EXPECT_GE(found, 24u);
}

}  // namespace
}  // namespace lexforge
