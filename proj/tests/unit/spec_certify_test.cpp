#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "shiftlab/spec_certify.hpp"

using namespace shiftlab;

namespace {
const Params kP24(2, 4);
const auto kSquares = RestrictionFamily::squares();
const auto kPrefix = RestrictionFamily::prefix();
}  // namespace

TEST(GapIndex, SmallValues) {
  EXPECT_EQ(gap_index(kSquares, 1), 2);
  EXPECT_EQ(gap_index(kSquares, 2), 3);
  EXPECT_EQ(gap_index(kSquares, 3), 7);
  EXPECT_EQ(gap_index(kPrefix, 1), 2);
  EXPECT_EQ(gap_index(kPrefix, 2), 3);
  EXPECT_EQ(gap_index(kPrefix, 3), 5);
  EXPECT_EQ(gap_index(kPrefix, 5), 7);
}

TEST(GapIndex, MatchesRunScanDefinition) {
  for (const char* name : {"squares", "prefix"}) {
    const auto fam = builtin_family(name);
    const auto all = gap_indices(fam, 40, 2000);
    for (std::int64_t k = 1; k <= 40; ++k) ASSERT_EQ(all[static_cast<std::size_t>(k)], oracle::gap_index_scan(name, k)) << name << k;
  }
}

TEST(GapIndex, EvenSquaresIndexExceedsSquare) {
  for (std::int64_t k = 1; k <= 30; ++k) {
    const auto n = gap_index(kSquares, 2 * k);
    ASSERT_TRUE(n.has_value());
    EXPECT_GT(*n, k * k) << k;
  }
}

TEST(GapIndex, BoundTooSmallGivesNothing) {
  EXPECT_FALSE(gap_index(kSquares, 3, 6).has_value());
  EXPECT_EQ(gap_index(kSquares, 3, 7), 7);
  EXPECT_THROW(gap_index(kSquares, 0), usage_error);
}

TEST(GapIndex, CustomTableStopsAtHorizon) {
  const auto fam = RestrictionFamily::custom(5, {{1, 1}});
  EXPECT_EQ(gap_index(fam, 4), 5);
  EXPECT_FALSE(gap_index(fam, 5).has_value());
}

// Deficiency m - max R_m rises by at most one per step, so N_k - max R_{N_k} = k.
TEST(GapIndex, DeficiencyStep) {
  for (const auto* fam : {&kSquares, &kPrefix}) {
    for (std::int64_t m = 1; m < 5000; ++m)
      ASSERT_LE((m + 1 - fam->max_special(m + 1)) - (m - fam->max_special(m)), 1) << m;
    const auto all = gap_indices(*fam, 60, 10'000);
    for (std::int64_t k = 1; k <= 60; ++k) {
      const auto nk = *all[static_cast<std::size_t>(k)];
      ASSERT_EQ(nk - fam->max_special(nk), k);
    }
  }
}

TEST(WeakSpecReport, PrefixRatiosNearOne) {
  const auto rep = weak_spec_report(kPrefix, 100);
  ASSERT_EQ(rep.rows.size(), 100u);
  EXPECT_EQ(rep.rows.front().ratio, Rational(1, 2));
  for (const auto& row : rep.rows)
    if (row.k >= 82) { EXPECT_GE(row.ratio, Rational(9, 10)) << row.k; }
  EXPECT_EQ(rep.trend, "ratio k/N_k rising over the sampled range");
}

TEST(WeakSpecReport, SquaresRatiosCollapse) {
  const auto rep = weak_spec_report(kSquares, 60);
  ASSERT_EQ(rep.rows.size(), 60u);
  EXPECT_EQ(rep.rows.front().ratio, Rational(1, 2));
  EXPECT_LE(rep.rows.back().ratio, Rational(60, 901));
  EXPECT_LT(rep.rows.back().ratio, Rational(7, 100));
  EXPECT_EQ(rep.trend, "ratio k/N_k falling over the sampled range");
}

TEST(WeakSpecReport, IncompleteWhenBoundIsShort) {
  const auto rep = weak_spec_report(kSquares, 10, 20);
  EXPECT_LT(rep.rows.size(), 10u);
  EXPECT_NE(rep.trend.find("incomplete"), std::string::npos);
}

TEST(Theta, Values) {
  EXPECT_EQ(theta(kSquares, 1), 1);
  EXPECT_EQ(theta(kSquares, 3), 2);
  EXPECT_EQ(theta(kSquares, 10), 4);
  EXPECT_THROW(theta(kSquares, 0), usage_error);
}

TEST(Theta, SublinearBudget) {
  for (const auto* fam : {&kSquares, &kPrefix})
    for (std::int64_t n = 1; n <= 10'000; ++n)
      ASSERT_LE(theta(*fam, n), isqrt(n - 1) + 1) << n;
  EXPECT_LT(static_cast<double>(theta(kSquares, 10'000)) / 10'000, 0.011);
}

TEST(AlmostGlue, TwoMonochromaticSegments) {
  const std::vector<Word> segs{parse_word("1:1 1:1 1:1"), parse_word("2:1 2:1 2:1")};
  const auto res = almost_glue(kP24, kSquares, segs);
  EXPECT_EQ(format_word(res.output), "1:1 1:1 1:1 O 2:0 2:1");
  EXPECT_EQ(res.mistakes, (std::vector<std::int64_t>{0, 2}));
  EXPECT_LE(res.mistakes[1], theta(kSquares, 3));
  EXPECT_TRUE(is_allowed(kP24, kSquares, res.output));
}

TEST(AlmostGlue, SingleSegmentUnchanged) {
  const std::vector<Word> segs{parse_word("1:2 O 2:0")};
  const auto res = almost_glue(kP24, kSquares, segs);
  EXPECT_EQ(res.output, segs[0]);
  EXPECT_EQ(res.mistakes, std::vector<std::int64_t>{0});
}

TEST(AlmostGlue, SegmentStartingWithMarker) {
  const std::vector<Word> segs{parse_word("2:3"), parse_word("O 1:0 1:2")};
  const auto res = almost_glue(kP24, kSquares, segs);
  EXPECT_EQ(res.mistakes[1], 0);
  EXPECT_TRUE(is_allowed(kP24, kSquares, res.output));
}

TEST(AlmostGlue, RejectsBadSegments) {
  const std::vector<Word> bad{parse_word("1:1 2:1")};
  EXPECT_THROW(almost_glue(kP24, kSquares, bad), usage_error);
  const std::vector<Word> empty{Word{}};
  EXPECT_THROW(almost_glue(kP24, kSquares, empty), usage_error);
}

TEST(AlmostGlue, RandomSegmentsStayAllowed) {
  std::mt19937_64 rng(11);
  for (const auto* fam : {&kSquares, &kPrefix}) {
    for (int trial = 0; trial < 2000; ++trial) {
      std::vector<Word> segs;
      const int k = 1 + static_cast<int>(rng() % 4);
      for (int i = 0; i < k; ++i) segs.push_back(oracle::random_allowed(kP24, *fam, 1 + rng() % 12, rng));
      const auto res = almost_glue(kP24, *fam, segs);
      ASSERT_TRUE(is_allowed(kP24, *fam, res.output));
      for (int i = 0; i < k; ++i) ASSERT_LE(res.mistakes[static_cast<std::size_t>(i)], theta(*fam, static_cast<std::int64_t>(segs[static_cast<std::size_t>(i)].size())));
    }
  }
}

TEST(WeakTransition, PrefixExamples) {
  EXPECT_EQ(weak_transition_length(kPrefix, 0), 1);
  EXPECT_EQ(weak_transition_length(kPrefix, 1), 2);
  EXPECT_EQ(weak_transition_length(kPrefix, 2), 2);
  EXPECT_EQ(weak_transition_length(kPrefix, 3), 3);
}

TEST(WeakTransition, PrefixIsSublinear) {
  // N_j - j = max R_{N_j} = ⌊√N_j⌋ and N_j <= 2j, so t(n) <= 1 + √(2n).
  for (std::int64_t n = 1; n <= 2000; ++n) {
    const auto t = weak_transition_length(kPrefix, n);
    ASSERT_LE((t - 1) * (t - 1), 2 * n) << n;
  }
  // Along powers of two the ratio t(n)/n decreases strictly.
  double last = 10.0;
  for (std::int64_t n = 4; n <= 4096; n *= 2) {
    const double ratio = static_cast<double>(weak_transition_length(kPrefix, n)) / static_cast<double>(n);
    EXPECT_LT(ratio, last) << n;
    last = ratio;
  }
}

TEST(WeakTransition, SquaresOutgrowsLength) {
  int above = 0;
  for (std::int64_t n = 8; n <= 256; n *= 2) above += weak_transition_length(kSquares, n) > n;
  EXPECT_EQ(above, 6);
}

TEST(WeakGlue, PrefixExample) {
  const auto res = weak_glue(kP24, kPrefix, parse_word("O"), parse_word("1:1 1:1"));
  EXPECT_EQ(res.transitions.back(), 2);
  EXPECT_EQ(format_word(res.output), "O O 1:0 1:1 1:1");
  EXPECT_TRUE(is_allowed(kP24, kPrefix, res.output));
}

TEST(WeakGlue, GoodTailUsesMarkers) {
  const auto res = weak_glue(kP24, kPrefix, parse_word("2:1"), parse_word("O 1:0"));
  EXPECT_EQ(format_word(res.output), "2:1 O O O 1:0");
}

TEST(WeakGlue, EmptyWords) {
  const auto res = weak_glue(kP24, kPrefix, Word{}, Word{});
  EXPECT_EQ(format_word(res.output), "O");
}

TEST(WeakGlue, ManyWords) {
  const std::vector<Word> words{parse_word("1:3"), parse_word("2:1 2:2"), parse_word("1:1 1:1 1:1")};
  const auto res = weak_glue_all(kP24, kPrefix, words);
  EXPECT_TRUE(is_allowed(kP24, kPrefix, res.output));
  EXPECT_EQ(res.transitions, (std::vector<std::int64_t>{0, 2, 3}));
}
