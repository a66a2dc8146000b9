#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "shiftlab/language.hpp"

using namespace shiftlab;

namespace {

const Params kP24(2, 4);
const auto kSquares = RestrictionFamily::squares();
const auto kPrefix = RestrictionFamily::prefix();

Word w(const char* text) { return parse_word(text); }

}  // namespace

TEST(Classify, ColorStructure) {
  const auto a = classify(kP24, kSquares, w("1:3 1:2"));
  EXPECT_TRUE(a.monochromatic);
  EXPECT_EQ(a.color, 1);
  const auto b = classify(kP24, kSquares, w("1:3 2:1"));
  EXPECT_FALSE(b.monochromatic);
  EXPECT_FALSE(b.color.has_value());
  const auto c = classify(kP24, kSquares, w("O O"));
  EXPECT_TRUE(c.monochromatic);
  EXPECT_EQ(c.color, 0);
}

TEST(IsRestricted, Examples) {
  EXPECT_TRUE(is_restricted(kP24, kSquares, w("1:0 1:3")));
  EXPECT_FALSE(is_restricted(kP24, kSquares, w("1:1")));
  EXPECT_TRUE(is_restricted(kP24, kSquares, Word{}));
  EXPECT_FALSE(is_restricted(kP24, kSquares, w("O")));
  EXPECT_FALSE(is_restricted(kP24, kSquares, w("1:0 2:0")));
}

TEST(IsRestricted, SpecialPositionsDependOnLength) {
  // Length 3: R_3 = {1} for squares, so position 4 is free until the word reaches length 4.
  EXPECT_TRUE(is_restricted(kP24, kSquares, w("1:0 1:1 1:1")));
  EXPECT_FALSE(is_restricted(kP24, kSquares, w("1:0 1:1 1:1 1:1")));
  EXPECT_TRUE(is_restricted(kP24, kSquares, w("1:0 1:1 1:1 1:0")));
  // Prefix family: R_4 = {1, 2}.
  EXPECT_FALSE(is_restricted(kP24, kPrefix, w("1:0 1:1 1:1 1:0")));
  EXPECT_TRUE(is_restricted(kP24, kPrefix, w("1:0 1:0 1:1 1:1")));
}

TEST(IsFree, Examples) {
  EXPECT_TRUE(is_free(kP24, kSquares, w("O")));
  EXPECT_TRUE(is_free(kP24, kSquares, w("O 1:0 1:3")));
  EXPECT_FALSE(is_free(kP24, kSquares, w("1:0 O")));
  EXPECT_FALSE(is_free(kP24, kSquares, Word{}));
}

TEST(IsGood, Examples) {
  EXPECT_TRUE(is_good(kP24, kSquares, w("O O")));
  EXPECT_TRUE(is_good(kP24, kSquares, w("O 1:0 O 2:0")));
  EXPECT_FALSE(is_good(kP24, kSquares, w("1:0 O")));
  EXPECT_TRUE(is_good(kP24, kSquares, Word{}));
}

TEST(IsAllowed, Examples) {
  EXPECT_TRUE(is_allowed(kP24, kSquares, w("1:3 1:2 1:1")));
  EXPECT_TRUE(is_allowed(kP24, kSquares, w("1:2 O 2:0")));
  EXPECT_FALSE(is_allowed(kP24, kSquares, w("1:3 2:1")));
  EXPECT_FALSE(is_allowed(kP24, kSquares, w("1:2 O 2:1")));
}

TEST(IsAllowed, RejectsSymbolsOutsideAlphabet) {
  EXPECT_THROW(is_allowed(kP24, kSquares, Word{Symbol{3, 0}}), usage_error);
  EXPECT_THROW(is_allowed(kP24, kSquares, Word{Symbol{1, 4}}), usage_error);
}

TEST(Enumerate, SmallCounts) {
  EXPECT_EQ(enumerate_allowed(kP24, kSquares, 0).size(), 1u);
  EXPECT_EQ(enumerate_allowed(kP24, kSquares, 1).size(), 9u);
  EXPECT_EQ(enumerate_allowed(kP24, kSquares, 2).size(), 43u);
}

TEST(Enumerate, LexicographicAndDuplicateFree) {
  const auto words = enumerate_allowed(kP24, kPrefix, 4);
  EXPECT_TRUE(std::is_sorted(words.begin(), words.end()));
  EXPECT_EQ(std::set<Word>(words.begin(), words.end()).size(), words.size());
}

TEST(Enumerate, CapIsEnforced) {
  EnumerationLimits lim;
  lim.cap = 3;
  EXPECT_THROW(enumerate_allowed(kP24, kSquares, 4, lim), resource_error);
  EXPECT_THROW(enumerate_allowed(kP24, kSquares, -1), usage_error);
}

// Pruned DFS must agree with filtering the full product through the definitions.
TEST(Enumerate, MatchesFullProductFilter) {
  for (const char* name : {"squares", "prefix"}) {
    const auto fam = builtin_family(name);
    for (int n = 0; n <= 5; ++n) {
      std::set<Word> expected;
      oracle::for_each_word(kP24, n, [&](const Word& x) {
        if (oracle::allowed_word(name, x)) expected.insert(x);
      });
      const auto got = enumerate_allowed(kP24, fam, n);
      ASSERT_EQ(std::set<Word>(got.begin(), got.end()), expected) << name << " n=" << n;
    }
  }
}

TEST(Enumerate, ShardedCountMatchesSerial) {
  const auto serial = enumerate_allowed(kP24, kSquares, 5).size();
  for (unsigned threads : {1u, 2u, 3u, 8u}) EXPECT_EQ(count_allowed_enumerated(kP24, kSquares, 5, {}, threads), serial) << threads;
}

TEST(Predicates, AgreeWithDefinitionOracle) {
  for (const char* name : {"squares", "prefix"}) {
    const auto fam = builtin_family(name);
    for (int n = 0; n <= 5; ++n) {
      oracle::for_each_word(Params(2, 2), n, [&](const Word& x) {
        const auto c = classify(Params(2, 2), fam, x);
        ASSERT_EQ(c.restricted, oracle::restricted(name, x, 0, x.size())) << format_word(x);
        ASSERT_EQ(c.free, oracle::free_word(name, x)) << format_word(x);
        ASSERT_EQ(c.good, oracle::good_word(name, x)) << format_word(x);
        ASSERT_EQ(c.allowed, oracle::allowed_word(name, x)) << format_word(x);
      });
    }
  }
}

TEST(Scanner, AgreesWithIsAllowedOnEveryPrefix) {
  const Params prm(2, 2);
  for (int n = 1; n <= 6; ++n) {
    oracle::for_each_word(prm, n, [&](const Word& x) {
      LanguageScanner s(prm, kSquares);
      for (std::size_t i = 0; i < x.size(); ++i) {
        s.push(x[i]);
        ASSERT_EQ(s.alive(), is_allowed(prm, kSquares, Word(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(i) + 1)));
      }
    });
  }
}

TEST(LanguageStructure, Factorial) {
  for (const auto* fam : {&kSquares, &kPrefix}) {
    for (int n = 1; n <= 8; ++n) {
      for_each_allowed(Params(2, 2), *fam, n, [&](const Word& x) {
        for (std::size_t b = 0; b < x.size(); ++b)
          for (std::size_t e = b; e <= x.size(); ++e)
            ASSERT_TRUE(is_allowed(Params(2, 2), *fam, Word(x.begin() + static_cast<std::ptrdiff_t>(b), x.begin() + static_cast<std::ptrdiff_t>(e))))
                << format_word(x);
      });
    }
  }
}

TEST(LanguageStructure, Prolongable) {
  for (const auto* fam : {&kSquares, &kPrefix}) {
    for (int n = 0; n <= 8; ++n) {
      for_each_allowed(Params(2, 2), *fam, n, [&](const Word& x) {
        Word y = x;
        y.push_back(kMarker);
        ASSERT_TRUE(is_allowed(Params(2, 2), *fam, y)) << format_word(x);
      });
    }
  }
}

TEST(LanguageStructure, MarkerSynchronizes) {
  const Params prm(2, 2);
  std::vector<Word> left, right;
  for (int n = 0; n <= 6; ++n) {
    oracle::for_each_word(prm, n, [&](const Word& x) {
      Word uo = x;
      uo.push_back(kMarker);
      if (is_allowed(prm, kSquares, uo)) left.push_back(x);
      Word ow{kMarker};
      ow.insert(ow.end(), x.begin(), x.end());
      if (is_allowed(prm, kSquares, ow)) right.push_back(x);
    });
  }
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20'000; ++t) {
    const auto& u = left[rng() % left.size()];
    const auto& v = right[rng() % right.size()];
    Word joined = u;
    joined.push_back(kMarker);
    joined.insert(joined.end(), v.begin(), v.end());
    ASSERT_TRUE(is_allowed(prm, kSquares, joined)) << format_word(joined);
  }
}

TEST(LanguageStructure, ClassInclusions) {
  const Params prm(2, 2);
  for (int n = 0; n <= 6; ++n) {
    oracle::for_each_word(prm, n, [&](const Word& x) {
      const auto c = classify(prm, kPrefix, x);
      if (c.restricted) { ASSERT_TRUE(c.monochromatic); }
      if (c.monochromatic) { ASSERT_TRUE(c.allowed); }
      if (c.free || c.good) { ASSERT_TRUE(c.allowed); }
    });
  }
}

TEST(LanguageStructure, RestrictedPrefixesStayRestricted) {
  const Params prm(2, 2);
  for (const auto* fam : {&kSquares, &kPrefix}) {
    for (int n = 1; n <= 8; ++n) {
      oracle::for_each_word(prm, n, [&](const Word& x) {
        if (!is_restricted(prm, *fam, x)) return;
        for (std::size_t k = 0; k <= x.size(); ++k)
          ASSERT_TRUE(is_restricted(prm, *fam, Word(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(k))));
      });
    }
  }
}
