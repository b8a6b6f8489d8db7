#include <gtest/gtest.h>

#include "morphic/engine.hpp"
#include "support/generators.hpp"

namespace {

using namespace morphic;
using morphic::testing::Rng;

const Morphism kThueMorse = Morphism::from_rules({{"a", "ab"}, {"b", "ba"}});
const Morphism kH = Morphism::from_rules({{"a", "ab"}, {"b", "aa"}});
const Morphism kFib = Morphism::from_rules({{"a", "ab"}, {"b", "a"}});
const Alphabet kAb = Alphabet::of("ab");

LayeredWordSpec letter(Letter x) { return LayeredWordSpec(kAb, {}, x); }

TEST(StreamPrefix, Examples) {
  const auto tm6 = LayeredWordSpec::power(MorphismTower{kThueMorse}, 6, 0);
  EXPECT_EQ(kAb.render(stream_prefix(tm6, 8)), "abbabaab");
  EXPECT_TRUE(stream_prefix(tm6, 0).empty());
  const auto fib5 = LayeredWordSpec::power(MorphismTower{kFib}, 5, 0);
  EXPECT_EQ(kAb.render(stream_prefix(fib5, 13)), "abaababaabaab");
  EXPECT_EQ(stream_prefix(fib5, 100).size(), 13u);
}

TEST(SpecLength, Examples) {
  EXPECT_EQ(spec_length(LayeredWordSpec::power(MorphismTower{kThueMorse}, 6, 0)), 64);
  EXPECT_EQ(spec_length(letter(0)), 1);
  EXPECT_EQ(spec_length(LayeredWordSpec::power(MorphismTower{kFib}, 5, 0)), 13);
  EXPECT_EQ(spec_length(LayeredWordSpec::power(MorphismTower{kThueMorse}, 100, 0)).str(),
            "1267650600228229401496703205376");
}

TEST(LayeredWordSpec, ValidatesInputs) {
  EXPECT_THROW(LayeredWordSpec(kAb, {}, 2), InputError);
  const Morphism other = Morphism::from_rules({{"x", "xy"}, {"y", "x"}});
  EXPECT_THROW(LayeredWordSpec(kAb, {other}, 0), InputError);
}

TEST(ComparableWords, Examples) {
  EXPECT_EQ(comparable_words(kAb.parse("ab"), kAb.parse("abba")), Comparability::comparable());
  EXPECT_EQ(comparable_words(kAb.parse("abb"), kAb.parse("aba")), Comparability::mismatch(2, 1, 0));
  EXPECT_TRUE(comparable_words(Word{}, kAb.parse("ab")).is_comparable());
}

TEST(CompareImages, Examples) {
  const MorphismTower g{kThueMorse};
  const MorphismTower h{kH};
  EXPECT_TRUE(compare_images(LayeredWordSpec::power(g, 7, 0), g, g).is_comparable());
  EXPECT_TRUE(compare_images(letter(0), g, h).is_comparable());
  EXPECT_EQ(compare_images(LayeredWordSpec(kAb, {kThueMorse}, 0), g, h), Comparability::mismatch(2, 1, 0));
}

TEST(CompareImages, ExactPositionInsideAstronomicalWord) {
  // W = a^(2^200) b. f1 is the identity and f2 sends b to a, so the first
  // mismatch is at the only b.
  const Morphism id = Morphism::identity(kAb);
  const Morphism a_only = Morphism::from_rules({{"a", "a"}, {"b", "a"}});
  const Morphism push_b = Morphism::from_rules({{"a", "aa"}, {"b", "b"}});
  std::vector<Morphism> layers(200, push_b);
  layers.push_back(Morphism::from_rules({{"a", "ab"}, {"b", "b"}}));
  const LayeredWordSpec spec(kAb, layers, 0);
  const auto r = compare_images(spec, MorphismTower{id}, MorphismTower{a_only});
  ASSERT_EQ(r.kind, Comparability::Kind::Mismatch);
  EXPECT_EQ(r.position, BigInt(1) << 200);
  EXPECT_EQ(r.left, 1);
  EXPECT_EQ(r.right, 0);
}

TEST(CompareImages, CapExceededIsNotAVerdict) {
  const Morphism dbl = Morphism::from_rules({{"a", "aa"}, {"b", "bb"}});
  const auto spec = LayeredWordSpec::power(MorphismTower{dbl}, 6, 0);
  EngineOptions opts;
  opts.overflow_cap = 10;
  const auto r = compare_images(spec, MorphismTower{Morphism::identity(kAb)}, MorphismTower{dbl}, opts);
  EXPECT_EQ(r.kind, Comparability::Kind::CapExceeded);
  opts.overflow_cap = 1000;
  EXPECT_TRUE(compare_images(spec, MorphismTower{Morphism::identity(kAb)}, MorphismTower{dbl}, opts).is_comparable());
}

TEST(CompareImages, RejectsCapBelowStepLength) {
  EngineOptions opts;
  opts.overflow_cap = 1;
  EXPECT_THROW(compare_images(letter(0), MorphismTower{kThueMorse}, MorphismTower{kH}, opts), InputError);
}

TEST(CompareImages, MemoCollapsesRepeatedSubtrees) {
  const auto spec = LayeredWordSpec::power(MorphismTower{kThueMorse}, 300, 0);
  EngineStats stats;
  EXPECT_TRUE(compare_images(spec, MorphismTower{kThueMorse, kThueMorse}, MorphismTower{power(kThueMorse, 2)}, {},
                             &stats)
                  .is_comparable());
  EXPECT_LT(stats.memo_entries, 5000u);
}

TEST(EngineProperties, MatchesMaterializedComparison) {
  Rng rng(41);
  int mismatches = 0;
  for (int it = 0; it < 200; ++it) {
    const auto c = morphic::testing::random_engine_case(rng, it);
    const Word w = stream_prefix(c.spec, 1'000'000);
    const auto expected = comparable_words(apply_tower(c.f1, w), apply_tower(c.f2, w));
    mismatches += expected.kind == Comparability::Kind::Mismatch;
    EXPECT_EQ(compare_images(c.spec, c.f1, c.f2), expected);
    EngineOptions no_memo;
    no_memo.memoize = false;
    EXPECT_EQ(compare_images(c.spec, c.f1, c.f2, no_memo), expected);
  }
  EXPECT_GT(mismatches, 20);
  EXPECT_LT(mismatches, 180);
}

TEST(EngineProperties, StreamPrefixIsMonotone) {
  Rng rng(42);
  for (int it = 0; it < 100; ++it) {
    const auto c = morphic::testing::random_engine_case(rng, it);
    const Word longer = stream_prefix(c.spec, 200);
    for (std::size_t l : {0, 1, 7, 50}) {
      const Word shorter = stream_prefix(c.spec, l);
      EXPECT_TRUE(std::equal(shorter.begin(), shorter.end(), longer.begin()));
    }
  }
}

TEST(EngineProperties, IteratesArePrefixes) {
  Rng rng(43);
  for (int it = 0; it < 100; ++it) {
    const std::size_t n = 2 + it % 3;
    const auto x = static_cast<Letter>(it % n);
    const Morphism g = morphic::testing::random_primitive(rng, n, 3, x);
    Word prev = stream_prefix(LayeredWordSpec::power(MorphismTower{g}, 0, x), 300);
    for (std::size_t k = 1; k < 8; ++k) {
      const Word cur = stream_prefix(LayeredWordSpec::power(MorphismTower{g}, k, x), 300);
      ASSERT_GE(cur.size(), prev.size());
      EXPECT_TRUE(std::equal(prev.begin(), prev.end(), cur.begin()));
      prev = cur;
    }
  }
}

}  // namespace
