#include <gtest/gtest.h>

#include "morphic/core.hpp"
#include "support/generators.hpp"

namespace {

using namespace morphic;
using morphic::testing::Rng;

const Morphism kThueMorse = Morphism::from_rules({{"a", "ab"}, {"b", "ba"}});
const Morphism kFib = Morphism::from_rules({{"a", "ab"}, {"b", "a"}});
const Morphism kH = Morphism::from_rules({{"a", "ab"}, {"b", "aa"}});

IncidenceMatrix mat2(long a, long b, long c, long d) {
  IncidenceMatrix m(2);
  m.at(0, 0) = a;
  m.at(0, 1) = b;
  m.at(1, 0) = c;
  m.at(1, 1) = d;
  return m;
}

TEST(Alphabet, RejectsDuplicatesAndMulticharSymbols) {
  EXPECT_THROW(Alphabet({"a", "a"}), InputError);
  EXPECT_THROW(Alphabet({"ab"}), InputError);
  EXPECT_THROW(Alphabet(std::vector<std::string>{}), InputError);
}

TEST(Alphabet, ParsesAndRendersUtf8Symbols) {
  const Alphabet al({"α", "β"});
  const Word w = al.parse("αββα");
  EXPECT_EQ(w, (Word{0, 1, 1, 0}));
  EXPECT_EQ(al.render(w), "αββα");
  EXPECT_THROW(al.parse("αc"), InputError);
}

TEST(Morphism, FromRulesRequiresEveryImageSymbolDeclared) {
  EXPECT_THROW(Morphism::from_rules({{"a", "ac"}, {"b", "b"}}), InputError);
}

TEST(Apply, ConcatenatesImages) {
  const Alphabet& al = kThueMorse.alphabet();
  EXPECT_EQ(al.render(kThueMorse(al.parse("ab"))), "abba");
  EXPECT_TRUE(kThueMorse(Word{}).empty());
  Word w = al.parse("a");
  for (int i = 0; i < 3; ++i) w = kThueMorse(w);
  EXPECT_EQ(al.render(w), "abbabaab");
}

TEST(Apply, RejectsLetterOutsideAlphabet) {
  EXPECT_THROW(kThueMorse.apply(Word{2}), InputError);
}

TEST(ApplyTower, AppliesLastLayerFirst) {
  const Alphabet& al = kThueMorse.alphabet();
  EXPECT_EQ(al.render(apply_tower(MorphismTower{kThueMorse}, al.parse("ab"))), "abba");
  EXPECT_EQ(al.render(apply_tower(MorphismTower{kThueMorse, kH}, al.parse("a"))), "abba");
  EXPECT_EQ(al.render(apply_tower(MorphismTower{kH, kThueMorse}, al.parse("a"))), "abaa");
  EXPECT_EQ(al.render(apply_tower(MorphismTower{kThueMorse, kThueMorse}, al.parse("a"))), "abba");
}

TEST(ApplyTower, EnforcesBudget) {
  EXPECT_THROW(apply_tower(MorphismTower::repeat(kThueMorse, 20), Word{0}, 1000), ResourceLimitError);
}

TEST(Tower, RejectsMixedAlphabets) {
  const Morphism other = Morphism::from_rules({{"a", "ab"}, {"c", "ca"}, {"b", "b"}});
  EXPECT_THROW(MorphismTower({kThueMorse, other}), InputError);
  EXPECT_THROW(MorphismTower(std::vector<Morphism>{}), InputError);
}

TEST(IncidenceMatrix, Examples) {
  EXPECT_EQ(incidence_matrix(kThueMorse), mat2(1, 1, 1, 1));
  EXPECT_EQ(incidence_matrix(Morphism::identity(kThueMorse.alphabet())), IncidenceMatrix::identity(2));
  EXPECT_EQ(incidence_matrix(kFib), mat2(1, 1, 1, 0));
}

TEST(TowerMatrix, Examples) {
  EXPECT_EQ(tower_matrix(MorphismTower{kFib, kFib}), mat2(2, 1, 1, 1));
  EXPECT_EQ(tower_matrix(MorphismTower{kFib}), incidence_matrix(kFib));
  const Morphism g = Morphism::from_rules({{"a", "aab"}, {"b", "b"}});
  EXPECT_NE(tower_matrix(MorphismTower{g, kFib}), tower_matrix(MorphismTower{kFib, g}));
}

TEST(MatrixPow, Examples) {
  EXPECT_EQ(matrix_pow(mat2(1, 1, 1, 0), 0), IncidenceMatrix::identity(2));
  EXPECT_EQ(matrix_pow(mat2(1, 1, 1, 0), 5), mat2(8, 5, 5, 3));
  EXPECT_EQ(matrix_pow(mat2(1, 1, 1, 1), 3), mat2(4, 4, 4, 4));
}

TEST(MatrixPow, ExactBeyondSixtyFourBits) {
  const IncidenceMatrix m = matrix_pow(mat2(1, 1, 1, 0), 200);
  // F(201), the 201st Fibonacci number.
  EXPECT_EQ(m.at(0, 0).str(), "453973694165307953197296969697410619233826");
}

TEST(ImageLengthRow, Examples) {
  EXPECT_EQ(image_length_row(kThueMorse), (BigVector{2, 2}));
  EXPECT_EQ(image_length_row(Morphism::identity(kThueMorse.alphabet())), (BigVector{1, 1}));
  EXPECT_EQ(image_length_row(MorphismTower{kFib, kFib}), (BigVector{3, 2}));
}

TEST(Compose, MatchesTowerApplication) {
  EXPECT_EQ(compose(kThueMorse, kH), materialize(MorphismTower{kThueMorse, kH}));
  EXPECT_EQ(power(kFib, 2), Morphism::from_rules({{"a", "aba"}, {"b", "ab"}}));
  EXPECT_EQ(power(kFib, 0), Morphism::identity(kFib.alphabet()));
}

TEST(TowerStream, MatchesMaterialization) {
  Rng rng(11);
  for (int it = 0; it < 100; ++it) {
    const std::size_t n = 2 + it % 3;
    const auto t = morphic::testing::random_tower(rng, n, 1 + it % 4, 3);
    const Word w = morphic::testing::random_word(rng, n, 1 + it % 5);
    TowerStream s(t, w);
    Word streamed;
    while (auto a = s.next()) streamed.push_back(*a);
    EXPECT_EQ(streamed, apply_tower(t, w));
  }
}

// Randomized invariants.

TEST(CoreProperties, LengthIsRowTimesParikh) {
  Rng rng(1);
  for (int it = 0; it < 300; ++it) {
    const std::size_t n = 2 + it % 4;
    const Morphism m = morphic::testing::random_morphism(rng, n, 5);
    const Word w = morphic::testing::random_word(rng, n, it % 20);
    EXPECT_EQ(BigInt(m(w).size()), dot(image_length_row(m), parikh(w, n)));
  }
}

TEST(CoreProperties, TowerMatrixOfConcatenationIsProduct) {
  Rng rng(2);
  for (int it = 0; it < 200; ++it) {
    const std::size_t n = 2 + it % 3;
    const auto t1 = morphic::testing::random_tower(rng, n, 1 + it % 3, 4);
    const auto t2 = morphic::testing::random_tower(rng, n, 1 + it % 2, 4);
    EXPECT_EQ(tower_matrix(t1.then(t2)), tower_matrix(t1) * tower_matrix(t2));
  }
}

TEST(CoreProperties, ParikhOfImageIsMatrixTimesParikh) {
  Rng rng(3);
  for (int it = 0; it < 300; ++it) {
    const std::size_t n = 2 + it % 4;
    const Morphism m = morphic::testing::random_morphism(rng, n, 5);
    const Word w = morphic::testing::random_word(rng, n, it % 25);
    EXPECT_EQ(parikh(m(w), n), incidence_matrix(m) * parikh(w, n));
  }
}

TEST(CoreProperties, ColumnSumsAreImageLengths) {
  Rng rng(4);
  for (int it = 0; it < 100; ++it) {
    const std::size_t n = 2 + it % 4;
    const Morphism m = morphic::testing::random_morphism(rng, n, 6);
    const IncidenceMatrix mat = incidence_matrix(m);
    for (std::size_t b = 0; b < n; ++b) {
      BigInt sum = 0;
      for (std::size_t a = 0; a < n; ++a) sum += mat.at(a, b);
      EXPECT_EQ(sum, BigInt(m.image(static_cast<Letter>(b)).size()));
    }
  }
}

}  // namespace
