#include "arabdoc/metrics.hpp"
#include "arabdoc/text.hpp"
#include "oracles.hpp"
#include "unit/test_util.hpp"

#include <cmath>
#include <functional>

using namespace arabdoc;
using namespace oracles;

TEST(Levenshtein, MatchesExhaustiveRecursionOnSmallAlphabet) {
  std::vector<std::string> strs;
  all_strings(4, strs);
  for (const auto& a : strs) {
    for (const auto& b : strs) {
      ASSERT_EQ(levenshtein(u32(a), u32(b)), lev_rec(a, b)) << a << " / " << b;
    }
  }
}

TEST(Levenshtein, RandomLongerPairsMatchRecursion) {
  testutil::Gen g(7);
  for (int i = 0; i < 2000; ++i) {
    std::string a, b;
    for (std::size_t k = g.below(9); k > 0; --k) a += static_cast<char>('a' + g.below(3));
    for (std::size_t k = g.below(9); k > 0; --k) b += static_cast<char>('a' + g.below(3));
    ASSERT_EQ(levenshtein(u32(a), u32(b)), lev_rec(a, b)) << a << " / " << b;
  }
}

TEST(Levenshtein, MetricAxioms) {
  testutil::Gen g(11);
  const auto& al = testutil::arabic_letters();
  for (int i = 0; i < 500; ++i) {
    const auto a = u32(g.word(al, 8)), b = u32(g.word(al, 8)), c = u32(g.word(al, 8));
    EXPECT_EQ(levenshtein(a, b), levenshtein(b, a));
    EXPECT_LE(levenshtein(a, c), levenshtein(a, b) + levenshtein(b, c));
    EXPECT_EQ(levenshtein(a, a), 0u);
    EXPECT_LE(levenshtein(a, b), std::max(a.size(), b.size()));
  }
}

TEST(Cer, Examples) {
  EXPECT_DOUBLE_EQ(cer("abcd", "abxd"), 0.25);
  EXPECT_DOUBLE_EQ(cer("abcd", "abcd"), 0.0);
  EXPECT_DOUBLE_EQ(cer("ab", ""), 1.0);
  EXPECT_DOUBLE_EQ(cer("ab", "abcdef"), 2.0);
  EXPECT_DOUBLE_EQ(cer("كتب", "كتاب"), 1.0 / 3.0);
  EXPECT_ERROR_CODE(cer("", "x"), EmptyReference);
}

TEST(Cer, GraphemeModeCountsClusters) {
  // Letter plus fatha is one grapheme but two codepoints.
  EXPECT_DOUBLE_EQ(cer("بَ", "ب", CerMode::codepoint), 0.5);
  EXPECT_DOUBLE_EQ(cer("بَ", "ب", CerMode::grapheme), 1.0);
}

TEST(Wer, Examples) {
  EXPECT_DOUBLE_EQ(wer("a b c", "a x c"), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(wer("a", "a b c"), 2.0);
  EXPECT_DOUBLE_EQ(wer("a  b\n c", "a b c"), 0.0);
  EXPECT_ERROR_CODE(wer("  \n", "x"), EmptyReference);
}

TEST(Wer, InvariantUnderWhitespaceReshaping) {
  testutil::Gen g(5);
  const auto& al = testutil::arabic_letters();
  for (int i = 0; i < 200; ++i) {
    const auto r = g.sentence(al, 8);
    const auto h = g.sentence(al, 8);
    std::string h2;
    for (char c : h) h2 += c == ' ' ? std::string(g.coin() ? "\n\t " : "  ") : std::string(1, c);
    EXPECT_EQ(word_edit_counts(r, h), word_edit_counts(r, h2));
  }
}

TEST(Bleu, Examples) {
  EXPECT_DOUBLE_EQ(bleu({"the cat sat on the mat"}, {"the cat sat on the mat"}), 100.0);
  EXPECT_DOUBLE_EQ(bleu({"x"}, {"x"}), 100.0);
  EXPECT_DOUBLE_EQ(bleu({"a b"}, {"c d"}), 0.0);
  EXPECT_DOUBLE_EQ(bleu({"a b"}, {""}), 0.0);
  // "the cat" vs "the cat sat": p1 = p2 = 1, p3 = p4 smoothed to 1/(0+1),
  // brevity penalty exp(1 - 3/2).
  EXPECT_NEAR(bleu({"the cat sat"}, {"the cat"}), 100.0 * std::exp(-0.5), 1e-12);
  EXPECT_ERROR_CODE(bleu({"a"}, {}), LengthMismatch);
  EXPECT_ERROR_CODE(bleu({}, {}), EmptyCorpus);
}

TEST(Bleu, MatchesDirectFormula) {
  testutil::Gen g(21);
  const std::vector<std::string> al = {"a", "b", "c"};
  for (int i = 0; i < 300; ++i) {
    const auto r = g.sentence(al, 10, 2), h = g.sentence(al, 10, 2);
    EXPECT_NEAR(bleu({r}, {h}), bleu_direct(r, h), 1e-9) << r << " | " << h;
  }
}

TEST(Bleu, CorpusPoolsCountsAndSentenceModeAverages) {
  const std::vector<std::string> refs = {"a b c d", "e f g h"};
  const std::vector<std::string> hyps = {"a b c d", "e f x h"};
  auto s = bleu_stats(refs[0], hyps[0]);
  s += bleu_stats(refs[1], hyps[1]);
  EXPECT_DOUBLE_EQ(bleu(refs, hyps), bleu_score(s));
  EXPECT_DOUBLE_EQ(bleu(refs, hyps, Aggregation::sentence_mean),
                   (bleu({refs[0]}, {hyps[0]}) + bleu({refs[1]}, {hyps[1]})) / 2.0);
}

TEST(Chrf, Examples) {
  EXPECT_DOUBLE_EQ(chrf({"abc"}, {"abc"}), 100.0);
  EXPECT_DOUBLE_EQ(chrf({""}, {""}), 100.0);
  EXPECT_DOUBLE_EQ(chrf({"abc"}, {""}), 0.0);
  EXPECT_DOUBLE_EQ(chrf({"abc"}, {"xyz"}), 0.0);
  EXPECT_DOUBLE_EQ(chrf({"a b c"}, {"abc"}), 100.0);
  // abcd vs abce: orders 1..4 have precision = recall = 3/4, 2/3, 1/2, 0.
  const double p = (0.75 + 2.0 / 3.0 + 0.5 + 0.0) / 4.0;
  EXPECT_NEAR(chrf({"abcd"}, {"abce"}), 100.0 * p, 1e-12);
}

TEST(Chrf, MatchesDirectFormula) {
  testutil::Gen g(33);
  const auto& al = testutil::arabic_letters();
  const std::vector<std::string> small(al.begin(), al.begin() + 4);
  for (int i = 0; i < 300; ++i) {
    const auto r = g.sentence(small, 6, 4), h = g.sentence(small, 6, 4);
    EXPECT_NEAR(chrf({r}, {h}), chrf_direct(r, h), 1e-9) << r << " | " << h;
  }
}

TEST(Chrf, BoundedAndPerfectOnIdentity) {
  testutil::Gen g(3);
  const auto& al = testutil::arabic_letters();
  for (int i = 0; i < 300; ++i) {
    const auto r = g.sentence(al, 6), h = g.sentence(al, 6);
    const double v = chrf({r}, {h});
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 100.0);
    EXPECT_EQ(chrf({r}, {r}), 100.0);
    EXPECT_EQ(bleu({r}, {r}), 100.0);
  }
}

TEST(Mars, ArithmeticMean) {
  EXPECT_DOUBLE_EQ(mars(87.77, 66), 76.885);
  EXPECT_DOUBLE_EQ(mars(0, 100), 50.0);
  for (double x : {0.0, 12.5, 99.99, 100.0}) EXPECT_DOUBLE_EQ(mars(x, x), x);
  EXPECT_LT(mars(50, 60), mars(50.01, 60));
  EXPECT_LT(mars(50, 60), mars(50, 60.01));
  EXPECT_ERROR_CODE(mars(-0.1, 5), OutOfRange);
  EXPECT_ERROR_CODE(mars(5, 100.5), OutOfRange);
  EXPECT_ERROR_CODE(mars(std::nan(""), 5), OutOfRange);
}

TEST(RoundTo, HalfAwayFromZero) {
  EXPECT_DOUBLE_EQ(round_to(65.5, 0), 66.0);
  EXPECT_DOUBLE_EQ(round_to(65.49, 0), 65.0);
  EXPECT_DOUBLE_EQ(round_to(0.125, 2), 0.13);
  EXPECT_DOUBLE_EQ(round_to(-2.5, 0), -3.0);
}
