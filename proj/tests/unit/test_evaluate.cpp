#include "arabdoc/evaluate.hpp"
#include "arabdoc/text.hpp"
#include "unit/test_util.hpp"

using namespace arabdoc;

namespace {

const std::string kDoc =
    "# عنوان\n\nنص **مهم** في الفقرة\n\n---\n\n"
    "<table><tr><td>ا</td><td>ب</td></tr><tr><td>ج</td><td>د</td></tr></table>\n";

}  // namespace

TEST(EvaluateTexts, IdenticalIsPerfect) {
  const auto r = evaluate_texts(kDoc, kDoc);
  EXPECT_EQ(r.wer, 0.0);
  EXPECT_EQ(r.cer, 0.0);
  EXPECT_EQ(r.bleu, 100.0);
  EXPECT_EQ(r.chrf, 100.0);
  EXPECT_EQ(r.teds, 100.0);
  EXPECT_EQ(r.mars, 100.0);
}

TEST(EvaluateTexts, EmptyHypothesis) {
  const auto r = evaluate_texts(kDoc, "");
  EXPECT_EQ(r.cer, 1.0);
  EXPECT_EQ(r.wer, 1.0);
  EXPECT_EQ(r.bleu, 0.0);
  EXPECT_EQ(r.chrf, 0.0);
  EXPECT_LT(r.teds, 100.0);
}

TEST(EvaluateTexts, EmptyReferenceThrows) {
  EXPECT_ERROR_CODE(evaluate_texts("  \n<page_number>3</page_number>", "x"), EmptyReference);
}

TEST(EvaluateTexts, RuleSpellingsAgree) {
  const auto r = evaluate_texts("فقرة\n\n---\n\nأخرى", "فقرة\n\n***\n\nأخرى");
  EXPECT_EQ(r.mars, 100.0);
  EXPECT_EQ(r.cer, 0.0);
}

TEST(EvaluateTexts, MarkdownAndHtmlTablesAgree) {
  const std::string md = "| ا | ب |\n|---|---|\n| ج | د |\n";
  const std::string html =
      "<table><tr><td>ا</td><td>ب</td></tr><tr><td>ج</td><td>د</td></tr></table>";
  const auto r = evaluate_texts(html, md);
  EXPECT_EQ(r.teds, 100.0);
  EXPECT_EQ(r.chrf, 100.0);
}

TEST(EvaluateTexts, ModelTagsIgnored) {
  const auto r = evaluate_texts(kDoc, "<page_number>4</page_number>\n" + kDoc +
                                          "<watermark>سري</watermark>");
  EXPECT_EQ(r.mars, 100.0);
}

TEST(EvaluateTexts, InvariantUnderFormattingNoise) {
  testutil::Gen g(8);
  const auto& al = testutil::arabic_letters();
  const std::vector<std::string> wrappers = {"<span>", "<div>", "<font color=\"red\">", "<u>"};
  for (int i = 0; i < 100; ++i) {
    const auto ref = g.sentence(al, 10);
    std::string noisy;
    for (const auto& w : text::split_whitespace(ref)) {
      if (!noisy.empty()) noisy += g.coin() ? "  " : " ";
      if (g.coin(0.3)) {
        const auto& open = g.pick(wrappers);
        const auto name = open.substr(1, open.find_first_of(" >") - 1);
        noisy += open + w + "</" + name + ">";
      } else {
        noisy += w;
      }
    }
    const auto r = evaluate_texts(ref, noisy);
    EXPECT_EQ(r.cer, 0.0) << noisy;
    EXPECT_EQ(r.mars, 100.0) << noisy;
  }
}

TEST(EvaluateTexts, TedsRoundingFeedsMars) {
  EvalOptions o;
  const auto r = evaluate_texts(kDoc, "# عنوان\n\nنص مختلف تماما", o);
  EXPECT_EQ(r.teds, round_to(r.teds_raw, 0));
  EXPECT_DOUBLE_EQ(r.mars, (r.chrf + r.teds) / 2.0);
  o.teds_decimals = 3;
  const auto r3 = evaluate_texts(kDoc, "# عنوان\n\nنص مختلف تماما", o);
  EXPECT_EQ(r3.teds, round_to(r3.teds_raw, 3));
}

TEST(EvaluateTexts, TablesScopeIgnoresProse) {
  EvalOptions o;
  o.teds_scope = TreeScope::tables;
  const std::string table = "<table><tr><td>ا</td></tr></table>";
  const auto r = evaluate_texts("فقرة أولى\n\n" + table, "كلام آخر\n\n" + table, o);
  EXPECT_EQ(r.teds, 100.0);
}

TEST(Aggregate, PoolsCountsAndAveragesTeds) {
  const auto a = evaluate_texts("ا ب ج د", "ا ب ج د");
  const auto b = evaluate_texts("ه و", "ه ز ح");
  const auto c = aggregate({a, b});
  EXPECT_DOUBLE_EQ(c.wer, static_cast<double>(a.word_counts.edits + b.word_counts.edits) /
                              static_cast<double>(a.word_counts.reference_length +
                                                  b.word_counts.reference_length));
  // 7 + 3 reference codepoints, 3 edits in the second pair.
  EXPECT_DOUBLE_EQ(c.cer, 3.0 / 10.0);
  EXPECT_DOUBLE_EQ(c.teds_raw, (a.teds_raw + b.teds_raw) / 2.0);
  auto pooled = a.chrf_counts;
  pooled += b.chrf_counts;
  EXPECT_DOUBLE_EQ(c.chrf, chrf_score(pooled));

  EvalOptions mean;
  mean.aggregation = Aggregation::sentence_mean;
  EXPECT_DOUBLE_EQ(aggregate({a, b}, mean).chrf, (a.chrf + b.chrf) / 2.0);
  EXPECT_ERROR_CODE(aggregate({}), EmptyCorpus);
}

TEST(Aggregate, OrderIndependent) {
  testutil::Gen g(12);
  const auto& al = testutil::arabic_letters();
  std::vector<MetricReport> rs;
  for (int i = 0; i < 12; ++i) rs.push_back(evaluate_texts(g.sentence(al, 6), g.sentence(al, 6)));
  const auto forward = aggregate(rs);
  std::reverse(rs.begin(), rs.end());
  const auto backward = aggregate(rs);
  EXPECT_EQ(forward.word_counts, backward.word_counts);
  EXPECT_EQ(forward.chrf, backward.chrf);
  EXPECT_EQ(forward.bleu, backward.bleu);
  EXPECT_NEAR(forward.teds_raw, backward.teds_raw, 1e-9);
}
