#include "arabdoc/harness.hpp"
#include "unit/test_util.hpp"

#include <cstdlib>

using namespace arabdoc;
namespace fs = std::filesystem;

namespace {

std::string entry_line(const std::string& id, const std::string& source = "real") {
  return "{\"id\": \"" + id + "\", \"ground_truth_path\": \"gt/" + id +
         ".md\", \"image_path\": \"img/" + id + ".png\", \"source\": \"" + source + "\"}\n";
}

// Dataset with n entries whose ground truth is a short Arabic page.
fs::path make_dataset(const std::string& name, std::size_t n, std::uint64_t seed = 1) {
  const auto dir = testutil::scratch(name);
  testutil::Gen g(seed);
  std::string manifest;
  for (std::size_t i = 0; i < n; ++i) {
    const auto id = "doc" + std::to_string(1000 + i);
    manifest += entry_line(id, i % 2 ? "synthetic" : "real");
    std::string gt = "# " + g.sentence(testutil::arabic_letters(), 3) + "\n\n" +
                     g.sentence(testutil::arabic_letters(), 12) + "\n";
    if (g.coin(0.3)) gt += "\n<table><tr><td>ا</td><td>ب</td></tr></table>\n";
    gt += "\n<page_number>" + std::to_string(i + 1) + "</page_number>\n";
    testutil::spit(dir / "gt" / (id + ".md"), gt);
    testutil::spit(dir / "img" / (id + ".png"), "x");
  }
  testutil::spit(dir / "manifest.jsonl", manifest);
  return dir;
}

void copy_predictions(const fs::path& dataset, const fs::path& pred) {
  fs::create_directories(pred);
  for (const auto& f : fs::directory_iterator(dataset / "gt")) {
    fs::copy_file(f.path(), pred / f.path().filename(), fs::copy_options::overwrite_existing);
  }
}

}  // namespace

TEST(Manifest, ParsesAndResolvesPaths) {
  const auto dir = make_dataset("manifest_ok", 4);
  const auto m = load_manifest(dir / "manifest.jsonl");
  ASSERT_EQ(m.entries.size(), 4u);
  EXPECT_EQ(m.entries[0].ground_truth_path, dir / "gt" / "doc1000.md");
  EXPECT_EQ(m.entries[1].source, SourceType::synthetic);
  EXPECT_EQ(m.flagged(), 0u);
}

TEST(Manifest, SchemaErrors) {
  EXPECT_ERROR_CODE(parse_manifest("", "."), SchemaError);
  EXPECT_ERROR_CODE(parse_manifest("not json\n", "."), SchemaError);
  EXPECT_ERROR_CODE(parse_manifest("{\"ground_truth_path\": \"a\", \"source\": \"real\"}\n", "."),
                    SchemaError);
  EXPECT_ERROR_CODE(
      parse_manifest("{\"id\": \"a\", \"ground_truth_path\": \"a\", \"source\": \"scanned\"}\n", "."),
      SchemaError);
  EXPECT_ERROR_CODE(parse_manifest(entry_line("a") + entry_line("a"), "."), DuplicateId);
  EXPECT_ERROR_CODE(load_manifest("/nonexistent/manifest.jsonl"), IoError);
}

TEST(Manifest, MissingFilesAreFlagged) {
  const auto m = parse_manifest(entry_line("ghost"), testutil::scratch("manifest_flag"));
  ASSERT_EQ(m.entries.size(), 1u);
  EXPECT_EQ(m.flagged(), 1u);
  EXPECT_EQ(m.entries[0].flags.size(), 2u);
  const auto findings = lint_ground_truth(m);
  ASSERT_FALSE(findings.empty());
  EXPECT_EQ(findings[0].kind, FindingKind::MissingFile);
}

TEST(Evaluation, SelfPredictionIsPerfect) {
  const auto dir = make_dataset("eval_self", 400);
  copy_predictions(dir, dir / "pred");
  EvalConfig cfg;
  cfg.model_name = "self";
  cfg.workers = 2;
  const auto r = run_evaluation(load_manifest(dir / "manifest.jsonl"), dir / "pred", cfg);
  ASSERT_TRUE(r.corpus.has_value());
  EXPECT_EQ(r.per_entry.size(), 400u);
  EXPECT_EQ(r.corpus->wer, 0.0);
  EXPECT_EQ(r.corpus->cer, 0.0);
  EXPECT_EQ(r.corpus->bleu, 100.0);
  EXPECT_EQ(r.corpus->chrf, 100.0);
  EXPECT_EQ(r.corpus->teds, 100.0);
  EXPECT_EQ(r.corpus->mars, 100.0);
  EXPECT_TRUE(std::is_sorted(r.per_entry.begin(), r.per_entry.end(),
                             [](const auto& a, const auto& b) { return a.id < b.id; }));
}

TEST(Evaluation, EmptyPredictionsScoreZero) {
  const auto dir = make_dataset("eval_empty", 6);
  for (int i = 0; i < 6; ++i) testutil::spit(dir / "pred" / ("doc" + std::to_string(1000 + i) + ".md"), "");
  const auto r = run_evaluation(load_manifest(dir / "manifest.jsonl"), dir / "pred", {});
  EXPECT_EQ(r.corpus->cer, 1.0);
  EXPECT_EQ(r.corpus->wer, 1.0);
  EXPECT_EQ(r.corpus->bleu, 0.0);
  EXPECT_EQ(r.corpus->chrf, 0.0);
  EXPECT_DOUBLE_EQ(r.corpus->mars, r.corpus->teds / 2.0);
}

TEST(Evaluation, MissingPredictions) {
  const auto dir = make_dataset("eval_missing", 3);
  const auto m = load_manifest(dir / "manifest.jsonl");
  fs::create_directories(dir / "pred");
  EXPECT_ERROR_CODE(run_evaluation(m, dir / "pred", {}), NoPredictions);
  testutil::spit(dir / "pred" / "doc1000.txt", testutil::slurp(dir / "gt" / "doc1000.md"));
  const auto r = run_evaluation(m, dir / "pred", {});
  EXPECT_EQ(r.per_entry.size(), 3u);
  EXPECT_EQ(r.per_entry[0].report.mars, 100.0);
  EXPECT_EQ(r.per_entry[1].report.chrf, 0.0);
  EXPECT_FALSE(r.warnings.empty());
  EvalConfig strict;
  strict.strict = true;
  EXPECT_ERROR_CODE(run_evaluation(m, dir / "pred", strict), MissingPrediction);
}

TEST(Evaluation, IndependentOfWorkersAndManifestOrder) {
  const auto dir = make_dataset("eval_order", 30, 5);
  testutil::Gen g(3);
  for (int i = 0; i < 30; ++i) {
    testutil::spit(dir / "pred" / ("doc" + std::to_string(1000 + i) + ".md"),
                   g.sentence(testutil::arabic_letters(), 12));
  }
  const auto manifest_text = testutil::slurp(dir / "manifest.jsonl");
  std::vector<std::string> lines;
  for (std::size_t p = 0, q; (q = manifest_text.find('\n', p)) != std::string::npos; p = q + 1) {
    lines.push_back(manifest_text.substr(p, q - p + 1));
  }
  std::reverse(lines.begin(), lines.end());
  std::string reversed;
  for (const auto& l : lines) reversed += l;

  EvalConfig one;
  one.workers = 1;
  EvalConfig four;
  four.workers = 4;
  const auto a = run_evaluation(parse_manifest(manifest_text, dir), dir / "pred", one);
  const auto b = run_evaluation(parse_manifest(reversed, dir), dir / "pred", four);
  EXPECT_EQ(render_json(a), render_json(b));
}

TEST(Evaluation, ResolveWorkers) {
  EXPECT_EQ(resolve_workers(3), 3);
  ::setenv("ARABDOC_WORKERS", "5", 1);
  EXPECT_EQ(resolve_workers(0), 5);
  ::unsetenv("ARABDOC_WORKERS");
  EXPECT_GE(resolve_workers(0), 1);
}

TEST(Fingerprint, TracksScoreAffectingOptions) {
  EvalOptions a;
  EvalOptions b;
  EXPECT_EQ(config_fingerprint(a), config_fingerprint(b));
  EXPECT_EQ(config_fingerprint(a).size(), 16u);
  b.teds_decimals = 2;
  EXPECT_NE(config_fingerprint(a), config_fingerprint(b));
  b = a;
  b.cer_mode = CerMode::grapheme;
  EXPECT_NE(config_fingerprint(a), config_fingerprint(b));
  b = a;
  b.normalize.strip_diacritics = !a.normalize.strip_diacritics;
  EXPECT_NE(config_fingerprint(a), config_fingerprint(b));
}

TEST(Lint, Examples) {
  const std::string clean = "# عنوان\n\nنص عربي قصير\n\n<page_number>3</page_number>";
  EXPECT_TRUE(lint_text("a", clean).empty());

  const auto no_page = lint_text("a", "نص عربي قصير وطويل");
  ASSERT_EQ(no_page.size(), 1u);
  EXPECT_EQ(no_page[0].kind, FindingKind::MissingPageNumber);

  const std::string english = clean + "\n\nنص عربي طويل جدا هنا ومعه كلمات كثيرة أخرى في هذه الصفحة "
                              "the quick brown fox jumps over the lazy dog today";
  const auto h = lint_text("a", english);
  ASSERT_EQ(h.size(), 1u);
  EXPECT_EQ(h[0].kind, FindingKind::HallucinationSuspect);

  const std::string four_words = clean + "\n\nنص عربي the quick brown fox نص";
  EXPECT_TRUE(lint_text("a", four_words).empty());

  const std::string sparse =
      clean + "\n\n<table><tr><td></td><td>ا</td></tr><tr><td>ب</td><td>ج</td></tr></table>";
  EXPECT_TRUE(lint_text("a", sparse).empty());
  const std::string sparser =
      clean + "\n\n<table><tr><td></td><td></td></tr><tr><td>ب</td><td>ج</td></tr></table>";
  ASSERT_EQ(lint_text("a", sparser).size(), 1u);
  EXPECT_EQ(lint_text("a", sparser)[0].kind, FindingKind::SparseTable);

  const auto broken = lint_text("a", clean + "\n\n<table><tr><td>x</td></tr>");
  ASSERT_FALSE(broken.empty());
  EXPECT_EQ(broken[0].kind, FindingKind::UnparseableHtml);

  LintConfig relaxed;
  relaxed.require_page_number = false;
  EXPECT_TRUE(lint_text("a", "نص", relaxed).empty());
}

TEST(Report, MarkdownRowFormatting) {
  const std::string table = markdown_table({{"x", 0.25, 0.53, 76.18, 87.77, 66, 76.885}});
  EXPECT_NE(table.find("| Model | WER ↓ | CER ↓ | BLEU ↑ | CHRF ↑ | TEDS ↑ | MARS ↑ |"),
            std::string::npos);
  EXPECT_NE(table.find("| x | 0.25 | 0.53 | 76.18 | 87.77 | 66 | 76.885 |"), std::string::npos);
  const std::string empty = markdown_table({});
  EXPECT_EQ(std::count(empty.begin(), empty.end(), '\n'), 2);
}

TEST(Report, JsonRoundTripAndStableBytes) {
  const auto dir = make_dataset("report_json", 8);
  copy_predictions(dir, dir / "pred");
  testutil::spit(dir / "pred" / "doc1003.md", "نص مختلف");
  EvalConfig cfg;
  cfg.model_name = "m";
  const auto m = load_manifest(dir / "manifest.jsonl");
  const auto r = run_evaluation(m, dir / "pred", cfg);
  const auto json = render_json(r);
  EXPECT_EQ(report_from_json(json), r);
  EXPECT_EQ(render_json(report_from_json(json)), json);
  EXPECT_EQ(render_json(run_evaluation(m, dir / "pred", cfg)), json);
  EXPECT_EQ(metric_report_from_json(metric_report_json(*r.corpus)), *r.corpus);

  const auto jsonl = per_entry_jsonl(r);
  EXPECT_EQ(std::count(jsonl.begin(), jsonl.end(), '\n'), 8);
  const auto md = render_markdown(r);
  EXPECT_NE(md.find("| m |"), std::string::npos);
  EXPECT_ERROR_CODE(report_from_json("{\"schema_version\": 99}"), SchemaError);
}
