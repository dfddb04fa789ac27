#include "arabdoc/synth_config.hpp"
#include "stats.hpp"
#include "unit/test_util.hpp"

#include <set>

using namespace arabdoc;

namespace {

constexpr std::size_t kSamples = 20000;

const std::vector<RenderConfig>& samples() {
  static const std::vector<RenderConfig> v = [] {
    std::vector<RenderConfig> out;
    const SamplerOptions opts;
    for (std::size_t i = 0; i < kSamples; ++i) out.push_back(sample_render_config(1000 + i, opts));
    return out;
  }();
  return v;
}

template <typename F>
std::vector<std::size_t> histogram(std::size_t bins, F&& bin_of) {
  std::vector<std::size_t> h(bins, 0);
  for (const auto& c : samples()) ++h.at(bin_of(c));
  return h;
}

}  // namespace

TEST(Catalog, DefaultSizesAndUniqueness) {
  const auto& c = default_catalog();
  EXPECT_EQ(c.fonts.size(), 39u);
  EXPECT_EQ(c.light_backgrounds.size(), 8u);
  EXPECT_EQ(c.dark_backgrounds.size(), 5u);
  EXPECT_EQ(c.light_text.size(), 9u);
  EXPECT_EQ(c.dark_text.size(), 16u);
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(std::set<std::string>(c.fonts.begin(), c.fonts.end()).size(), 39u);
}

TEST(Catalog, ValidateRejectsBadLists) {
  auto c = default_catalog();
  c.fonts.pop_back();
  EXPECT_ERROR_CODE(c.validate(), InvalidConfig);
  c = default_catalog();
  c.dark_text[1] = c.dark_text[0];
  EXPECT_ERROR_CODE(c.validate(), InvalidConfig);
}

TEST(Catalog, ShippedDataMatchesDefault) {
  const auto text = testutil::slurp(testutil::source_dir() / "data" / "render_catalog_v1.json");
  EXPECT_EQ(RenderCatalog::from_json(text), default_catalog());
  EXPECT_EQ(RenderCatalog::from_json(default_catalog().to_json()), default_catalog());
}

TEST(Sampler, CategoricalProportions) {
  const double alpha = 0.001;
  EXPECT_GT(teststats::chi_square_p(
                histogram(3, [](const RenderConfig& c) { return static_cast<std::size_t>(c.alignment); }),
                {0.65, 0.05, 0.30}),
            alpha);
  EXPECT_GT(teststats::chi_square_p(
                histogram(3, [](const RenderConfig& c) { return static_cast<std::size_t>(c.columns - 1); }),
                {0.75, 0.20, 0.05}),
            alpha);
  EXPECT_GT(teststats::chi_square_p(
                histogram(2, [](const RenderConfig& c) { return static_cast<std::size_t>(c.background_shade); }),
                {0.75, 0.25}),
            alpha);
  EXPECT_GT(teststats::chi_square_p(
                histogram(2, [](const RenderConfig& c) { return static_cast<std::size_t>(c.direction); }),
                {0.95, 0.05}),
            alpha);
  EXPECT_GT(teststats::chi_square_p(
                histogram(8, [](const RenderConfig& c) { return static_cast<std::size_t>((c.font_size_pt - 8) / 2); }),
                std::vector<double>(8, 1.0 / 8.0)),
            alpha);
}

TEST(Sampler, ChiSquareDetectsWrongProportions) {
  // The same alignment histogram must be rejected against a swapped model.
  const auto h = histogram(3, [](const RenderConfig& c) { return static_cast<std::size_t>(c.alignment); });
  EXPECT_LT(teststats::chi_square_p(h, {0.30, 0.05, 0.65}), 1e-9);
}

TEST(Sampler, ContinuousFieldsUniformInRange) {
  std::vector<double> margin, line, spacing;
  for (const auto& c : samples()) {
    margin.push_back(c.margin_cm);
    line.push_back(c.line_height);
    spacing.push_back(c.column_spacing_cm);
  }
  EXPECT_GT(teststats::ks_p(teststats::ks_uniform_d(margin, 1.0, 2.5), kSamples), 0.001);
  EXPECT_GT(teststats::ks_p(teststats::ks_uniform_d(line, 1.0, 1.6), kSamples), 0.001);
  EXPECT_GT(teststats::ks_p(teststats::ks_uniform_d(spacing, 0.5, 1.2), kSamples), 0.001);
  // And the test itself rejects a shifted range.
  EXPECT_LT(teststats::ks_p(teststats::ks_uniform_d(margin, 1.0, 2.6), kSamples), 1e-6);
}

TEST(Sampler, EveryConfigValid) {
  for (const auto& c : samples()) {
    ASSERT_NO_THROW(validate_render_config(c));
    ASSERT_EQ(c.font_size_pt % 2, 0);
    ASSERT_NE(c.background_shade, c.text_shade);
  }
}

TEST(Sampler, DeterministicPerSeed) {
  for (std::uint64_t s : {0ull, 1ull, 77ull, 0xFFFFFFFFFFFFFFFFull}) {
    EXPECT_EQ(sample_render_config(s), sample_render_config(s));
  }
  EXPECT_NE(sample_render_config(1), sample_render_config(2));
}

TEST(Sampler, OptionProbabilitiesRespected) {
  SamplerOptions never;
  never.landscape_probability = 0.0;
  never.highlight_probability = 0.0;
  never.colored_paragraph_probability = 0.0;
  SamplerOptions always = never;
  always.landscape_probability = 1.0;
  always.highlight_probability = 1.0;
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto a = sample_render_config(s, never);
    EXPECT_EQ(a.orientation, Orientation::portrait);
    EXPECT_FALSE(a.highlight || a.colored_paragraph);
    const auto b = sample_render_config(s, always);
    EXPECT_EQ(b.orientation, Orientation::landscape);
    EXPECT_TRUE(b.highlight);
  }
}

TEST(RenderConfigJson, RoundTrip) {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto c = sample_render_config(s);
    EXPECT_EQ(RenderConfig::from_json(c.to_json()), c);
  }
  EXPECT_ERROR_CODE(RenderConfig::from_json("{}"), SchemaError);
}

TEST(ValidateConfig, RejectsBrokenFields) {
  auto c = sample_render_config(5);
  auto bad = c;
  bad.font_size_pt = 13;
  EXPECT_ERROR_CODE(validate_render_config(bad), InvalidConfig);
  bad = c;
  bad.text_shade = bad.background_shade;
  EXPECT_ERROR_CODE(validate_render_config(bad), InvalidConfig);
  bad = c;
  bad.margin_cm = 3.0;
  EXPECT_ERROR_CODE(validate_render_config(bad), InvalidConfig);
  bad = c;
  bad.font = "Comic Sans";
  EXPECT_ERROR_CODE(validate_render_config(bad), InvalidConfig);
}

TEST(RenderJob, HtmlCarriesContentAndConfig) {
  auto cfg = sample_render_config(3);
  cfg.direction = TextDirection::rtl;
  const auto doc = parse_markdown("# t\n\nنص **قوي**\n\n<table><tr><td>خ</td></tr></table>");
  const auto job = emit_render_job(doc, cfg, 42);
  EXPECT_NE(job.html.find("<h1>t</h1>"), std::string::npos);
  EXPECT_NE(job.html.find("<b>قوي</b>"), std::string::npos);
  EXPECT_NE(job.html.find("<td>خ</td>"), std::string::npos);
  EXPECT_NE(job.html.find("dir=\"rtl\""), std::string::npos);
  EXPECT_NE(job.html.find(cfg.to_json()), std::string::npos);
  EXPECT_NE(job.html.find(cfg.font), std::string::npos);
  EXPECT_EQ(job.job_id.rfind("job-", 0), 0u);
  EXPECT_EQ(emit_render_job(doc, cfg, 42).html, job.html);
  EXPECT_NE(emit_render_job(doc, cfg, 43).job_id, job.job_id);
}

TEST(RenderJob, LtrAndWrittenFiles) {
  auto cfg = sample_render_config(4);
  cfg.direction = TextDirection::ltr;
  const auto job = emit_render_job(parse_markdown("x"), cfg, 1, "custom");
  EXPECT_NE(job.html.find("dir=\"ltr\""), std::string::npos);
  const auto dir = testutil::scratch("render_job");
  write_render_job(job, dir);
  EXPECT_EQ(testutil::slurp(dir / "custom.html"), job.html);
  EXPECT_FALSE(testutil::slurp(dir / "custom.json").empty());
}
