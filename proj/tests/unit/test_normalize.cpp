#include "arabdoc/normalize.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <map>

using namespace arabdoc;
using oracles::fuzz_input;

namespace {

bool ascii_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

// Drops every <...> tag and keeps the text; block-level tags leave a single
// space behind when they sit between two words.
std::string drop_tags_oracle(const std::string& s) {
  static const std::vector<std::string> block = {"div", "p", "br", "h1", "h2", "li", "section"};
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    const bool opens = s[i] == '<' && i + 1 < s.size() &&
                       (std::isalpha(static_cast<unsigned char>(s[i + 1])) || s[i + 1] == '/');
    if (!opens) {
      out += s[i++];
      continue;
    }
    const auto close = s.find('>', i);
    std::string name;
    for (std::size_t k = i + 1; k < close; ++k) {
      const char c = s[k];
      if (c == '/' && name.empty()) continue;
      if (!std::isalnum(static_cast<unsigned char>(c))) break;
      name += c;
    }
    i = close + 1;
    const bool is_block = std::find(block.begin(), block.end(), name) != block.end();
    if (is_block && !out.empty() && !ascii_space(out.back()) && i < s.size() && !ascii_space(s[i])) {
      out += ' ';
    }
  }
  const auto a = out.find_first_not_of(" \n");
  const auto b = out.find_last_not_of(" \n");
  return a == std::string::npos ? "" : out.substr(a, b - a + 1);
}

std::size_t arabic_letters(std::string_view s) {
  std::size_t n = 0;
  for (char32_t cp : text::decode_utf8(s)) n += text::is_arabic_letter(cp) ? 1 : 0;
  return n;
}

std::string without_combining(std::string_view s) {
  std::u32string out;
  for (char32_t cp : text::decode_utf8(s)) {
    const bool mark = (cp >= 0x064B && cp <= 0x065F) || cp == 0x0670 || (cp >= 0x0300 && cp <= 0x036F);
    if (!mark) out.push_back(cp);
  }
  return text::encode_utf8(out);
}

std::multiset<std::string> leaf_texts(const HtmlTree& t) {
  std::multiset<std::string> out;
  if (t.is_text()) out.insert(t.text);
  for (const auto& c : t.children) {
    auto sub = leaf_texts(c);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

int fuzz_iterations() {
  const char* env = std::getenv("ARABDOC_FUZZ_ITERS");
  return env ? std::atoi(env) : 1000;
}

}  // namespace

TEST(Standardize, RuleStarsBecomeDashes) { EXPECT_EQ(standardize("***", {}), "---"); }

TEST(Standardize, StrongBecomesBInsideTables) {
  EXPECT_EQ(standardize("<table><tr><td><strong>x</strong></td></tr></table>", {}),
            "<table><tr><td><b>x</b></td></tr></table>");
  EXPECT_EQ(standardize("<table><tr><td><em>x</em></td></tr></table>", {}),
            "<table><tr><td><i>x</i></td></tr></table>");
}

TEST(Standardize, OutsideTagsMatchOracle) {
  const std::string s = "نص <div>داخلي</div>";
  EXPECT_EQ(standardize(s, {}), "نص داخلي");
  EXPECT_EQ(standardize(s, {}), drop_tags_oracle(s));
}

TEST(Standardize, WatermarkRemovedWithContent) {
  EXPECT_EQ(standardize("<watermark>مسودة</watermark>نص", {}), "نص");
}

TEST(Standardize, ModelTagSetIsConfigurable) {
  NormalizeConfig keep_pages;
  keep_pages.model_tags_to_remove = {"watermark"};
  EXPECT_EQ(standardize("<page_number>5</page_number>", keep_pages), "<page_number>5</page_number>");
}

TEST(Standardize, SetextAndAtx) {
  EXPECT_EQ(standardize("عنوان\n====\n\nنص", {}), "# عنوان\n\nنص");
  EXPECT_EQ(standardize("##   عنوان   ###", {}), "## عنوان");
}

TEST(Standardize, CustomRuleForm) {
  NormalizeConfig cfg;
  cfg.hr_normal_form = "***";
  EXPECT_EQ(standardize("___", cfg), "***");
  cfg.hr_normal_form = "abc";
  EXPECT_ERROR_CODE(cfg.validate(), InvalidConfig);
}

TEST(Standardize, UnterminatedTagWarns) {
  const auto r = standardize_with_warnings("نص <div", {});
  EXPECT_EQ(r.text, "نص");
  EXPECT_FALSE(r.warnings.empty());
}

TEST(Standardize, TagDroppingOracleOnRandomInlineMarkup) {
  testutil::Gen g(21);
  const std::vector<std::string> tags = {"<div>", "</div>", "<span>", "</span>", "<p>", "</p>",
                                         "<br/>", "<b>", "</b>", "<font color=\"red\">", "</font>",
                                         "<section>", "</section>", "<u>", "</u>"};
  for (int i = 0; i < 500; ++i) {
    std::string s;
    const std::size_t n = 1 + g.below(12);
    for (std::size_t k = 0; k < n; ++k) {
      if (g.coin(0.4)) s += g.pick(tags);
      else s += g.word(testutil::arabic_letters(), 4);
      if (g.coin(0.3)) s += ' ';
    }
    ASSERT_EQ(standardize(s, {}), drop_tags_oracle(s)) << s;
  }
}

TEST(ConvertTables, SingleColumn) {
  const auto doc = parse_markdown("| a |\n|---|\n| 1 |");
  const auto r = convert_md_tables(doc);
  ASSERT_EQ(r.document.blocks.size(), 1u);
  const auto& t = std::get<Table>(r.document.blocks[0]);
  EXPECT_EQ(t.syntax, TableSyntax::html);
  EXPECT_EQ(to_html(t.tree), "<table><tr><td>a</td></tr><tr><td>1</td></tr></table>");
  EXPECT_TRUE(r.warnings.empty());
}

TEST(ConvertTables, NoTablesUnchanged) {
  const auto doc = parse_markdown("# t\n\nنص\n\n---");
  EXPECT_TRUE(block_equal(convert_md_tables(doc).document, doc));
}

TEST(ConvertTables, ShortRowPaddedToDelimiterColumns) {
  const std::string src = "| a | b |\n|---|---|\n| 1 |";
  // Oracle: the delimiter row has one '---' per column.
  std::size_t delimiter_cols = 0;
  for (std::size_t p = src.find("---"); p != std::string::npos; p = src.find("---", p + 3)) {
    ++delimiter_cols;
  }
  const auto r = convert_md_tables(parse_markdown(src));
  const auto& t = std::get<Table>(r.document.blocks[0]).tree;
  ASSERT_EQ(t.children.size(), 2u);
  EXPECT_EQ(t.children[1].children.size(), delimiter_cols);
  EXPECT_TRUE(t.children[1].children[1].children.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_NE(r.warnings[0].find("MalformedMdTable"), std::string::npos);
}

TEST(ConvertTables, CellTextPreserved) {
  testutil::Gen g(22);
  for (int i = 0; i < 300; ++i) {
    const std::size_t cols = 1 + g.below(4);
    const std::size_t rows = 1 + g.below(4);
    std::multiset<std::string> cells;
    std::string src;
    for (std::size_t r = 0; r < rows; ++r) {
      src += "|";
      for (std::size_t c = 0; c < cols; ++c) {
        std::string w = g.coin(0.85) ? g.sentence(testutil::arabic_letters(), 2, 4) : "";
        if (!w.empty()) cells.insert(w);
        src += " " + w + " |";
      }
      src += "\n";
      if (r == 0) {
        src += "|";
        for (std::size_t c = 0; c < cols; ++c) src += "---|";
        src += "\n";
      }
    }
    const auto r = convert_md_tables(parse_markdown(src));
    ASSERT_EQ(r.document.blocks.size(), 1u) << src;
    EXPECT_EQ(leaf_texts(std::get<Table>(r.document.blocks[0]).tree), cells) << src;
  }
}

TEST(NormalizeArabic, Fixpoint) {
  const std::string s = "النص العربي\nسطر ثان";
  EXPECT_EQ(normalize_arabic(s, {}), s);
}

TEST(NormalizeArabic, StripDiacritics) {
  NormalizeConfig cfg;
  cfg.strip_diacritics = true;
  EXPECT_EQ(normalize_arabic("بَصير", cfg), "بصير");
  const std::string voweled = "إِنَّ الْكِتَابَ مُفِيدٌ";
  EXPECT_EQ(normalize_arabic(voweled, cfg), without_combining(voweled));
  EXPECT_EQ(normalize_arabic("بَصير", {}), "بَصير");
}

TEST(NormalizeArabic, Whitespace) {
  EXPECT_EQ(normalize_arabic("a  b\t c", {}), "a b c");
  EXPECT_EQ(normalize_arabic("  a  \n\n b ", {}), "a\n\nb");
}

TEST(NormalizeArabic, Nfkc) {
  NormalizeConfig cfg;
  cfg.unicode_form = text::UnicodeForm::NFKC;
  EXPECT_EQ(normalize_arabic("\xEF\xBB\xBB", cfg), "لا");
}

TEST(Golden, RawMatchesExpected) {
  const auto dir = testutil::source_dir() / "tests" / "golden" / "normalize";
  std::size_t count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir / "raw")) {
    const auto name = entry.path().filename();
    const auto raw = testutil::slurp(entry.path());
    const auto expected = testutil::slurp(dir / "expected" / name);
    ASSERT_FALSE(expected.empty()) << name;
    EXPECT_EQ(normalize_output(raw, {}).text + "\n", expected) << name;
    ++count;
  }
  EXPECT_GE(count, 20u);
}

TEST(Golden, ModelTagRemovalCommutesWithTagStripping) {
  const auto dir = testutil::source_dir() / "tests" / "golden" / "normalize";
  auto remove_element = [](std::string s, const std::string& tag) {
    const std::string open = "<" + tag + ">";
    const std::string close = "</" + tag + ">";
    for (auto p = s.find(open); p != std::string::npos; p = s.find(open, p)) {
      const auto e = s.find(close, p);
      if (e == std::string::npos) break;
      s.erase(p, e + close.size() - p);
    }
    return s;
  };
  for (const auto& entry : std::filesystem::directory_iterator(dir / "raw")) {
    const auto raw = testutil::slurp(entry.path());
    const auto early = remove_element(remove_element(raw, "page_number"), "watermark");
    EXPECT_EQ(normalize_output(early, {}).text, normalize_output(raw, {}).text) << entry.path();
  }
}

TEST(Property, StandardizeIdempotent) {
  testutil::Gen g(23);
  for (int i = 0; i < fuzz_iterations(); ++i) {
    const auto s = fuzz_input(g, true);
    const auto once = standardize(s, {});
    ASSERT_EQ(standardize(once, {}), once) << "input: " << s;
  }
}

TEST(Property, NormalizeArabicIdempotent) {
  testutil::Gen g(24);
  NormalizeConfig cfg;
  cfg.strip_diacritics = true;
  for (int i = 0; i < fuzz_iterations(); ++i) {
    auto s = fuzz_input(g, true);
    if (g.coin()) s += "بَ   ِ";
    const auto once = normalize_arabic(s, cfg);
    ASSERT_EQ(normalize_arabic(once, cfg), once) << s;
  }
}

TEST(Property, ConvertTablesIdempotent) {
  testutil::Gen g(25);
  for (int i = 0; i < fuzz_iterations(); ++i) {
    const auto doc = parse_markdown_lenient(fuzz_input(g, false)).document;
    const auto once = convert_md_tables(doc).document;
    const auto twice = convert_md_tables(once);
    ASSERT_TRUE(block_equal(twice.document, once));
    ASSERT_TRUE(twice.warnings.empty());
  }
}

TEST(Property, FullPipelineIdempotent) {
  testutil::Gen g(26);
  for (int i = 0; i < fuzz_iterations(); ++i) {
    const auto s = fuzz_input(g, true);
    const auto once = normalize_output(s, {}).text;
    ASSERT_EQ(normalize_output(once, {}).text, once) << "input: " << s;
  }
}

TEST(Property, NoArabicLetterLost) {
  testutil::Gen g(27);
  for (int i = 0; i < fuzz_iterations(); ++i) {
    const auto s = fuzz_input(g, true);  // model tag contents are Latin or digits
    ASSERT_EQ(arabic_letters(standardize(s, {})), arabic_letters(s)) << s;
  }
}
