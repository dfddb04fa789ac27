#include "arabdoc/teds.hpp"
#include "oracles.hpp"
#include "unit/test_util.hpp"

#include <functional>

using namespace arabdoc;

using namespace oracles;

namespace {

HtmlTree row(std::vector<std::string> cells) {
  HtmlTree tr = HtmlTree::element("tr");
  for (auto& c : cells) tr.children.push_back(HtmlTree::cell("td", {}, {HtmlTree::text_node(c)}));
  return tr;
}

}  // namespace

TEST(Ted, MatchesBruteForceOverMappings) {
  testutil::Gen g(2024);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_tree(g, 1 + g.below(7));
    const auto b = random_tree(g, 1 + g.below(7));
    ASSERT_LE(a.size(), 7u);
    ASSERT_LE(b.size(), 7u);
    for (auto mode : {TextCost::normalized_levenshtein, TextCost::strict}) {
      const CostModel cm{mode};
      ASSERT_NEAR(tree_edit_distance(a, b, cm), brute_ted(a, b, cm), 1e-12)
          << to_html(a) << " vs " << to_html(b);
    }
  }
}

TEST(Ted, Symmetric) {
  testutil::Gen g(9);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_tree(g, 1 + g.below(12));
    const auto b = random_tree(g, 1 + g.below(12));
    EXPECT_NEAR(tree_edit_distance(a, b), tree_edit_distance(b, a), 1e-12);
    EXPECT_EQ(tree_edit_distance(a, a), 0.0);
    EXPECT_LE(tree_edit_distance(a, b), static_cast<double>(a.size() + b.size()));
  }
}

TEST(Teds, CellTextChange) {
  // table > tr > td > text: four nodes, one text differs completely.
  const auto a = HtmlTree::element("table", {row({"ab"})});
  const auto b = HtmlTree::element("table", {row({"xy"})});
  EXPECT_DOUBLE_EQ(teds_similarity(a, b), 0.75);
  const auto c = HtmlTree::element("table", {row({"ax"})});
  EXPECT_DOUBLE_EQ(teds_similarity(a, c), 1.0 - 0.5 / 4.0);
  EXPECT_DOUBLE_EQ(teds_similarity(a, c, {TextCost::strict}), 0.75);
}

TEST(Teds, SpanMismatchCostsOne) {
  auto a = HtmlTree::element("table", {row({"x"})});
  auto b = a;
  b.children[0].children[0].cell_attrs = CellSpan{1, 2};
  EXPECT_DOUBLE_EQ(tree_edit_distance(a, b), 1.0);
}

TEST(Teds, MissingRow) {
  const auto a = HtmlTree::element("table", {row({"a", "b"}), row({"c", "d"})});
  const auto b = HtmlTree::element("table", {row({"a", "b"})});
  // Five nodes of the second row are deleted out of eleven.
  EXPECT_DOUBLE_EQ(teds_similarity(a, b), 1.0 - 5.0 / 11.0);
}

TEST(Teds, BoundedAndOneOnIdentity) {
  testutil::Gen g(17);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_tree(g, 1 + g.below(15));
    const auto b = random_tree(g, 1 + g.below(15));
    const double s = teds_similarity(a, b);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, 1.0);
    EXPECT_EQ(teds_similarity(a, a), 1.0);
  }
}

TEST(NormalizedTextDistance, Examples) {
  EXPECT_DOUBLE_EQ(normalized_text_distance("", ""), 0.0);
  EXPECT_DOUBLE_EQ(normalized_text_distance("abcd", "abxd"), 0.25);
  EXPECT_DOUBLE_EQ(normalized_text_distance("", "abc"), 1.0);
  EXPECT_DOUBLE_EQ(normalized_text_distance("كتب", "كتاب"), 0.25);
}
