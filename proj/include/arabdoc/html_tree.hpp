#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arabdoc {

struct CellSpan {
  int rowspan = 1;
  int colspan = 1;

  bool operator==(const CellSpan&) const = default;
};

/// Labeled ordered tree used for tables and whole documents. Text nodes carry
/// the label "#text" and are always leaves; element nodes carry a lowercase
/// element name. Only td/th nodes carry a CellSpan.
struct HtmlTree {
  static constexpr std::string_view kTextLabel = "#text";

  std::string label;
  std::string text;
  std::vector<HtmlTree> children;
  std::optional<CellSpan> cell_attrs;

  static HtmlTree element(std::string label, std::vector<HtmlTree> children = {});
  static HtmlTree text_node(std::string text);
  static HtmlTree cell(std::string label, CellSpan span, std::vector<HtmlTree> children = {});

  bool is_text() const { return label == kTextLabel; }
  bool is_cell() const { return label == "td" || label == "th"; }

  /// 1 + sum of child sizes.
  std::size_t size() const;

  bool operator==(const HtmlTree&) const = default;
};

/// Parses an HTML fragment that starts with <table>. Whitespace-only text is
/// dropped, other text is whitespace-collapsed and trimmed, entities are
/// decoded and every attribute except rowspan/colspan on cells is discarded.
/// Throws Error(UnbalancedHtml) or Error(IllegalNesting).
HtmlTree parse_html_table(std::string_view html);

/// Canonical HTML for a tree; parse_html_table(to_html(t)) == t for tables.
std::string to_html(const HtmlTree& tree);

/// Concatenated text of all text descendants, in document order.
std::string inner_text(const HtmlTree& tree);

}  // namespace arabdoc
