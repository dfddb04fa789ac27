#pragma once

#include "arabdoc/html_tree.hpp"

#include <string_view>

namespace arabdoc {

enum class TextCost { normalized_levenshtein, strict };

/// Unit insert/delete costs. Relabelling costs 1 between different labels,
/// 1 between cells whose rowspan/colspan differ, the normalized Levenshtein
/// distance of the texts between two text nodes (or 0/1 in strict mode) and
/// 0 otherwise.
struct CostModel {
  TextCost text_cost = TextCost::normalized_levenshtein;

  double insert_cost() const { return 1.0; }
  double delete_cost() const { return 1.0; }
  double relabel(const HtmlTree& a, const HtmlTree& b) const;
};

/// Levenshtein distance over codepoints divided by the longer length; 0 for
/// two empty strings.
double normalized_text_distance(std::string_view a, std::string_view b);

/// Zhang-Shasha ordered tree edit distance.
double tree_edit_distance(const HtmlTree& a, const HtmlTree& b, const CostModel& cost = {});

/// 1 - TED / max(|a|, |b|), clamped to [0, 1].
double teds_similarity(const HtmlTree& a, const HtmlTree& b, const CostModel& cost = {});

}  // namespace arabdoc
