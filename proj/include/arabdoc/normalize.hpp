#pragma once

#include "arabdoc/doc_model.hpp"
#include "arabdoc/text.hpp"

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace arabdoc {

struct NormalizeConfig {
  /// Removed together with their content (step 6).
  std::set<std::string> model_tags_to_remove = {"page_number", "watermark"};
  /// Document tags that survive step 1 so the parser can see them.
  std::set<std::string> special_tags = default_special_tags();
  text::UnicodeForm unicode_form = text::UnicodeForm::NFC;
  bool strip_diacritics = false;
  std::string hr_normal_form = "---";

  /// Throws Error(InvalidConfig) if hr_normal_form is not a horizontal rule.
  void validate() const;
};

struct StandardizeResult {
  std::string text;
  std::vector<std::string> warnings;
};

/// Output standardization, applied in this order:
///   1. strip HTML tags outside <table> regions, keeping their inner text
///   3. rewrite every horizontal rule as cfg.hr_normal_form
///   4. Setext headers become ATX; ATX headers get one space and no closing #s
///   5. inside tables, <strong> -> <b> and <em> -> <i>
///   6. drop configured model tags together with their content
/// Step 2 (pipe tables to HTML) needs a parsed document, see convert_md_tables.
StandardizeResult standardize_with_warnings(std::string_view text, const NormalizeConfig& cfg);
std::string standardize(std::string_view text, const NormalizeConfig& cfg);

struct ConvertResult {
  Document document;
  std::vector<std::string> warnings;
};

/// Turns pipe tables into HTML tables. Short rows are padded with empty cells
/// up to the delimiter-row column count and reported as MalformedMdTable.
ConvertResult convert_md_tables(const Document& doc);

/// Unicode normalization, optional removal of combining marks, whitespace
/// runs collapsed to one space and line ends trimmed. Newlines are kept.
std::string normalize_arabic(std::string_view text, const NormalizeConfig& cfg);

struct NormalizedOutput {
  std::string text;
  Document document;
  std::vector<std::string> warnings;
};

/// Full pipeline used by evaluation: normalize_arabic, standardize, lenient
/// parse, convert_md_tables, serialize.
NormalizedOutput normalize_output(std::string_view raw, const NormalizeConfig& cfg);

}  // namespace arabdoc
