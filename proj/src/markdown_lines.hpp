#pragma once

// Line-level Markdown recognisers shared by the parser and the normalizer so
// both agree on what a header, rule or table row is.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arabdoc::detail {

struct AtxHeader {
  int level = 1;
  std::string text;
};

/// "# t", "##  t ##" -> level + trimmed text with the closing sequence removed.
std::optional<AtxHeader> match_atx_header(std::string_view line);

/// Inverse of match_atx_header: a trailing '#' in the text gets a closing
/// sequence so it is not read back as one.
std::string write_atx(int level, std::string_view text);

/// Three or more of the same character from {-, *, _}, optionally separated
/// by spaces or tabs, and nothing else.
bool is_thematic_break(std::string_view line);

/// "===" -> 1, "---" -> 2 (no interior spaces). Only meaningful directly
/// under paragraph text.
std::optional<int> setext_level(std::string_view line);

/// Splits a pipe-table row into trimmed, unescaped cells.
std::vector<std::string> split_table_row(std::string_view line);

/// Number of columns if the line is a delimiter row such as "|---|:-:|".
std::optional<std::size_t> delimiter_columns(std::string_view line);

/// True when `line` followed by `next` opens a pipe table.
bool opens_pipe_table(std::string_view line, std::string_view next);

/// Escapes '|' for emission inside a pipe-table cell.
std::string escape_cell(std::string_view cell);

}  // namespace arabdoc::detail
