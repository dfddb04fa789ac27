#pragma once

// Minimal HTML tag lexer shared by the table parser and the normalizer.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arabdoc::detail {

enum class TagKind { Start, End, Comment };

struct TagToken {
  TagKind kind = TagKind::Start;
  std::string name;  // lowercase
  std::vector<std::pair<std::string, std::string>> attrs;
  bool self_closing = false;
  std::size_t begin = 0;
  std::size_t end = 0;  // one past '>'
};

enum class LexStatus { NotATag, Tag, Unterminated };

struct LexResult {
  LexStatus status = LexStatus::NotATag;
  TagToken token;
};

/// Lexes the tag starting at s[pos] == '<'. A '<' not followed by a letter,
/// '/' + letter, or "!--" is plain text (NotATag). Unterminated means a tag
/// name was read but no closing '>' exists; token.end then marks the end of
/// the tag name.
LexResult lex_tag(std::string_view s, std::size_t pos);

bool is_void_element(std::string_view name);

std::string decode_entities(std::string_view s);
std::string escape_text(std::string_view s);

/// Position of the first "<table" start tag at or after `from`, or npos.
std::size_t find_table_start(std::string_view s, std::size_t from = 0);

/// Given s[start] at "<table", returns one past the matching "</table>",
/// honouring nested tables, or npos if the table is never closed.
std::size_t find_table_end(std::string_view s, std::size_t start);

inline bool ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

}  // namespace arabdoc::detail
