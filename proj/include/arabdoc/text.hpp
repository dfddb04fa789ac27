#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace arabdoc {

/// Unicode text helpers. All strings in the library are UTF-8; storage order
/// is logical order.
namespace text {

/// Decodes UTF-8. Ill-formed sequences decode to U+FFFD, one per bad byte.
std::u32string decode_utf8(std::string_view s);
std::string encode_utf8(std::u32string_view s);
void append_utf8(std::string& out, char32_t cp);

enum class UnicodeForm { NFC, NFKC };

std::string normalize_unicode(std::string_view s, UnicodeForm form);

/// Extended grapheme clusters, each as a UTF-8 substring.
std::vector<std::string> graphemes(std::string_view s);

bool is_whitespace(char32_t cp);
bool is_combining_mark(char32_t cp);
bool is_arabic_letter(char32_t cp);
bool is_latin_letter(char32_t cp);
bool is_letter(char32_t cp);

/// Splits on runs of Unicode whitespace; no empty tokens.
std::vector<std::string> split_whitespace(std::string_view s);

std::string_view trim(std::string_view s);
bool is_blank(std::string_view s);

std::string to_lower_ascii(std::string_view s);

std::size_t codepoint_count(std::string_view s);

}  // namespace text
}  // namespace arabdoc
