#include "html_lexer.hpp"

#include "arabdoc/text.hpp"

#include <array>
#include <cstdint>

namespace arabdoc::detail {

namespace {

bool name_char(char c) {
  return ascii_alpha(c) || (c >= '0' && c <= '9') || c == '-' || c == '_' || c == ':';
}

bool space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f'; }

}  // namespace

LexResult lex_tag(std::string_view s, std::size_t pos) {
  LexResult r;
  const auto n = s.size();
  if (pos >= n || s[pos] != '<') return r;

  if (s.substr(pos, 4) == "<!--") {
    const auto close = s.find("-->", pos + 4);
    r.status = LexStatus::Tag;
    r.token.kind = TagKind::Comment;
    r.token.begin = pos;
    r.token.end = close == std::string_view::npos ? n : close + 3;
    return r;
  }

  std::size_t i = pos + 1;
  TagKind kind = TagKind::Start;
  if (i < n && s[i] == '/') {
    kind = TagKind::End;
    ++i;
  }
  if (i >= n || !ascii_alpha(s[i])) return r;

  const std::size_t name_begin = i;
  while (i < n && name_char(s[i])) ++i;
  TagToken tok;
  tok.kind = kind;
  tok.begin = pos;
  tok.name = text::to_lower_ascii(s.substr(name_begin, i - name_begin));

  // A tag name must be followed by whitespace, '/' or '>'.
  if (i < n && !space(s[i]) && s[i] != '/' && s[i] != '>' && s[i] != '<') return r;

  while (i < n) {
    while (i < n && space(s[i])) ++i;
    if (i >= n) break;
    if (s[i] == '>') {
      tok.end = i + 1;
      r.status = LexStatus::Tag;
      r.token = std::move(tok);
      return r;
    }
    if (s[i] == '/' && i + 1 < n && s[i + 1] == '>') {
      tok.self_closing = true;
      tok.end = i + 2;
      r.status = LexStatus::Tag;
      r.token = std::move(tok);
      return r;
    }
    if (s[i] == '<' || s[i] == '\n') break;
    // attribute name
    const std::size_t an = i;
    while (i < n && !space(s[i]) && s[i] != '=' && s[i] != '>' && s[i] != '<' &&
           !(s[i] == '/' && i + 1 < n && s[i + 1] == '>')) {
      ++i;
    }
    std::string attr_name = text::to_lower_ascii(s.substr(an, i - an));
    if (attr_name.empty()) {
      ++i;  // stray '/' or similar
      continue;
    }
    while (i < n && space(s[i])) ++i;
    std::string value;
    if (i < n && s[i] == '=') {
      ++i;
      while (i < n && space(s[i])) ++i;
      if (i < n && (s[i] == '"' || s[i] == '\'')) {
        const char q = s[i++];
        const auto close = s.find(q, i);
        if (close == std::string_view::npos) {
          i = n;
          break;
        }
        value = std::string(s.substr(i, close - i));
        i = close + 1;
      } else {
        const std::size_t vb = i;
        while (i < n && !space(s[i]) && s[i] != '>' && s[i] != '<') ++i;
        value = std::string(s.substr(vb, i - vb));
      }
    }
    tok.attrs.emplace_back(std::move(attr_name), std::move(value));
  }

  r.status = LexStatus::Unterminated;
  tok.end = name_begin + (tok.name.size());
  r.token = std::move(tok);
  return r;
}

bool is_void_element(std::string_view name) {
  static constexpr std::array<std::string_view, 14> kVoid = {
      "area", "base", "br", "col", "embed", "hr", "img",
      "input", "link", "meta", "param", "source", "track", "wbr"};
  for (auto v : kVoid) {
    if (v == name) return true;
  }
  return false;
}

std::string decode_entities(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '&') {
      out.push_back(s[i++]);
      continue;
    }
    const auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(s[i++]);
      continue;
    }
    const auto ent = s.substr(i + 1, semi - i - 1);
    std::optional<char32_t> cp;
    if (ent == "amp") cp = U'&';
    else if (ent == "lt") cp = U'<';
    else if (ent == "gt") cp = U'>';
    else if (ent == "quot") cp = U'"';
    else if (ent == "apos") cp = U'\'';
    else if (ent == "nbsp") cp = U' ';
    else if (ent.size() > 1 && ent[0] == '#') {
      std::uint32_t v = 0;
      bool ok = true;
      if (ent[1] == 'x' || ent[1] == 'X') {
        if (ent.size() == 2) ok = false;
        for (std::size_t k = 2; ok && k < ent.size(); ++k) {
          const char c = ent[k];
          v *= 16;
          if (c >= '0' && c <= '9') v += c - '0';
          else if (c >= 'a' && c <= 'f') v += c - 'a' + 10;
          else if (c >= 'A' && c <= 'F') v += c - 'A' + 10;
          else ok = false;
          if (v > 0x10FFFF) ok = false;
        }
      } else {
        for (std::size_t k = 1; ok && k < ent.size(); ++k) {
          const char c = ent[k];
          if (c < '0' || c > '9') ok = false;
          else v = v * 10 + (c - '0');
          if (v > 0x10FFFF) ok = false;
        }
      }
      if (ok && v != 0 && !(v >= 0xD800 && v <= 0xDFFF)) cp = static_cast<char32_t>(v);
    }
    if (!cp) {
      out.push_back(s[i++]);
      continue;
    }
    text::append_utf8(out, *cp);
    i = semi + 1;
  }
  return out;
}

std::string escape_text(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

std::size_t find_table_start(std::string_view s, std::size_t from) {
  for (auto i = s.find('<', from); i != std::string_view::npos; i = s.find('<', i + 1)) {
    const auto lr = lex_tag(s, i);
    if (lr.status == LexStatus::NotATag) continue;
    if (lr.token.kind == TagKind::Start && lr.token.name == "table") return i;
  }
  return std::string_view::npos;
}

std::size_t find_table_end(std::string_view s, std::size_t start) {
  int depth = 0;
  std::size_t i = start;
  while (i < s.size()) {
    i = s.find('<', i);
    if (i == std::string_view::npos) break;
    const auto lr = lex_tag(s, i);
    if (lr.status != LexStatus::Tag) {
      ++i;
      continue;
    }
    const auto& t = lr.token;
    if (t.kind == TagKind::Start && t.name == "table" && !t.self_closing) {
      ++depth;
    } else if (t.kind == TagKind::End && t.name == "table") {
      if (--depth == 0) return t.end;
    }
    i = t.end;
  }
  return std::string_view::npos;
}

}  // namespace arabdoc::detail
