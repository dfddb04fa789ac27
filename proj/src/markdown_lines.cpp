#include "markdown_lines.hpp"

#include "arabdoc/text.hpp"

namespace arabdoc::detail {

std::optional<AtxHeader> match_atx_header(std::string_view line) {
  std::string_view t = text::trim(line);
  int level = 0;
  while (level < static_cast<int>(t.size()) && t[level] == '#') ++level;
  if (level < 1 || level > 6) return std::nullopt;
  std::string_view rest = t.substr(level);
  if (!rest.empty() && rest[0] != ' ' && rest[0] != '\t') return std::nullopt;
  rest = text::trim(rest);
  // Optional closing sequence: a run of '#' preceded by a space, or the whole
  // remaining content.
  std::size_t e = rest.size();
  while (e > 0 && rest[e - 1] == '#') --e;
  if (e == 0) {
    rest = {};
  } else if (e < rest.size() && (rest[e - 1] == ' ' || rest[e - 1] == '\t')) {
    rest = text::trim(rest.substr(0, e));
  }
  return AtxHeader{level, std::string(rest)};
}

std::string write_atx(int level, std::string_view text) {
  std::string h(static_cast<std::size_t>(level), '#');
  if (!text.empty()) {
    h.push_back(' ');
    h += text;
    if (text.back() == '#') h += " #";
  }
  return h;
}

bool is_thematic_break(std::string_view line) {
  const std::string_view t = text::trim(line);
  if (t.empty()) return false;
  const char mark = t[0];
  if (mark != '-' && mark != '*' && mark != '_') return false;
  int count = 0;
  for (char c : t) {
    if (c == mark) ++count;
    else if (c != ' ' && c != '\t') return false;
  }
  return count >= 3;
}

std::optional<int> setext_level(std::string_view line) {
  const std::string_view t = text::trim(line);
  if (t.empty()) return std::nullopt;
  const char mark = t[0];
  if (mark != '=' && mark != '-') return std::nullopt;
  for (char c : t) {
    if (c != mark) return std::nullopt;
  }
  return mark == '=' ? 1 : 2;
}

std::vector<std::string> split_table_row(std::string_view line) {
  std::string_view t = text::trim(line);
  if (!t.empty() && t[0] == '|') t.remove_prefix(1);
  if (!t.empty() && t.back() == '|' && !(t.size() >= 2 && t[t.size() - 2] == '\\')) {
    t.remove_suffix(1);
  }
  std::vector<std::string> cells;
  std::string cur;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const char c = t[i];
    if (c == '\\' && i + 1 < t.size() && t[i + 1] == '|') {
      cur.push_back('|');
      ++i;
    } else if (c == '|') {
      cells.emplace_back(text::trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  cells.emplace_back(text::trim(cur));
  return cells;
}

std::optional<std::size_t> delimiter_columns(std::string_view line) {
  const std::string_view t = text::trim(line);
  if (t.find('|') == std::string_view::npos) return std::nullopt;
  const auto cells = split_table_row(t);
  for (const auto& c : cells) {
    std::string_view v = c;
    if (!v.empty() && v.front() == ':') v.remove_prefix(1);
    if (!v.empty() && v.back() == ':') v.remove_suffix(1);
    if (v.empty()) return std::nullopt;
    for (char ch : v) {
      if (ch != '-') return std::nullopt;
    }
  }
  return cells.size();
}

bool opens_pipe_table(std::string_view line, std::string_view next) {
  if (line.find('|') == std::string_view::npos) return false;
  const auto cols = delimiter_columns(next);
  return cols && *cols == split_table_row(line).size();
}

std::string escape_cell(std::string_view cell) {
  std::string out;
  for (char c : cell) {
    if (c == '|') out += "\\|";
    else out.push_back(c);
  }
  return out;
}

}  // namespace arabdoc::detail
