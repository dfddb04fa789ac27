#include "arabdoc/normalize.hpp"

#include "arabdoc/error.hpp"
#include "html_lexer.hpp"
#include "markdown_lines.hpp"

#include <map>

namespace arabdoc {

void NormalizeConfig::validate() const {
  if (!detail::is_thematic_break(hr_normal_form) ||
      hr_normal_form.find('\n') != std::string::npos) {
    throw Error(ErrorCode::InvalidConfig,
                "hr_normal_form '" + hr_normal_form + "' is not a horizontal rule");
  }
}

namespace {

using detail::LexStatus;
using detail::TagKind;

std::vector<std::string_view> split_lines(std::string_view s) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (true) {
    const auto nl = s.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(s.substr(start));
      break;
    }
    lines.push_back(s.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

std::string rtrim(std::string_view s) {
  std::size_t e = s.size();
  while (e > 0 && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
  return std::string(s.substr(0, e));
}

// Table regions are swapped for single-line placeholders built from a
// private-use codepoint that does not occur in the input.
class Placeholders {
public:
  explicit Placeholders(std::string_view input) {
    const auto cps = text::decode_utf8(input);
    char32_t s = 0xF0000;
    while (cps.find(s) != std::u32string::npos) ++s;
    sentinel_.clear();
    text::append_utf8(sentinel_, s);
  }

  std::string make(std::size_t index) const {
    return sentinel_ + std::to_string(index) + sentinel_;
  }

  /// Index if `line` (trimmed) is exactly one placeholder.
  std::optional<std::size_t> match(std::string_view line) const {
    const auto t = text::trim(line);
    if (t.size() < 2 * sentinel_.size() + 1) return std::nullopt;
    if (t.substr(0, sentinel_.size()) != sentinel_) return std::nullopt;
    if (t.substr(t.size() - sentinel_.size()) != sentinel_) return std::nullopt;
    const auto digits = t.substr(sentinel_.size(), t.size() - 2 * sentinel_.size());
    std::size_t v = 0;
    for (char c : digits) {
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + static_cast<std::size_t>(c - '0');
    }
    return v;
  }

  const std::string& sentinel() const { return sentinel_; }

private:
  std::string sentinel_;
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_block_tag(std::string_view n) {
  static const std::set<std::string_view> block = {
      "address", "article", "aside",  "blockquote", "body",   "br",     "caption", "center",
      "dd",      "div",     "dl",     "dt",         "figcaption", "figure", "footer", "h1",
      "h2",      "h3",      "h4",     "h5",         "h6",     "head",   "header",  "hr",
      "html",    "li",      "main",   "nav",        "ol",     "p",      "pre",     "section",
      "tbody",   "td",      "tfoot",  "th",         "thead",  "title",  "tr",      "ul"};
  return block.contains(n);
}

struct Segmented {
  std::string work;                 // outside text with table placeholders
  std::vector<std::string> tables;  // raw table regions
};

// Step 1, plus isolation of table regions onto their own lines.
Segmented strip_outside_tags(std::string_view s, const NormalizeConfig& cfg,
                             const Placeholders& ph, std::vector<std::string>& warnings) {
  Segmented seg;
  std::set<std::string> keep = cfg.special_tags;
  keep.insert(cfg.model_tags_to_remove.begin(), cfg.model_tags_to_remove.end());

  auto strip = [&](std::string_view part) {
    std::string out;
    std::size_t i = 0;
    while (i < part.size()) {
      if (part[i] != '<') {
        out.push_back(part[i++]);
        continue;
      }
      const auto lr = detail::lex_tag(part, i);
      if (lr.status == LexStatus::NotATag) {
        out.push_back(part[i++]);
        continue;
      }
      if (lr.status == LexStatus::Unterminated) {
        warnings.push_back("unterminated <" + lr.token.name + " tag stripped");
        i = lr.token.end;
        continue;
      }
      const auto& tok = lr.token;
      if (tok.kind != TagKind::Comment && keep.contains(tok.name)) {
        out.append(part.substr(i, tok.end - i));
      } else if (tok.kind != TagKind::Comment && is_block_tag(tok.name) && !out.empty() &&
                 !is_space(out.back()) && tok.end < part.size() && !is_space(part[tok.end])) {
        out.push_back(' ');  // "<h1>a</h1><p>b" must not glue a and b together
      }
      i = tok.end;
    }
    return out;
  };

  auto ends_line = [](const std::string& w) {
    const auto nl = w.rfind('\n');
    const std::string_view tail =
        nl == std::string::npos ? std::string_view(w) : std::string_view(w).substr(nl + 1);
    return text::is_blank(tail);
  };

  std::size_t pos = 0;
  bool after_table = false;
  while (pos <= s.size()) {
    const auto start = detail::find_table_start(s, pos);
    std::string outside =
        strip(s.substr(pos, (start == std::string_view::npos ? s.size() : start) - pos));
    if (after_table) {
      const auto nl = outside.find('\n');
      const std::string_view head = std::string_view(outside).substr(0, nl);
      if (!text::is_blank(head)) outside.insert(0, "\n");
    }
    seg.work += outside;
    if (start == std::string_view::npos) break;

    auto end = detail::find_table_end(s, start);
    if (end == std::string_view::npos) {
      warnings.push_back("unclosed <table> region");
      end = s.size();
    }
    if (!ends_line(seg.work)) seg.work.push_back('\n');
    seg.work += ph.make(seg.tables.size());
    seg.tables.emplace_back(s.substr(start, end - start));
    after_table = true;
    pos = end;
  }
  return seg;
}

// Steps 3 and 4 in one pass over the lines of the placeholder text.
std::string normalize_lines(const std::string& work, const NormalizeConfig& cfg,
                            const Placeholders& ph) {
  const auto lines = split_lines(work);
  std::set<std::string> tag_names = cfg.special_tags;
  tag_names.insert(cfg.model_tags_to_remove.begin(), cfg.model_tags_to_remove.end());

  std::vector<std::string> out;
  std::vector<std::string> para;
  auto flush = [&] {
    for (auto& l : para) out.push_back(std::move(l));
    para.clear();
  };
  auto atx = detail::write_atx;

  std::size_t i = 0;
  while (i < lines.size()) {
    const std::string_view line = lines[i];
    const std::string_view t = text::trim(line);

    if (text::is_blank(line)) {
      flush();
      out.emplace_back(line);
      ++i;
      continue;
    }
    if (ph.match(line)) {
      flush();
      out.emplace_back(line);
      ++i;
      continue;
    }
    if (!t.empty() && t[0] == '<') {
      const auto lr = detail::lex_tag(t, 0);
      if (lr.status == LexStatus::Tag && lr.token.kind == TagKind::Start &&
          tag_names.contains(lr.token.name)) {
        flush();
        // Consume the whole element, which may span lines.
        std::size_t last = i;
        std::string_view rest = t.substr(lr.token.end);
        if (!lr.token.self_closing && !detail::is_void_element(lr.token.name)) {
          const std::string close = "</" + lr.token.name;
          std::size_t k = i;
          std::string_view hay = rest;
          while (true) {
            const auto lower = text::to_lower_ascii(hay);
            const auto at = lower.find(close);
            if (at != std::string::npos) {
              const auto gt = hay.find('>', at);
              rest = gt == std::string_view::npos ? std::string_view{} : hay.substr(gt + 1);
              last = k;
              break;
            }
            if (++k >= lines.size()) {
              rest = {};
              last = i;
              break;
            }
            hay = lines[k];
          }
        }
        for (std::size_t k = i; k < last; ++k) out.emplace_back(lines[k]);
        if (text::is_blank(rest)) {
          out.emplace_back(lines[last]);
        } else {
          para.emplace_back(lines[last]);
        }
        i = last + 1;
        continue;
      }
    }
    if (auto h = detail::match_atx_header(t)) {
      flush();
      out.push_back(atx(h->level, h->text));
      ++i;
      continue;
    }
    if (!para.empty()) {
      if (auto level = detail::setext_level(t)) {
        std::string joined;
        for (const auto& l : para) {
          const auto pt = text::trim(l);
          if (pt.empty()) continue;
          if (!joined.empty()) joined.push_back(' ');
          joined += pt;
        }
        para.clear();
        out.push_back(atx(*level, joined));
        ++i;
        continue;
      }
    }
    if (detail::is_thematic_break(t)) {
      const bool under_text = !para.empty();
      flush();
      if (under_text) out.emplace_back();
      out.push_back(cfg.hr_normal_form);
      ++i;
      continue;
    }
    if (i + 1 < lines.size() && detail::opens_pipe_table(t, lines[i + 1])) {
      flush();
      out.emplace_back(lines[i]);
      out.emplace_back(lines[i + 1]);
      i += 2;
      while (i < lines.size()) {
        const auto rt = text::trim(lines[i]);
        if (text::is_blank(lines[i]) || rt.find('|') == std::string_view::npos ||
            ph.match(lines[i]) || detail::match_atx_header(rt) ||
            detail::is_thematic_break(rt) || (!rt.empty() && rt[0] == '<')) {
          break;
        }
        out.emplace_back(lines[i]);
        ++i;
      }
      continue;
    }
    para.emplace_back(line);
    ++i;
  }
  flush();
  return join_lines(out);
}

// Step 5.
std::string unify_table_formatting(std::string_view table) {
  std::string out;
  std::size_t i = 0;
  while (i < table.size()) {
    if (table[i] != '<') {
      out.push_back(table[i++]);
      continue;
    }
    const auto lr = detail::lex_tag(table, i);
    if (lr.status != LexStatus::Tag || lr.token.kind == TagKind::Comment) {
      out.push_back(table[i++]);
      continue;
    }
    const auto& tok = lr.token;
    const char* repl = nullptr;
    if (tok.name == "strong" || tok.name == "b") repl = "b";
    else if (tok.name == "em" || tok.name == "i") repl = "i";
    if (repl) {
      out += tok.kind == TagKind::End ? "</" : "<";
      out += repl;
      out += '>';
    } else {
      out.append(table.substr(i, tok.end - i));
    }
    i = tok.end;
  }
  return out;
}

// Step 6.
std::string remove_model_tags(std::string_view s, const NormalizeConfig& cfg,
                              std::vector<std::string>& warnings) {
  std::string out;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != '<') {
      out.push_back(s[i++]);
      continue;
    }
    const auto lr = detail::lex_tag(s, i);
    if (lr.status != LexStatus::Tag || !cfg.model_tags_to_remove.contains(lr.token.name)) {
      out.push_back(s[i++]);
      continue;
    }
    const auto& tok = lr.token;
    if (tok.kind == TagKind::End || tok.self_closing) {
      if (tok.kind == TagKind::End) warnings.push_back("stray </" + tok.name + "> removed");
      i = tok.end;
      continue;
    }
    // Find the matching close tag.
    std::size_t j = tok.end;
    std::size_t close_end = std::string_view::npos;
    while (j < s.size()) {
      j = s.find("</", j);
      if (j == std::string_view::npos) break;
      const auto cl = detail::lex_tag(s, j);
      if (cl.status == LexStatus::Tag && cl.token.kind == TagKind::End &&
          cl.token.name == tok.name) {
        close_end = cl.token.end;
        break;
      }
      j += 2;
    }
    // A second opening tag before the close means this one was never closed.
    if (close_end != std::string_view::npos) {
      for (auto k = s.find('<', tok.end); k < j; k = s.find('<', k + 1)) {
        const auto op = detail::lex_tag(s, k);
        if (op.status == LexStatus::Tag && op.token.kind == TagKind::Start &&
            op.token.name == tok.name) {
          close_end = std::string_view::npos;
          break;
        }
      }
    }
    if (close_end == std::string_view::npos) {
      warnings.push_back("unclosed <" + tok.name + "> removed without content");
      i = tok.end;
      continue;
    }
    i = close_end;
  }
  return out;
}

std::string cleanup(const std::string& work, const Placeholders& ph) {
  std::vector<std::string> lines;
  for (auto line : split_lines(work)) {
    std::string l = rtrim(line);
    const auto t = text::trim(l);
    if (!ph.match(l)) {
      if (auto h = detail::match_atx_header(t)) {
        l = detail::write_atx(h->level, h->text);
      }
    }
    lines.push_back(std::move(l));
  }
  std::string out = join_lines(lines);
  const auto b = out.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = out.find_last_not_of(" \t\r\n");
  return out.substr(b, e - b + 1);
}

}  // namespace

StandardizeResult standardize_with_warnings(std::string_view input, const NormalizeConfig& cfg) {
  cfg.validate();
  StandardizeResult result;
  const Placeholders ph(input);

  Segmented seg = strip_outside_tags(input, cfg, ph, result.warnings);
  // Model tags go before line classification so their removal cannot expose
  // a new rule or header on the next run.
  std::string work = remove_model_tags(seg.work, cfg, result.warnings);
  work = normalize_lines(work, cfg, ph);
  for (auto& t : seg.tables) t = unify_table_formatting(t);
  for (auto& t : seg.tables) t = remove_model_tags(t, cfg, result.warnings);
  work = cleanup(work, ph);

  // Substitute the tables back.
  std::string out;
  std::size_t i = 0;
  const auto& sen = ph.sentinel();
  while (i < work.size()) {
    const auto a = work.find(sen, i);
    if (a == std::string::npos) {
      out.append(work, i, std::string::npos);
      break;
    }
    const auto b = work.find(sen, a + sen.size());
    out.append(work, i, a - i);
    const auto idx = std::stoul(work.substr(a + sen.size(), b - a - sen.size()));
    out += seg.tables.at(idx);
    i = b + sen.size();
  }
  result.text = std::move(out);
  return result;
}

std::string standardize(std::string_view text, const NormalizeConfig& cfg) {
  return standardize_with_warnings(text, cfg).text;
}

ConvertResult convert_md_tables(const Document& doc) {
  ConvertResult result;
  result.document.source_kind = doc.source_kind;
  std::size_t table_index = 0;
  for (const auto& block : doc.blocks) {
    const auto* table = std::get_if<Table>(&block);
    if (!table || table->syntax != TableSyntax::markdown) {
      if (table) ++table_index;
      result.document.blocks.push_back(block);
      continue;
    }
    Table html = *table;
    html.syntax = TableSyntax::html;
    const std::size_t cols = table->column_count;
    html.column_count = 0;
    for (std::size_t r = 0; r < html.tree.children.size(); ++r) {
      auto& tr = html.tree.children[r];
      const std::size_t n = tr.children.size();
      if (n < cols) {
        result.warnings.push_back(
            std::string(to_string(ErrorCode::MalformedMdTable)) + ": table " +
            std::to_string(table_index) + " row " + std::to_string(r) + " has " +
            std::to_string(n) + " cells, padded to " + std::to_string(cols));
        while (tr.children.size() < cols) tr.children.push_back(HtmlTree::element("td"));
      } else if (n > cols) {
        result.warnings.push_back(
            std::string(to_string(ErrorCode::MalformedMdTable)) + ": table " +
            std::to_string(table_index) + " row " + std::to_string(r) + " has " +
            std::to_string(n) + " cells, delimiter declares " + std::to_string(cols));
      }
    }
    ++table_index;
    result.document.blocks.emplace_back(std::move(html));
  }
  return result;
}

std::string normalize_arabic(std::string_view input, const NormalizeConfig& cfg) {
  const std::string unified = text::normalize_unicode(input, cfg.unicode_form);
  std::string out;
  std::string line;
  bool pending_space = false;
  auto end_line = [&] {
    out += line;
    line.clear();
    pending_space = false;
  };
  for (char32_t cp : text::decode_utf8(unified)) {
    if (cp == U'\n') {
      end_line();
      out.push_back('\n');
      continue;
    }
    if (cfg.strip_diacritics && text::is_combining_mark(cp)) continue;
    if (text::is_whitespace(cp)) {
      pending_space = !line.empty();
      continue;
    }
    if (pending_space) {
      line.push_back(' ');
      pending_space = false;
    }
    text::append_utf8(line, cp);
  }
  end_line();
  return out;
}

NormalizedOutput normalize_output(std::string_view raw, const NormalizeConfig& cfg) {
  NormalizedOutput result;
  const std::string unified = normalize_arabic(raw, cfg);
  auto std_result = standardize_with_warnings(unified, cfg);
  result.warnings = std::move(std_result.warnings);
  std_result.text = normalize_arabic(std_result.text, cfg);

  ParseOptions popts;
  popts.special_tags = cfg.special_tags;
  auto parsed = parse_markdown_lenient(std_result.text, popts);
  result.warnings.insert(result.warnings.end(), parsed.warnings.begin(), parsed.warnings.end());

  auto converted = convert_md_tables(parsed.document);
  result.warnings.insert(result.warnings.end(), converted.warnings.begin(),
                         converted.warnings.end());
  result.document = std::move(converted.document);
  result.text = serialize(result.document, SerializeOptions{cfg.hr_normal_form});
  return result;
}

}  // namespace arabdoc
