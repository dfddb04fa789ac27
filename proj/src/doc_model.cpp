#include "arabdoc/doc_model.hpp"

#include "arabdoc/error.hpp"
#include "arabdoc/text.hpp"
#include "html_lexer.hpp"
#include "markdown_lines.hpp"

#include <algorithm>

namespace arabdoc {

std::set<std::string> default_special_tags() { return {"page_number", "watermark", "img"}; }

bool block_equal(const Document& a, const Document& b) { return a.blocks == b.blocks; }

std::vector<EmphasisSpan> find_emphasis(std::string_view s) {
  std::vector<EmphasisSpan> spans;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s.compare(i, 2, "**") == 0 || s.compare(i, 2, "__") == 0) {
      const auto marker = s.substr(i, 2);
      const auto close = s.find(marker, i + 2);
      if (close != std::string_view::npos && close > i + 2) {
        spans.push_back({EmphasisKind::bold, i + 2, close});
        i = close + 2;
        continue;
      }
      i += 2;
      continue;
    }
    if (s[i] == '*' || s[i] == '_') {
      const char m = s[i];
      std::size_t close = i + 1;
      while (close < s.size()) {
        close = s.find(m, close);
        if (close == std::string_view::npos) break;
        // A doubled marker belongs to bold emphasis, skip it.
        if (close + 1 < s.size() && s[close + 1] == m) {
          close += 2;
          continue;
        }
        break;
      }
      if (close != std::string_view::npos && close < s.size() && close > i + 1 &&
          s[i + 1] != ' ') {
        spans.push_back({EmphasisKind::italic, i + 1, close});
        i = close + 1;
        continue;
      }
    }
    ++i;
  }
  return spans;
}

namespace {

bool is_special_tag_start(std::string_view trimmed, const std::set<std::string>& tags,
                          detail::TagToken* out) {
  if (trimmed.empty() || trimmed[0] != '<') return false;
  const auto lr = detail::lex_tag(trimmed, 0);
  if (lr.status != detail::LexStatus::Tag || lr.token.kind != detail::TagKind::Start) {
    return false;
  }
  if (!tags.contains(lr.token.name)) return false;
  if (out) *out = lr.token;
  return true;
}

std::size_t find_close_tag(std::string_view s, std::size_t from, std::string_view name) {
  for (auto i = s.find("</", from); i != std::string_view::npos; i = s.find("</", i + 2)) {
    const auto lr = detail::lex_tag(s, i);
    if (lr.status == detail::LexStatus::Tag && lr.token.kind == detail::TagKind::End &&
        lr.token.name == name) {
      return i;
    }
  }
  return std::string_view::npos;
}

class MarkdownParser {
public:
  MarkdownParser(std::string_view src, const ParseOptions& opts, bool strict)
      : src_(src), opts_(opts), strict_(strict) {
    doc_.source_kind = opts.source_kind;
  }

  ParseResult run() {
    while (pos_ < src_.size()) step();
    flush_paragraph();
    return {std::move(doc_), std::move(warnings_)};
  }

private:
  std::string_view line_at(std::size_t pos, std::size_t* next) const {
    const auto nl = src_.find('\n', pos);
    std::size_t end = nl == std::string_view::npos ? src_.size() : nl;
    std::size_t after = nl == std::string_view::npos ? src_.size() : nl + 1;
    if (line_cap_ > pos && line_cap_ < end) end = after = line_cap_;
    if (next) *next = after;
    std::string_view line = src_.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  }

  void step() {
    std::size_t next = 0;
    const std::string_view line = line_at(pos_, &next);
    const std::string_view t = text::trim(line);

    if (text::is_blank(line)) {
      flush_paragraph();
      pos_ = next;
      return;
    }

    const auto tpos = detail::find_table_start(line);
    if (tpos != std::string_view::npos) {
      if (!text::is_blank(line.substr(0, tpos))) {
        // Text in front of the table is classified as a line of its own.
        line_cap_ = pos_ + tpos;
        step();
        line_cap_ = std::string_view::npos;
        return;
      }
      flush_paragraph();
      parse_table_region(pos_ + tpos);
      return;
    }

    detail::TagToken tag;
    if (is_special_tag_start(t, opts_.special_tags, &tag)) {
      flush_paragraph();
      parse_special_tag(pos_ + static_cast<std::size_t>(t.data() - line.data()), tag, next);
      return;
    }

    if (auto h = detail::match_atx_header(t)) {
      flush_paragraph();
      doc_.blocks.emplace_back(Header{h->level, std::move(h->text)});
      pos_ = next;
      return;
    }

    if (!para_.empty()) {
      if (auto level = detail::setext_level(t)) {
        std::string joined;
        for (const auto& l : para_) {
          if (!joined.empty()) joined.push_back(' ');
          joined += l;
        }
        para_.clear();
        doc_.blocks.emplace_back(Header{*level, std::move(joined)});
        pos_ = next;
        return;
      }
    }

    if (detail::is_thematic_break(t)) {
      flush_paragraph();
      doc_.blocks.emplace_back(HorizontalRule{});
      pos_ = next;
      return;
    }

    if (next < src_.size()) {
      std::size_t after = 0;
      auto second = line_at(next, &after);
      if (const auto cut = detail::find_table_start(second); cut != std::string_view::npos) {
        second = second.substr(0, cut);
        after = next + cut;
      }
      if (detail::opens_pipe_table(t, second)) {
        flush_paragraph();
        parse_pipe_table(t, second, after);
        return;
      }
    }

    para_.emplace_back(t);
    pos_ = next;
  }

  void flush_paragraph() {
    if (para_.empty()) return;
    Paragraph p;
    for (const auto& l : para_) {
      if (!p.text.empty()) p.text.push_back('\n');
      p.text += l;
    }
    p.spans = find_emphasis(p.text);
    para_.clear();
    doc_.blocks.emplace_back(std::move(p));
  }

  void parse_table_region(std::size_t start) {
    const auto end = detail::find_table_end(src_, start);
    const std::size_t stop = end == std::string_view::npos ? src_.size() : end;
    const auto region = src_.substr(start, stop - start);
    try {
      if (end == std::string_view::npos) {
        throw Error(ErrorCode::UnbalancedHtml, "unclosed <table>");
      }
      doc_.blocks.emplace_back(Table{parse_html_table(region), TableSyntax::html, 0});
    } catch (const Error& e) {
      if (strict_) throw;
      warnings_.push_back(std::string("table treated as text: ") + e.what());
      Paragraph p;
      p.text = std::string(text::trim(region));
      p.spans = find_emphasis(p.text);
      doc_.blocks.emplace_back(std::move(p));
    }
    pos_ = stop;
  }

  void parse_special_tag(std::size_t start, const detail::TagToken& tag, std::size_t line_next) {
    const std::size_t open_end = start + tag.end;
    if (tag.self_closing) {
      doc_.blocks.emplace_back(SpecialTag{tag.name, {}});
      pos_ = open_end;
      return;
    }
    std::size_t close = find_close_tag(src_, open_end, tag.name);
    if (detail::is_void_element(tag.name) && close != std::string_view::npos) {
      // Void elements such as <img> only take content when closed on the
      // same line.
      const auto nl = src_.find('\n', open_end);
      if (nl != std::string_view::npos && nl < close) close = std::string_view::npos;
    }
    if (close == std::string_view::npos) {
      if (!detail::is_void_element(tag.name)) {
        warnings_.push_back("unclosed <" + tag.name + "> tag");
        const auto content = text::trim(src_.substr(open_end, line_next - open_end));
        doc_.blocks.emplace_back(SpecialTag{tag.name, std::string(content)});
        pos_ = line_next;
        return;
      }
      doc_.blocks.emplace_back(SpecialTag{tag.name, {}});
      pos_ = open_end;
      return;
    }
    const auto content = text::trim(src_.substr(open_end, close - open_end));
    doc_.blocks.emplace_back(SpecialTag{tag.name, std::string(content)});
    pos_ = close + tag.name.size() + 3;
  }

  void parse_pipe_table(std::string_view header, std::string_view delimiter, std::size_t after) {
    Table table;
    table.syntax = TableSyntax::markdown;
    table.column_count = *detail::delimiter_columns(delimiter);
    table.tree = HtmlTree::element("table");
    auto add_row = [&](std::string_view row) {
      HtmlTree tr = HtmlTree::element("tr");
      for (auto& cell : detail::split_table_row(row)) {
        HtmlTree td = HtmlTree::element("td");
        if (!cell.empty()) td.children.push_back(HtmlTree::text_node(std::move(cell)));
        tr.children.push_back(std::move(td));
      }
      table.tree.children.push_back(std::move(tr));
    };
    add_row(header);
    pos_ = after;
    while (pos_ < src_.size()) {
      std::size_t next = 0;
      const auto line = line_at(pos_, &next);
      const auto t = text::trim(line);
      if (text::is_blank(line) || t.find('|') == std::string_view::npos ||
          detail::find_table_start(line) != std::string_view::npos ||
          detail::match_atx_header(t) || detail::is_thematic_break(t) ||
          is_special_tag_start(t, opts_.special_tags, nullptr)) {
        break;
      }
      add_row(t);
      pos_ = next;
    }
    doc_.blocks.emplace_back(std::move(table));
  }

  std::string_view src_;
  const ParseOptions& opts_;
  bool strict_;
  std::size_t pos_ = 0;
  std::size_t line_cap_ = std::string_view::npos;
  std::vector<std::string> para_;
  Document doc_;
  std::vector<std::string> warnings_;
};

}  // namespace

Document parse_markdown(std::string_view text, const ParseOptions& options) {
  return MarkdownParser(text, options, true).run().document;
}

ParseResult parse_markdown_lenient(std::string_view text, const ParseOptions& options) {
  return MarkdownParser(text, options, false).run();
}

namespace {

HtmlTree element_with_text(std::string label, const std::string& content) {
  HtmlTree node = HtmlTree::element(std::move(label));
  if (!content.empty()) node.children.push_back(HtmlTree::text_node(content));
  return node;
}

struct BlockToTree {
  HtmlTree operator()(const Paragraph& p) const { return element_with_text("p", p.text); }
  HtmlTree operator()(const Header& h) const {
    return element_with_text("h" + std::to_string(h.level), h.text);
  }
  HtmlTree operator()(const HorizontalRule&) const { return HtmlTree::element("hr"); }
  HtmlTree operator()(const Table& t) const { return t.tree; }
  HtmlTree operator()(const SpecialTag& s) const { return element_with_text(s.name, s.content); }
};

void write_pipe_table(const Table& t, std::string& out) {
  const auto row_line = [](const HtmlTree& tr) {
    std::string line = "|";
    for (const auto& cell : tr.children) {
      line += ' ';
      line += detail::escape_cell(inner_text(cell));
      line += " |";
    }
    return line;
  };
  bool first = true;
  for (const auto& tr : t.tree.children) {
    if (!first) out.push_back('\n');
    out += row_line(tr);
    if (first) {
      out += "\n|";
      const std::size_t cols = std::max<std::size_t>(t.column_count, 1);
      for (std::size_t i = 0; i < cols; ++i) out += " --- |";
    }
    first = false;
  }
}

struct BlockWriter {
  std::string& out;
  const SerializeOptions& opts;

  void operator()(const Paragraph& p) const { out += p.text; }
  void operator()(const Header& h) const {
    out += detail::write_atx(h.level, h.text);
  }
  void operator()(const HorizontalRule&) const { out += opts.horizontal_rule; }
  void operator()(const Table& t) const {
    if (t.syntax == TableSyntax::markdown) write_pipe_table(t, out);
    else out += to_html(t.tree);
  }
  void operator()(const SpecialTag& s) const {
    if (s.content.empty() && detail::is_void_element(s.name)) {
      out += "<" + s.name + ">";
      return;
    }
    out += "<" + s.name + ">" + s.content + "</" + s.name + ">";
  }
};

void table_text(const HtmlTree& t, std::string& out) {
  if (t.label == "tr") {
    bool first = true;
    for (const auto& c : t.children) {
      if (!first) out.push_back(' ');
      out += inner_text(c);
      first = false;
    }
    out.push_back('\n');
    return;
  }
  for (const auto& c : t.children) table_text(c, out);
}

}  // namespace

HtmlTree document_to_tree(const Document& doc, TreeScope scope) {
  HtmlTree root = HtmlTree::element("doc");
  for (const auto& b : doc.blocks) {
    if (scope == TreeScope::tables && !std::holds_alternative<Table>(b)) continue;
    root.children.push_back(std::visit(BlockToTree{}, b));
  }
  return root;
}

std::string serialize(const Document& doc, const SerializeOptions& options) {
  std::string out;
  for (const auto& b : doc.blocks) {
    if (!out.empty()) out += "\n\n";
    std::visit(BlockWriter{out, options}, b);
  }
  return out;
}

std::string plain_text(const Document& doc) {
  std::string out;
  auto add = [&](std::string_view s) {
    if (s.empty()) return;
    if (!out.empty()) out.push_back('\n');
    out += s;
  };
  for (const auto& b : doc.blocks) {
    if (const auto* p = std::get_if<Paragraph>(&b)) add(p->text);
    else if (const auto* h = std::get_if<Header>(&b)) add(h->text);
    else if (const auto* s = std::get_if<SpecialTag>(&b)) add(s->content);
    else if (const auto* t = std::get_if<Table>(&b)) {
      std::string cells;
      table_text(t->tree, cells);
      while (!cells.empty() && cells.back() == '\n') cells.pop_back();
      add(cells);
    }
  }
  return out;
}

std::vector<const HtmlTree*> tables_of(const Document& doc) {
  std::vector<const HtmlTree*> out;
  for (const auto& b : doc.blocks) {
    if (const auto* t = std::get_if<Table>(&b)) out.push_back(&t->tree);
  }
  return out;
}

}  // namespace arabdoc
