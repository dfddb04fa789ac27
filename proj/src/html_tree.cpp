#include "arabdoc/html_tree.hpp"

#include "arabdoc/error.hpp"
#include "arabdoc/text.hpp"
#include "html_lexer.hpp"

#include <charconv>

namespace arabdoc {

HtmlTree HtmlTree::element(std::string label, std::vector<HtmlTree> children) {
  HtmlTree t;
  t.label = std::move(label);
  t.children = std::move(children);
  if (t.is_cell()) t.cell_attrs = CellSpan{};
  return t;
}

HtmlTree HtmlTree::text_node(std::string text) {
  HtmlTree t;
  t.label = std::string(kTextLabel);
  t.text = std::move(text);
  return t;
}

HtmlTree HtmlTree::cell(std::string label, CellSpan span, std::vector<HtmlTree> children) {
  HtmlTree t = element(std::move(label), std::move(children));
  t.cell_attrs = span;
  return t;
}

std::size_t HtmlTree::size() const {
  std::size_t n = 1;
  for (const auto& c : children) n += c.size();
  return n;
}

namespace {

using detail::LexStatus;
using detail::TagKind;

// Whitespace runs become one space; a run at either edge is kept as one space
// so that words on both sides of an inline element stay apart.
std::string collapse_ws(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char32_t cp : text::decode_utf8(s)) {
    if (text::is_whitespace(cp)) {
      pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    text::append_utf8(out, cp);
  }
  if (pending_space) out.push_back(' ');
  return out;
}

bool is_structural(std::string_view n) {
  return n == "table" || n == "thead" || n == "tbody" || n == "tfoot" || n == "tr" ||
         n == "colgroup";
}

// Trims text at the start and end of each element (and all text directly
// inside table structure) and drops text that ends up empty.
void tidy(HtmlTree& node) {
  auto& kids = node.children;
  const bool structural = is_structural(node.label);
  for (std::size_t i = 0; i < kids.size(); ++i) {
    auto& k = kids[i];
    if (!k.is_text()) {
      tidy(k);
      continue;
    }
    if (structural || i == 0) {
      while (!k.text.empty() && k.text.front() == ' ') k.text.erase(0, 1);
    }
    if (structural || i + 1 == kids.size()) {
      while (!k.text.empty() && k.text.back() == ' ') k.text.pop_back();
    }
  }
  std::erase_if(kids, [](const HtmlTree& k) { return k.is_text() && k.text.empty(); });
  // Dropping a node can expose a new edge.
  if (!kids.empty() && kids.front().is_text() && kids.front().text.front() == ' ') tidy(node);
  else if (!kids.empty() && kids.back().is_text() && kids.back().text.back() == ' ') tidy(node);
}

int parse_span(std::string_view v) {
  v = text::trim(v);
  int out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || out < 1) return 1;
  return out;
}

bool is_section(std::string_view n) {
  return n == "thead" || n == "tbody" || n == "tfoot";
}

void check_nesting(const std::string& name, const std::string& parent) {
  const bool ok = [&] {
    if (name == "td" || name == "th") return parent == "tr";
    if (name == "tr") return parent == "table" || is_section(parent);
    if (is_section(name) || name == "caption" || name == "colgroup") return parent == "table";
    return true;
  }();
  if (!ok) {
    throw Error(ErrorCode::IllegalNesting,
                "<" + name + "> inside <" + (parent.empty() ? "(none)" : parent) + ">");
  }
}

}  // namespace

HtmlTree parse_html_table(std::string_view html) {
  const std::size_t first = html.find_first_not_of(" \t\r\n\f");
  if (first == std::string_view::npos) {
    throw Error(ErrorCode::IllegalNesting, "expected <table>, got empty input");
  }
  {
    const auto lr = detail::lex_tag(html, first);
    if (lr.status != LexStatus::Tag || lr.token.kind != TagKind::Start ||
        lr.token.name != "table") {
      if (lr.status == LexStatus::Tag && lr.token.kind == TagKind::Start) {
        throw Error(ErrorCode::IllegalNesting, "<" + lr.token.name + "> outside <table>");
      }
      throw Error(ErrorCode::IllegalNesting, "input does not start with <table>");
    }
  }

  HtmlTree root;
  bool root_closed = false;
  // Stack of pointers into the tree under construction; children vectors only
  // grow at the top of the stack so pointers below stay valid.
  std::vector<HtmlTree*> stack;
  std::size_t i = first;
  std::string pending_text;

  auto flush_text = [&] {
    if (pending_text.empty()) return;
    std::string t = collapse_ws(detail::decode_entities(pending_text));
    pending_text.clear();
    if (t.empty()) return;
    if (stack.empty()) {
      throw Error(ErrorCode::IllegalNesting, "text outside <table>");
    }
    stack.back()->children.push_back(HtmlTree::text_node(std::move(t)));
  };

  while (i < html.size()) {
    const char c = html[i];
    if (c != '<') {
      pending_text.push_back(c);
      ++i;
      continue;
    }
    const auto lr = detail::lex_tag(html, i);
    if (lr.status == LexStatus::NotATag) {
      pending_text.push_back(c);
      ++i;
      continue;
    }
    if (lr.status == LexStatus::Unterminated) {
      throw Error(ErrorCode::UnbalancedHtml, "unterminated <" + lr.token.name + " tag");
    }
    const auto& tok = lr.token;
    i = tok.end;
    if (tok.kind == TagKind::Comment) continue;
    flush_text();

    if (root_closed) {
      throw Error(ErrorCode::IllegalNesting, "<" + tok.name + "> after </table>");
    }

    if (tok.kind == TagKind::Start) {
      const std::string parent = stack.empty() ? std::string() : stack.back()->label;
      if (stack.empty() && tok.name != "table") {
        throw Error(ErrorCode::IllegalNesting, "<" + tok.name + "> outside <table>");
      }
      if (!stack.empty()) check_nesting(tok.name, parent);

      HtmlTree node = HtmlTree::element(tok.name);
      if (node.is_cell()) {
        CellSpan span;
        for (const auto& [k, v] : tok.attrs) {
          if (k == "rowspan") span.rowspan = parse_span(v);
          else if (k == "colspan") span.colspan = parse_span(v);
        }
        node.cell_attrs = span;
      }
      const bool leaf = tok.self_closing || detail::is_void_element(tok.name);
      if (stack.empty()) {
        root = std::move(node);
        if (leaf) {
          root_closed = true;
        } else {
          stack.push_back(&root);
        }
        continue;
      }
      auto& kids = stack.back()->children;
      kids.push_back(std::move(node));
      if (!leaf) stack.push_back(&kids.back());
      continue;
    }

    // End tag.
    if (detail::is_void_element(tok.name)) continue;  // stray </br> etc.
    if (stack.empty() || stack.back()->label != tok.name) {
      throw Error(ErrorCode::UnbalancedHtml,
                  "</" + tok.name + "> does not close <" +
                      (stack.empty() ? std::string("(none)") : stack.back()->label) + ">");
    }
    stack.pop_back();
    if (stack.empty()) root_closed = true;
  }
  if (!text::is_blank(pending_text)) {
    if (root_closed) throw Error(ErrorCode::IllegalNesting, "text after </table>");
  }
  flush_text();
  if (!root_closed) {
    throw Error(ErrorCode::UnbalancedHtml,
                "unclosed <" + (stack.empty() ? std::string("table") : stack.back()->label) + ">");
  }
  tidy(root);
  return root;
}

namespace {

void write_html(const HtmlTree& t, std::string& out) {
  if (t.is_text()) {
    out += detail::escape_text(t.text);
    return;
  }
  out += '<';
  out += t.label;
  if (t.cell_attrs) {
    if (t.cell_attrs->rowspan != 1) out += " rowspan=\"" + std::to_string(t.cell_attrs->rowspan) + "\"";
    if (t.cell_attrs->colspan != 1) out += " colspan=\"" + std::to_string(t.cell_attrs->colspan) + "\"";
  }
  out += '>';
  if (detail::is_void_element(t.label) && t.children.empty()) return;
  for (const auto& c : t.children) write_html(c, out);
  out += "</";
  out += t.label;
  out += '>';
}

void collect_text(const HtmlTree& t, std::string& out) {
  if (t.is_text()) {
    out += t.text;
    return;
  }
  for (const auto& c : t.children) collect_text(c, out);
}

}  // namespace

std::string to_html(const HtmlTree& tree) {
  std::string out;
  write_html(tree, out);
  return out;
}

std::string inner_text(const HtmlTree& tree) {
  std::string out;
  collect_text(tree, out);
  return out;
}

}  // namespace arabdoc
