#pragma once

#include "arabdoc/html_tree.hpp"

#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace arabdoc {

enum class SourceKind { reference, prediction };

enum class EmphasisKind { bold, italic };

/// Byte range [begin, end) of emphasised content inside Paragraph::text.
struct EmphasisSpan {
  EmphasisKind kind = EmphasisKind::bold;
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const EmphasisSpan&) const = default;
};

/// Inline Markdown source, lines trimmed and joined with '\n'. Emphasis markers
/// stay in `text`; `spans` locates them.
struct Paragraph {
  std::string text;
  std::vector<EmphasisSpan> spans;

  bool operator==(const Paragraph& o) const { return text == o.text; }
};

struct Header {
  int level = 1;  // 1..6
  std::string text;

  bool operator==(const Header&) const = default;
};

struct HorizontalRule {
  bool operator==(const HorizontalRule&) const = default;
};

enum class TableSyntax { html, markdown };

struct Table {
  HtmlTree tree;
  TableSyntax syntax = TableSyntax::html;
  /// Column count of the delimiter row, for pipe tables.
  std::size_t column_count = 0;

  bool operator==(const Table&) const = default;
};

struct SpecialTag {
  std::string name;
  std::string content;

  bool operator==(const SpecialTag&) const = default;
};

using Block = std::variant<Paragraph, Header, HorizontalRule, Table, SpecialTag>;

struct Document {
  std::vector<Block> blocks;
  SourceKind source_kind = SourceKind::reference;
};

/// Block-wise equality; source_kind is ignored.
bool block_equal(const Document& a, const Document& b);

std::set<std::string> default_special_tags();

struct ParseOptions {
  std::set<std::string> special_tags = default_special_tags();
  SourceKind source_kind = SourceKind::reference;
};

/// Strict parse. Throws Error(UnbalancedHtml / IllegalNesting) when an
/// embedded table is malformed.
Document parse_markdown(std::string_view text, const ParseOptions& options = {});

struct ParseResult {
  Document document;
  std::vector<std::string> warnings;
};

/// Total parse: a malformed table region becomes a Paragraph holding its raw
/// text and a warning is recorded.
ParseResult parse_markdown_lenient(std::string_view text, const ParseOptions& options = {});

std::vector<EmphasisSpan> find_emphasis(std::string_view inline_text);

enum class TreeScope { document, tables };

/// Root "doc" with one child per block (or per table in tables scope).
HtmlTree document_to_tree(const Document& doc, TreeScope scope = TreeScope::document);

struct SerializeOptions {
  std::string horizontal_rule = "---";
};

std::string serialize(const Document& doc, const SerializeOptions& options = {});

/// Text content of every block, one block per line, without markup.
std::string plain_text(const Document& doc);

/// Tables contained in the document, in order.
std::vector<const HtmlTree*> tables_of(const Document& doc);

}  // namespace arabdoc
