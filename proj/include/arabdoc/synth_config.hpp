#pragma once

#include "arabdoc/doc_model.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace arabdoc {

enum class PageSize { A4, A5, Letter, Legal, Tabloid, A3 };
enum class Orientation { portrait, landscape };
enum class Alignment { right, left, center };
enum class TextDirection { rtl, ltr };
enum class Shade { light, dark };

std::string_view to_string(PageSize v);
std::string_view to_string(Orientation v);
std::string_view to_string(Alignment v);
std::string_view to_string(TextDirection v);
std::string_view to_string(Shade v);

/// Fonts and colour palettes the sampler draws from. Colours are hex strings.
struct RenderCatalog {
  int version = 1;
  std::vector<std::string> fonts;              // 39
  std::vector<std::string> light_backgrounds;  // 8
  std::vector<std::string> dark_backgrounds;   // 5
  std::vector<std::string> light_text;         // 9
  std::vector<std::string> dark_text;          // 16

  /// Throws InvalidConfig unless the palette sizes are 39/8/5/9/16 and every
  /// entry is unique within its list.
  void validate() const;
  std::string to_json() const;
  static RenderCatalog from_json(std::string_view json);

  bool operator==(const RenderCatalog&) const = default;
};

const RenderCatalog& default_catalog();

struct RenderConfig {
  std::string font;
  PageSize page_size = PageSize::A4;
  Orientation orientation = Orientation::portrait;
  std::string background;
  Shade background_shade = Shade::light;
  std::string text_color;
  Shade text_shade = Shade::dark;
  Alignment alignment = Alignment::right;
  int columns = 1;
  int font_size_pt = 12;
  double margin_cm = 1.5;
  double line_height = 1.2;
  double column_spacing_cm = 0.8;
  TextDirection direction = TextDirection::rtl;
  bool highlight = false;
  bool colored_paragraph = false;

  std::string to_json() const;
  static RenderConfig from_json(std::string_view json);

  bool operator==(const RenderConfig&) const = default;
};

struct SamplerOptions {
  double landscape_probability = 0.15;
  double highlight_probability = 0.1;
  double colored_paragraph_probability = 0.1;
  RenderCatalog catalog = default_catalog();
};

/// Draws each field from its configured distribution:
///   alignment right/left/center 0.65/0.05/0.30, columns 1/2/3 0.75/0.20/0.05,
///   background light/dark 0.75/0.25, direction rtl 0.95, font size even in
///   [8,22], margin U[1.0,2.5] cm, line height U[1.0,1.6], column spacing
///   U[0.5,1.2] cm. Text colour is drawn from the shade opposite the
///   background. Deterministic per seed.
RenderConfig sample_render_config(std::uint64_t seed, const SamplerOptions& options = {});

/// Throws InvalidConfig if any field is outside its domain or the contrast
/// rule is broken.
void validate_render_config(const RenderConfig& cfg, const RenderCatalog& catalog = default_catalog());

struct RenderJob {
  static constexpr int kSchemaVersion = 1;

  std::string html;
  RenderConfig config;
  std::string job_id;
  std::uint64_t seed = 0;
};

/// Markdown-to-HTML body conversion: headers, emphasis, rules, tables and
/// special tags become HTML elements.
std::string document_body_html(const Document& doc, const RenderConfig& cfg, std::uint64_t seed);

/// Full standalone page with the configuration embedded as JSON and as CSS.
/// Without an explicit id the job id is derived from the content and seed.
RenderJob emit_render_job(const Document& doc, const RenderConfig& cfg, std::uint64_t seed,
                          std::string job_id = {});

/// Writes <job_id>.html and <job_id>.json into `dir`.
void write_render_job(const RenderJob& job, const std::filesystem::path& dir);

std::string render_job_json(const RenderJob& job);

}  // namespace arabdoc
