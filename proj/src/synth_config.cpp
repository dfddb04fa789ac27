#include "arabdoc/synth_config.hpp"

#include "arabdoc/error.hpp"
#include "html_lexer.hpp"
#include "random.hpp"

#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <set>

namespace arabdoc {

std::string_view to_string(PageSize v) {
  switch (v) {
    case PageSize::A4: return "A4";
    case PageSize::A5: return "A5";
    case PageSize::Letter: return "Letter";
    case PageSize::Legal: return "Legal";
    case PageSize::Tabloid: return "Tabloid";
    case PageSize::A3: return "A3";
  }
  return "A4";
}
std::string_view to_string(Orientation v) {
  return v == Orientation::portrait ? "portrait" : "landscape";
}
std::string_view to_string(Alignment v) {
  switch (v) {
    case Alignment::right: return "right";
    case Alignment::left: return "left";
    case Alignment::center: return "center";
  }
  return "right";
}
std::string_view to_string(TextDirection v) { return v == TextDirection::rtl ? "rtl" : "ltr"; }
std::string_view to_string(Shade v) { return v == Shade::light ? "light" : "dark"; }

namespace {

template <typename E, std::size_t N>
E parse_enum(const std::string& s, const std::array<E, N>& values) {
  for (E v : values) {
    if (to_string(v) == s) return v;
  }
  throw Error(ErrorCode::SchemaError, "unknown value '" + s + "'");
}

constexpr std::array kPageSizes = {PageSize::A4,    PageSize::A5,      PageSize::Letter,
                                   PageSize::Legal, PageSize::Tabloid, PageSize::A3};
constexpr std::array kOrientations = {Orientation::portrait, Orientation::landscape};
constexpr std::array kAlignments = {Alignment::right, Alignment::left, Alignment::center};
constexpr std::array kDirections = {TextDirection::rtl, TextDirection::ltr};
constexpr std::array kShades = {Shade::light, Shade::dark};

void check_unique(const std::vector<std::string>& v, std::size_t expected, const char* name) {
  if (v.size() != expected) {
    throw Error(ErrorCode::InvalidConfig, std::string(name) + " needs " +
                                              std::to_string(expected) + " entries, has " +
                                              std::to_string(v.size()));
  }
  if (std::set<std::string>(v.begin(), v.end()).size() != v.size()) {
    throw Error(ErrorCode::InvalidConfig, std::string(name) + " has duplicate entries");
  }
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

}  // namespace

void RenderCatalog::validate() const {
  check_unique(fonts, 39, "fonts");
  check_unique(light_backgrounds, 8, "light_backgrounds");
  check_unique(dark_backgrounds, 5, "dark_backgrounds");
  check_unique(light_text, 9, "light_text");
  check_unique(dark_text, 16, "dark_text");
}

std::string RenderCatalog::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "arabdoc-render-catalog";
  j["version"] = version;
  j["fonts"] = fonts;
  j["light_backgrounds"] = light_backgrounds;
  j["dark_backgrounds"] = dark_backgrounds;
  j["light_text"] = light_text;
  j["dark_text"] = dark_text;
  return j.dump(2);
}

RenderCatalog RenderCatalog::from_json(std::string_view s) {
  RenderCatalog c;
  try {
    const auto j = nlohmann::json::parse(s);
    if (j.at("format") != "arabdoc-render-catalog") {
      throw Error(ErrorCode::SchemaError, "not a render catalog");
    }
    c.version = j.at("version").get<int>();
    c.fonts = j.at("fonts").get<std::vector<std::string>>();
    c.light_backgrounds = j.at("light_backgrounds").get<std::vector<std::string>>();
    c.dark_backgrounds = j.at("dark_backgrounds").get<std::vector<std::string>>();
    c.light_text = j.at("light_text").get<std::vector<std::string>>();
    c.dark_text = j.at("dark_text").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
  c.validate();
  return c;
}

const RenderCatalog& default_catalog() {
  static const RenderCatalog catalog = [] {
    RenderCatalog c;
    c.version = 1;
    c.fonts = {
        "Amiri",           "Scheherazade New",   "Noto Naskh Arabic", "Noto Sans Arabic",
        "Noto Kufi Arabic", "Cairo",             "Tajawal",           "Almarai",
        "Lateef",          "Harmattan",          "Reem Kufi",         "Markazi Text",
        "El Messiri",      "Changa",             "Lalezar",           "Mada",
        "Katibeh",         "Rakkas",             "Jomhuria",          "Aref Ruqaa",
        "Mirza",           "Baloo Bhaijaan 2",   "Readex Pro",        "IBM Plex Sans Arabic",
        "Vazirmatn",       "Alexandria",         "Kufam",             "Gulzar",
        "Blaka",           "Marhey",             "Lemonada",          "Qahiri",
        "Amiri Quran",     "Noto Nastaliq Urdu", "Handjet",           "Reem Kufi Fun",
        "Zain",            "Rubik",              "Noto Sans Arabic UI",
    };
    c.light_backgrounds = {"#FFFFFF", "#FAF8F2", "#F5F5F0", "#FDF6E3",
                           "#F0F4F8", "#F7F3E9", "#EEF5EC", "#FFF8E7"};
    c.dark_backgrounds = {"#1E1E1E", "#2B2B2B", "#1A2433", "#2D1F1A", "#18302A"};
    c.light_text = {"#FFFFFF", "#F5F5F5", "#EAEAEA", "#FFF8DC", "#E0F0FF",
                    "#FFEFD5", "#F0FFF0", "#FAFAD2", "#E6E6FA"};
    c.dark_text = {"#000000", "#1A1A1A", "#222222", "#333333", "#3B3B3B", "#0B1F3A",
                   "#1F2D5A", "#2F1B0C", "#3E2723", "#102A1E", "#1B3B2F", "#4A0E0E",
                   "#5A1A1A", "#2E0854", "#36454F", "#263238"};
    c.validate();
    return c;
  }();
  return catalog;
}

namespace {

template <typename T, std::size_t N>
T pick_weighted(detail::Rng& rng, const std::array<T, N>& values,
                const std::array<double, N>& weights) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i < N; ++i) {
    acc += weights[i];
    if (u < acc) return values[i];
  }
  return values[N - 1];
}

const std::string& pick(detail::Rng& rng, const std::vector<std::string>& v) {
  return v[rng.index(v.size())];
}

}  // namespace

RenderConfig sample_render_config(std::uint64_t seed, const SamplerOptions& options) {
  options.catalog.validate();
  detail::Rng rng(seed);
  const auto& cat = options.catalog;
  RenderConfig c;
  c.font = pick(rng, cat.fonts);
  c.page_size = kPageSizes[rng.index(kPageSizes.size())];
  c.orientation =
      rng.bernoulli(options.landscape_probability) ? Orientation::landscape : Orientation::portrait;
  c.background_shade = rng.bernoulli(0.75) ? Shade::light : Shade::dark;
  if (c.background_shade == Shade::light) {
    c.background = pick(rng, cat.light_backgrounds);
    c.text_shade = Shade::dark;
    c.text_color = pick(rng, cat.dark_text);
  } else {
    c.background = pick(rng, cat.dark_backgrounds);
    c.text_shade = Shade::light;
    c.text_color = pick(rng, cat.light_text);
  }
  c.alignment = pick_weighted(rng, kAlignments, std::array{0.65, 0.05, 0.30});
  c.columns = pick_weighted(rng, std::array{1, 2, 3}, std::array{0.75, 0.20, 0.05});
  c.font_size_pt = 8 + 2 * static_cast<int>(rng.index(8));
  c.margin_cm = rng.uniform(1.0, 2.5);
  c.line_height = rng.uniform(1.0, 1.6);
  c.column_spacing_cm = rng.uniform(0.5, 1.2);
  c.direction = rng.bernoulli(0.95) ? TextDirection::rtl : TextDirection::ltr;
  c.highlight = rng.bernoulli(options.highlight_probability);
  c.colored_paragraph = rng.bernoulli(options.colored_paragraph_probability);
  return c;
}

void validate_render_config(const RenderConfig& c, const RenderCatalog& cat) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidConfig, m); };
  if (!contains(cat.fonts, c.font)) fail("unknown font " + c.font);
  const bool light_bg = c.background_shade == Shade::light;
  if (!contains(light_bg ? cat.light_backgrounds : cat.dark_backgrounds, c.background)) {
    fail("background " + c.background + " not in the " +
         std::string(to_string(c.background_shade)) + " palette");
  }
  if (c.text_shade == c.background_shade) fail("text shade must contrast with background");
  if (!contains(c.text_shade == Shade::light ? cat.light_text : cat.dark_text, c.text_color)) {
    fail("text colour " + c.text_color + " not in its palette");
  }
  if (c.columns < 1 || c.columns > 3) fail("columns outside [1,3]");
  if (c.font_size_pt < 8 || c.font_size_pt > 22 || c.font_size_pt % 2 != 0) {
    fail("font size must be even in [8,22]");
  }
  if (c.margin_cm < 1.0 || c.margin_cm > 2.5) fail("margin outside [1.0,2.5]");
  if (c.line_height < 1.0 || c.line_height > 1.6) fail("line height outside [1.0,1.6]");
  if (c.column_spacing_cm < 0.5 || c.column_spacing_cm > 1.2) {
    fail("column spacing outside [0.5,1.2]");
  }
}

namespace {

nlohmann::ordered_json config_to_json(const RenderConfig& c) {
  nlohmann::ordered_json j;
  j["font"] = c.font;
  j["page_size"] = to_string(c.page_size);
  j["orientation"] = to_string(c.orientation);
  j["background"] = c.background;
  j["background_shade"] = to_string(c.background_shade);
  j["text_color"] = c.text_color;
  j["text_shade"] = to_string(c.text_shade);
  j["alignment"] = to_string(c.alignment);
  j["columns"] = c.columns;
  j["font_size_pt"] = c.font_size_pt;
  j["margin_cm"] = c.margin_cm;
  j["line_height"] = c.line_height;
  j["column_spacing_cm"] = c.column_spacing_cm;
  j["direction"] = to_string(c.direction);
  auto deco = nlohmann::ordered_json::array();
  if (c.highlight) deco.push_back("highlight");
  if (c.colored_paragraph) deco.push_back("colored_paragraph");
  j["decorations"] = deco;
  return j;
}

RenderConfig config_from_json(const nlohmann::json& j) {
  RenderConfig c;
  c.font = j.at("font").get<std::string>();
  c.page_size = parse_enum(j.at("page_size").get<std::string>(), kPageSizes);
  c.orientation = parse_enum(j.at("orientation").get<std::string>(), kOrientations);
  c.background = j.at("background").get<std::string>();
  c.background_shade = parse_enum(j.at("background_shade").get<std::string>(), kShades);
  c.text_color = j.at("text_color").get<std::string>();
  c.text_shade = parse_enum(j.at("text_shade").get<std::string>(), kShades);
  c.alignment = parse_enum(j.at("alignment").get<std::string>(), kAlignments);
  c.columns = j.at("columns").get<int>();
  c.font_size_pt = j.at("font_size_pt").get<int>();
  c.margin_cm = j.at("margin_cm").get<double>();
  c.line_height = j.at("line_height").get<double>();
  c.column_spacing_cm = j.at("column_spacing_cm").get<double>();
  c.direction = parse_enum(j.at("direction").get<std::string>(), kDirections);
  for (const auto& d : j.at("decorations")) {
    const auto name = d.get<std::string>();
    if (name == "highlight") c.highlight = true;
    else if (name == "colored_paragraph") c.colored_paragraph = true;
    else throw Error(ErrorCode::SchemaError, "unknown decoration " + name);
  }
  return c;
}

}  // namespace

std::string RenderConfig::to_json() const { return config_to_json(*this).dump(); }

RenderConfig RenderConfig::from_json(std::string_view s) {
  try {
    return config_from_json(nlohmann::json::parse(s));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
}

namespace {

std::string fixed(double v, int decimals = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

std::string inline_html(std::string_view src) {
  const auto spans = find_emphasis(src);
  std::string out;
  std::size_t pos = 0;
  for (const auto& s : spans) {
    const std::size_t marker = s.kind == EmphasisKind::bold ? 2 : 1;
    out += detail::escape_text(src.substr(pos, s.begin - marker - pos));
    const char* tag = s.kind == EmphasisKind::bold ? "b" : "i";
    out += std::string("<") + tag + ">";
    out += detail::escape_text(src.substr(s.begin, s.end - s.begin));
    out += std::string("</") + tag + ">";
    pos = s.end + marker;
  }
  out += detail::escape_text(src.substr(pos));
  return out;
}

std::string page_dimensions(PageSize size, Orientation o) {
  std::string w;
  std::string h;
  switch (size) {
    case PageSize::A4: w = "210mm"; h = "297mm"; break;
    case PageSize::A5: w = "148mm"; h = "210mm"; break;
    case PageSize::A3: w = "297mm"; h = "420mm"; break;
    case PageSize::Letter: w = "8.5in"; h = "11in"; break;
    case PageSize::Legal: w = "8.5in"; h = "14in"; break;
    case PageSize::Tabloid: w = "11in"; h = "17in"; break;
  }
  if (o == Orientation::landscape) std::swap(w, h);
  return w + " " + h;
}

}  // namespace

std::string document_body_html(const Document& doc, const RenderConfig& cfg,
                               std::uint64_t seed) {
  detail::Rng rng(detail::derive_seed(seed, "decorations"));
  const auto& cat = default_catalog();
  std::string out;
  for (const auto& block : doc.blocks) {
    if (const auto* p = std::get_if<Paragraph>(&block)) {
      std::string attrs;
      if (cfg.highlight && rng.bernoulli(0.25)) attrs += " class=\"highlight\"";
      if (cfg.colored_paragraph && rng.bernoulli(0.25)) {
        const auto& palette = cfg.text_shade == Shade::light ? cat.light_text : cat.dark_text;
        attrs += " style=\"color: " + palette[rng.index(palette.size())] + "\"";
      }
      out += "<p" + attrs + ">" + inline_html(p->text) + "</p>\n";
    } else if (const auto* h = std::get_if<Header>(&block)) {
      const auto tag = "h" + std::to_string(h->level);
      out += "<" + tag + ">" + inline_html(h->text) + "</" + tag + ">\n";
    } else if (std::holds_alternative<HorizontalRule>(block)) {
      out += "<hr>\n";
    } else if (const auto* t = std::get_if<Table>(&block)) {
      out += to_html(t->tree) + "\n";
    } else if (const auto* s = std::get_if<SpecialTag>(&block)) {
      if (s->name == "img") {
        out += "<div class=\"image-placeholder\"></div>\n";
      } else {
        out += "<div class=\"" + s->name + "\">" + detail::escape_text(s->content) + "</div>\n";
      }
    }
  }
  return out;
}

RenderJob emit_render_job(const Document& doc, const RenderConfig& cfg, std::uint64_t seed,
                          std::string job_id) {
  RenderJob job;
  job.config = cfg;
  job.seed = seed;
  if (job_id.empty()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "job-%016llx",
                  static_cast<unsigned long long>(
                      detail::derive_seed(seed, serialize(doc) + cfg.to_json())));
    job_id = buf;
  }
  job.job_id = std::move(job_id);

  const std::string dir(to_string(cfg.direction));
  std::string html;
  html += "<!DOCTYPE html>\n";
  html += "<html dir=\"" + dir + "\" lang=\"ar\">\n<head>\n<meta charset=\"utf-8\">\n";
  html += "<script type=\"application/json\" id=\"render-config\">" + cfg.to_json() +
          "</script>\n";
  html += "<style>\n";
  html += "@page { size: " + page_dimensions(cfg.page_size, cfg.orientation) +
          "; margin: " + fixed(cfg.margin_cm) + "cm; }\n";
  html += "body { font-family: \"" + cfg.font + "\"; font-size: " +
          std::to_string(cfg.font_size_pt) + "pt; color: " + cfg.text_color +
          "; background: " + cfg.background + "; text-align: " +
          std::string(to_string(cfg.alignment)) + "; line-height: " + fixed(cfg.line_height) +
          "; direction: " + dir + "; column-count: " + std::to_string(cfg.columns) +
          "; column-gap: " + fixed(cfg.column_spacing_cm) + "cm; }\n";
  html += "table { border-collapse: collapse; } td, th { border: 1px solid currentColor; }\n";
  html += ".highlight { background: #FFF59D; color: #000000; }\n";
  html += "</style>\n</head>\n<body>\n";
  html += document_body_html(doc, cfg, seed);
  html += "</body>\n</html>\n";
  job.html = std::move(html);
  return job;
}

std::string render_job_json(const RenderJob& job) {
  nlohmann::ordered_json j;
  j["schema_version"] = RenderJob::kSchemaVersion;
  j["job_id"] = job.job_id;
  j["seed"] = job.seed;
  j["config"] = config_to_json(job.config);
  return j.dump(2);
}

void write_render_job(const RenderJob& job, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto write = [](const std::filesystem::path& p, const std::string& data) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
    out << data;
  };
  write(dir / (job.job_id + ".html"), job.html);
  write(dir / (job.job_id + ".json"), render_job_json(job) + "\n");
}

}  // namespace arabdoc
