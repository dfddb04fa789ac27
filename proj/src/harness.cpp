#include "arabdoc/harness.hpp"

#include "arabdoc/corpus_filters.hpp"
#include "arabdoc/error.hpp"
#include "arabdoc/text.hpp"
#include "random.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace arabdoc {

using ojson = nlohmann::ordered_json;

std::string_view to_string(SourceType s) { return s == SourceType::synthetic ? "synthetic" : "real"; }

std::string_view to_string(FindingKind k) {
  switch (k) {
    case FindingKind::HallucinationSuspect: return "HallucinationSuspect";
    case FindingKind::MissingPageNumber: return "MissingPageNumber";
    case FindingKind::SparseTable: return "SparseTable";
    case FindingKind::UnparseableHtml: return "UnparseableHtml";
    case FindingKind::MissingFile: return "MissingFile";
  }
  return "Unknown";
}

namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::size_t DatasetManifest::flagged() const {
  return static_cast<std::size_t>(std::count_if(
      entries.begin(), entries.end(), [](const ManifestEntry& e) { return !e.flags.empty(); }));
}

DatasetManifest parse_manifest(std::string_view jsonl, const std::filesystem::path& base_dir) {
  DatasetManifest m;
  std::set<std::string> seen;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < jsonl.size()) {
    std::size_t end = jsonl.find('\n', start);
    if (end == std::string_view::npos) end = jsonl.size();
    const auto line = jsonl.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (text::is_blank(line)) continue;
    const std::string where = "manifest line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::SchemaError, where + ": " + e.what());
    }
    if (!j.is_object()) throw Error(ErrorCode::SchemaError, where + ": expected an object");
    if (j.contains("schema_version") && j["schema_version"] != DatasetManifest::kSchemaVersion) {
      throw Error(ErrorCode::SchemaError, where + ": unsupported schema_version");
    }
    auto str = [&](const char* key, bool required) -> std::string {
      if (!j.contains(key)) {
        if (required) throw Error(ErrorCode::SchemaError, where + ": missing '" + key + "'");
        return {};
      }
      if (!j[key].is_string()) {
        throw Error(ErrorCode::SchemaError, where + ": '" + key + "' must be a string");
      }
      return j[key].get<std::string>();
    };
    ManifestEntry e;
    e.id = str("id", true);
    if (e.id.empty()) throw Error(ErrorCode::SchemaError, where + ": empty id");
    if (!seen.insert(e.id).second) {
      throw Error(ErrorCode::DuplicateId, where + ": duplicate id '" + e.id + "'");
    }
    const auto gt = str("ground_truth_path", true);
    const auto image = str("image_path", false);
    const auto source = str("source", true);
    if (source == "synthetic") e.source = SourceType::synthetic;
    else if (source == "real") e.source = SourceType::real;
    else throw Error(ErrorCode::SchemaError, where + ": source must be synthetic or real");
    if (j.contains("tags")) {
      try {
        e.tags = j["tags"].get<std::vector<std::string>>();
      } catch (const nlohmann::json::exception&) {
        throw Error(ErrorCode::SchemaError, where + ": tags must be a list of strings");
      }
    }
    e.ground_truth_path = base_dir / gt;
    if (!std::filesystem::is_regular_file(e.ground_truth_path)) {
      e.flags.push_back("missing ground_truth_path " + e.ground_truth_path.string());
    }
    if (!image.empty()) {
      e.image_path = base_dir / image;
      if (!std::filesystem::is_regular_file(e.image_path)) {
        e.flags.push_back("missing image_path " + e.image_path.string());
      }
    }
    m.entries.push_back(std::move(e));
  }
  if (m.entries.empty()) throw Error(ErrorCode::SchemaError, "manifest has no entries");
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("ARABDOC_WORKERS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    throw Error(ErrorCode::InvalidConfig, "ARABDOC_WORKERS must be a positive integer");
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

ojson options_json(const EvalOptions& o) {
  ojson j;
  j["model_tags_to_remove"] = o.normalize.model_tags_to_remove;
  j["special_tags"] = o.normalize.special_tags;
  j["unicode_form"] = o.normalize.unicode_form == text::UnicodeForm::NFC ? "NFC" : "NFKC";
  j["strip_diacritics"] = o.normalize.strip_diacritics;
  j["hr_normal_form"] = o.normalize.hr_normal_form;
  j["teds_scope"] = o.teds_scope == TreeScope::document ? "doc" : "tables";
  j["teds_text_cost"] =
      o.teds_cost.text_cost == TextCost::strict ? "strict" : "normalized_levenshtein";
  j["cer_mode"] = o.cer_mode == CerMode::codepoint ? "codepoint" : "grapheme";
  j["aggregation"] = o.aggregation == Aggregation::corpus ? "corpus" : "sentence_mean";
  j["teds_decimals"] = o.teds_decimals;
  return j;
}

}  // namespace

std::string config_fingerprint(const EvalOptions& options) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(detail::fnv1a64(options_json(options).dump())));
  return buf;
}

EvalReport run_evaluation(const DatasetManifest& manifest,
                          const std::filesystem::path& predictions_dir, const EvalConfig& cfg) {
  cfg.options.normalize.validate();
  const auto& entries = manifest.entries;

  std::vector<std::optional<std::filesystem::path>> pred_paths(entries.size());
  std::size_t found = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    for (const char* ext : {".md", ".txt"}) {
      const auto p = predictions_dir / (entries[i].id + ext);
      if (std::filesystem::is_regular_file(p)) {
        pred_paths[i] = p;
        ++found;
        break;
      }
    }
  }
  if (found == 0) {
    throw Error(ErrorCode::NoPredictions, "no prediction files in " + predictions_dir.string());
  }
  if (cfg.strict) {
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (!pred_paths[i]) {
        throw Error(ErrorCode::MissingPrediction, "no prediction for '" + entries[i].id + "'");
      }
    }
  }

  struct Slot {
    std::optional<MetricReport> report;
    std::vector<std::string> warnings;
    std::exception_ptr error;
  };
  std::vector<Slot> slots(entries.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < entries.size(); i = next++) {
      Slot& slot = slots[i];
      const auto& e = entries[i];
      try {
        if (!std::filesystem::is_regular_file(e.ground_truth_path)) {
          slot.warnings.push_back(e.id + ": ground truth missing, entry skipped");
          continue;
        }
        const auto reference = read_file(e.ground_truth_path);
        std::string hypothesis;
        if (pred_paths[i]) {
          hypothesis = read_file(*pred_paths[i]);
        } else {
          slot.warnings.push_back(e.id + ": prediction missing, scored as empty");
        }
        try {
          slot.report = evaluate_texts(reference, hypothesis, cfg.options);
        } catch (const Error& err) {
          if (err.code() != ErrorCode::EmptyReference) throw;
          slot.warnings.push_back(e.id + ": reference is empty after normalization, entry skipped");
        }
      } catch (...) {
        slot.error = std::current_exception();
      }
    }
  };
  const int workers = std::min<int>(resolve_workers(cfg.workers), static_cast<int>(entries.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  EvalReport report;
  report.model_name = cfg.model_name;
  report.fingerprint = config_fingerprint(cfg.options);
  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return entries[a].id < entries[b].id; });
  for (std::size_t i : order) {
    if (slots[i].error) std::rethrow_exception(slots[i].error);
    for (auto& w : slots[i].warnings) report.warnings.push_back(std::move(w));
    if (slots[i].report) report.per_entry.push_back({entries[i].id, std::move(*slots[i].report)});
  }
  if (!report.per_entry.empty()) {
    std::vector<MetricReport> reports;
    reports.reserve(report.per_entry.size());
    for (const auto& e : report.per_entry) reports.push_back(e.report);
    report.corpus = aggregate(reports, cfg.options);
  }
  return report;
}

// ---- lint ----

std::vector<LintFinding> lint_text(const std::string& id, std::string_view ground_truth,
                                   const LintConfig& cfg) {
  std::vector<LintFinding> out;
  try {
    parse_markdown(ground_truth);
  } catch (const Error& e) {
    out.push_back({id, FindingKind::UnparseableHtml, e.what()});
  }
  const auto doc = parse_markdown_lenient(ground_truth).document;

  const std::string body = plain_text(doc);
  std::size_t arabic = 0;
  std::size_t latin = 0;
  for (char32_t cp : text::decode_utf8(body)) {
    if (text::is_arabic_letter(cp)) ++arabic;
    else if (text::is_latin_letter(cp)) ++latin;
  }
  if (arabic > latin) {
    std::size_t run = 0;
    std::string phrase;
    bool reported = false;
    for (const auto& token : text::split_whitespace(body)) {
      bool has_latin = false;
      bool has_other = false;
      for (char32_t cp : text::decode_utf8(token)) {
        if (text::is_latin_letter(cp)) has_latin = true;
        else if (text::is_letter(cp)) has_other = true;
      }
      if (has_other) {
        run = 0;
        phrase.clear();
      } else if (has_latin) {
        ++run;
        phrase += (phrase.empty() ? "" : " ") + token;
        if (run >= cfg.latin_run_words && !reported) {
          out.push_back({id, FindingKind::HallucinationSuspect,
                         std::to_string(cfg.latin_run_words) + "+ Latin words: \"" + phrase + "\""});
          reported = true;
        }
      }
    }
  }

  if (cfg.require_page_number && ground_truth.find("<page_number") == std::string_view::npos) {
    out.push_back({id, FindingKind::MissingPageNumber, "no <page_number> tag"});
  }

  std::size_t index = 0;
  for (const HtmlTree* t : tables_of(doc)) {
    ++index;
    const auto s = table_sparsity(*t);
    if (s.fraction > cfg.sparsity_threshold) {
      char buf[128];
      std::snprintf(buf, sizeof buf, "table %zu: %zu of %zu cells empty (%.3f)", index,
                    s.empty_cells, s.total_cells, s.fraction);
      out.push_back({id, FindingKind::SparseTable, buf});
    }
  }
  return out;
}

std::vector<LintFinding> lint_ground_truth(const DatasetManifest& manifest, const LintConfig& cfg) {
  std::vector<LintFinding> out;
  for (const auto& e : manifest.entries) {
    for (const auto& f : e.flags) out.push_back({e.id, FindingKind::MissingFile, f});
    if (!std::filesystem::is_regular_file(e.ground_truth_path)) continue;
    auto found = lint_text(e.id, read_file(e.ground_truth_path), cfg);
    out.insert(out.end(), found.begin(), found.end());
  }
  return out;
}

// ---- reports ----

namespace {

std::string fmt(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, round_to(v, decimals));
  return buf;
}

template <std::size_t N>
std::vector<std::uint64_t> vec(const std::array<std::uint64_t, N>& a) {
  return {a.begin(), a.end()};
}

template <std::size_t N>
std::array<std::uint64_t, N> arr(const nlohmann::json& j) {
  const auto v = j.get<std::vector<std::uint64_t>>();
  if (v.size() != N) throw Error(ErrorCode::SchemaError, "count array has wrong length");
  std::array<std::uint64_t, N> a{};
  std::copy(v.begin(), v.end(), a.begin());
  return a;
}

ojson report_obj(const MetricReport& r) {
  ojson j;
  j["wer"] = r.wer;
  j["cer"] = r.cer;
  j["bleu"] = r.bleu;
  j["chrf"] = r.chrf;
  j["teds"] = r.teds;
  j["mars"] = r.mars;
  j["teds_raw"] = r.teds_raw;
  j["word_counts"] = {{"edits", r.word_counts.edits},
                      {"reference_length", r.word_counts.reference_length}};
  j["char_counts"] = {{"edits", r.char_counts.edits},
                      {"reference_length", r.char_counts.reference_length}};
  j["bleu_counts"] = {{"matches", vec(r.bleu_counts.matches)},
                      {"totals", vec(r.bleu_counts.totals)},
                      {"hypothesis_length", r.bleu_counts.hypothesis_length},
                      {"reference_length", r.bleu_counts.reference_length}};
  j["chrf_counts"] = {{"hypothesis", vec(r.chrf_counts.hypothesis)},
                      {"reference", vec(r.chrf_counts.reference)},
                      {"matches", vec(r.chrf_counts.matches)}};
  j["warnings"] = r.warnings;
  return j;
}

MetricReport report_from_obj(const nlohmann::json& j) {
  MetricReport r;
  r.wer = j.at("wer").get<double>();
  r.cer = j.at("cer").get<double>();
  r.bleu = j.at("bleu").get<double>();
  r.chrf = j.at("chrf").get<double>();
  r.teds = j.at("teds").get<double>();
  r.mars = j.at("mars").get<double>();
  r.teds_raw = j.at("teds_raw").get<double>();
  r.word_counts.edits = j.at("word_counts").at("edits").get<std::uint64_t>();
  r.word_counts.reference_length = j.at("word_counts").at("reference_length").get<std::uint64_t>();
  r.char_counts.edits = j.at("char_counts").at("edits").get<std::uint64_t>();
  r.char_counts.reference_length = j.at("char_counts").at("reference_length").get<std::uint64_t>();
  const auto& b = j.at("bleu_counts");
  r.bleu_counts.matches = arr<kBleuOrder>(b.at("matches"));
  r.bleu_counts.totals = arr<kBleuOrder>(b.at("totals"));
  r.bleu_counts.hypothesis_length = b.at("hypothesis_length").get<std::uint64_t>();
  r.bleu_counts.reference_length = b.at("reference_length").get<std::uint64_t>();
  const auto& c = j.at("chrf_counts");
  r.chrf_counts.hypothesis = arr<kChrfOrder>(c.at("hypothesis"));
  r.chrf_counts.reference = arr<kChrfOrder>(c.at("reference"));
  r.chrf_counts.matches = arr<kChrfOrder>(c.at("matches"));
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

template <typename F>
auto schema_guard(F&& f) {
  try {
    return f();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
}

}  // namespace

std::string markdown_table(const std::vector<ReportRow>& rows) {
  std::string out = "| Model | WER ↓ | CER ↓ | BLEU ↑ | CHRF ↑ | TEDS ↑ | MARS ↑ |\n";
  out += "|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    out += "| " + r.model + " | " + fmt(r.wer, 2) + " | " + fmt(r.cer, 2) + " | " +
           fmt(r.bleu, 2) + " | " + fmt(r.chrf, 2) + " | " + fmt(r.teds, 0) + " | " +
           fmt(r.mars, 3) + " |\n";
  }
  return out;
}

std::string render_markdown(const EvalReport& report) {
  std::vector<ReportRow> rows;
  if (report.corpus) {
    const auto& c = *report.corpus;
    rows.push_back({report.model_name, c.wer, c.cer, c.bleu, c.chrf, c.teds, c.mars});
  }
  return markdown_table(rows);
}

std::string metric_report_json(const MetricReport& r) { return report_obj(r).dump(); }

MetricReport metric_report_from_json(std::string_view s) {
  return schema_guard([&] { return report_from_obj(nlohmann::json::parse(s)); });
}

std::string render_json(const EvalReport& report) {
  ojson j;
  j["schema_version"] = EvalReport::kSchemaVersion;
  j["model_name"] = report.model_name;
  j["fingerprint"] = report.fingerprint;
  j["corpus"] = report.corpus ? report_obj(*report.corpus) : ojson(nullptr);
  auto per = ojson::array();
  for (const auto& e : report.per_entry) per.push_back({{"id", e.id}, {"report", report_obj(e.report)}});
  j["per_entry"] = per;
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

EvalReport report_from_json(std::string_view s) {
  return schema_guard([&] {
    const auto j = nlohmann::json::parse(s);
    if (j.at("schema_version").get<int>() != EvalReport::kSchemaVersion) {
      throw Error(ErrorCode::SchemaError, "unsupported report schema_version");
    }
    EvalReport r;
    r.model_name = j.at("model_name").get<std::string>();
    r.fingerprint = j.at("fingerprint").get<std::string>();
    if (!j.at("corpus").is_null()) r.corpus = report_from_obj(j.at("corpus"));
    for (const auto& e : j.at("per_entry")) {
      r.per_entry.push_back({e.at("id").get<std::string>(), report_from_obj(e.at("report"))});
    }
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    return r;
  });
}

std::string per_entry_jsonl(const EvalReport& report) {
  std::string out;
  for (const auto& e : report.per_entry) {
    ojson j;
    j["id"] = e.id;
    j["report"] = report_obj(e.report);
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace arabdoc
