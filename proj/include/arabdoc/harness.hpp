#pragma once

#include "arabdoc/evaluate.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace arabdoc {

enum class SourceType { synthetic, real };
std::string_view to_string(SourceType s);

struct ManifestEntry {
  std::string id;
  std::filesystem::path image_path;         // resolved against the manifest directory
  std::filesystem::path ground_truth_path;  // likewise
  SourceType source = SourceType::real;
  std::vector<std::string> tags;
  /// Problems found at load time, e.g. "missing ground_truth_path".
  std::vector<std::string> flags;
};

struct DatasetManifest {
  static constexpr int kSchemaVersion = 1;
  std::vector<ManifestEntry> entries;
  std::size_t flagged() const;
};

/// One JSON object per line: id, ground_truth_path, source and optionally
/// image_path, tags, schema_version. Throws SchemaError, DuplicateId.
DatasetManifest parse_manifest(std::string_view jsonl, const std::filesystem::path& base_dir);
DatasetManifest load_manifest(const std::filesystem::path& path);

struct EvalConfig {
  EvalOptions options;
  std::string model_name = "model";
  /// A missing prediction file is an error instead of an empty hypothesis.
  bool strict = false;
  /// 0 reads ARABDOC_WORKERS, falling back to the hardware thread count.
  int workers = 0;
};

int resolve_workers(int requested);

/// Stable hash of every option that affects scores.
std::string config_fingerprint(const EvalOptions& options);

struct EntryResult {
  std::string id;
  MetricReport report;
  bool operator==(const EntryResult&) const = default;
};

struct EvalReport {
  static constexpr int kSchemaVersion = 1;
  std::string model_name;
  std::string fingerprint;
  std::vector<EntryResult> per_entry;  // sorted by id
  std::optional<MetricReport> corpus;
  std::vector<std::string> warnings;
  bool operator==(const EvalReport&) const = default;
};

/// Predictions are read from `<pred_dir>/<id>.md`, falling back to `.txt`.
/// Throws NoPredictions when no entry has a prediction file and
/// MissingPrediction for a gap in strict mode.
EvalReport run_evaluation(const DatasetManifest& manifest,
                          const std::filesystem::path& predictions_dir, const EvalConfig& cfg);

enum class FindingKind { HallucinationSuspect, MissingPageNumber, SparseTable, UnparseableHtml, MissingFile };
std::string_view to_string(FindingKind k);

struct LintFinding {
  std::string id;
  FindingKind kind = FindingKind::MissingFile;
  std::string detail;
};

struct LintConfig {
  /// Consecutive Latin-script words inside an Arabic document.
  std::size_t latin_run_words = 5;
  double sparsity_threshold = 0.25;
  bool require_page_number = true;
};

std::vector<LintFinding> lint_text(const std::string& id, std::string_view ground_truth,
                                   const LintConfig& cfg = {});
std::vector<LintFinding> lint_ground_truth(const DatasetManifest& manifest,
                                           const LintConfig& cfg = {});

struct ReportRow {
  std::string model;
  double wer = 0, cer = 0, bleu = 0, chrf = 0, teds = 0, mars = 0;
};

/// WER/CER/BLEU/CHRF to 2 places, TEDS as an integer, MARS to 3 places.
std::string markdown_table(const std::vector<ReportRow>& rows);
std::string render_markdown(const EvalReport& report);

std::string metric_report_json(const MetricReport& r);
MetricReport metric_report_from_json(std::string_view s);
std::string render_json(const EvalReport& report);
EvalReport report_from_json(std::string_view s);
/// One line per entry: {"id": ..., "report": {...}}.
std::string per_entry_jsonl(const EvalReport& report);

}  // namespace arabdoc
