#include "arabdoc/augment.hpp"
#include "arabdoc/corpus_filters.hpp"
#include "arabdoc/error.hpp"
#include "arabdoc/harness.hpp"
#include "arabdoc/normalize.hpp"
#include "arabdoc/synth_config.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace arabdoc;

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& data) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + p.string());
  out << data;
}

std::string read_input(const std::string& path) {
  if (path.empty() || path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  return read_file(path);
}

struct CorpusRecord {
  std::string id;
  std::string text;
};

// A .jsonl file holds one {"id", "text"} object per line; any other file is a
// single document whose id is the file stem.
std::vector<CorpusRecord> load_corpus(const std::vector<fs::path>& paths) {
  std::vector<CorpusRecord> out;
  for (const auto& p : paths) {
    const auto data = read_file(p);
    if (p.extension() != ".jsonl") {
      out.push_back({p.stem().string(), data});
      continue;
    }
    std::istringstream in(data);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      const auto where = p.string() + ":" + std::to_string(line_no);
      try {
        const auto j = nlohmann::json::parse(line);
        out.push_back({j.at("id").get<std::string>(), j.at("text").get<std::string>()});
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::SchemaError, where + ": " + e.what());
      }
    }
  }
  return out;
}

struct NormalizeFlags {
  std::string unicode = "NFC";
  bool strip_diacritics = false;
  std::string hr = "---";
  std::vector<std::string> model_tags = {"page_number", "watermark"};
  std::vector<std::string> special_tags = {"page_number", "watermark", "img"};

  void attach(CLI::App* app) {
    app->add_option("--normalize-unicode", unicode, "Unicode normal form")
        ->check(CLI::IsMember({"NFC", "NFKC"}))
        ->capture_default_str();
    app->add_flag("--normalize-strip-diacritics", strip_diacritics,
                  "Remove combining marks (harakat) before scoring");
    app->add_option("--normalize-hr", hr, "Normal form for horizontal rules")->capture_default_str();
    app->add_option("--normalize-model-tags", model_tags,
                    "Tags removed together with their content")
        ->delimiter(',')
        ->capture_default_str();
    app->add_option("--normalize-special-tags", special_tags, "Tags kept as document blocks")
        ->delimiter(',')
        ->capture_default_str();
  }

  NormalizeConfig config() const {
    NormalizeConfig c;
    c.unicode_form = unicode == "NFKC" ? text::UnicodeForm::NFKC : text::UnicodeForm::NFC;
    c.strip_diacritics = strip_diacritics;
    c.hr_normal_form = hr;
    c.model_tags_to_remove = {model_tags.begin(), model_tags.end()};
    c.special_tags = {special_tags.begin(), special_tags.end()};
    c.validate();
    return c;
  }
};

std::vector<std::string> read_ids(const fs::path& path) {
  std::vector<std::string> ids;
  std::istringstream in(read_file(path));
  for (std::string line; std::getline(in, line);) {
    const auto t = text::trim(line);
    if (!t.empty()) ids.emplace_back(t);
  }
  return ids;
}

std::vector<std::string> png_ids(const fs::path& dir) {
  std::vector<std::string> ids;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".png") ids.push_back(e.path().stem().string());
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arabic document OCR evaluation and data pipeline toolkit", "arabdoc"};
  app.require_subcommand(1);

  // eval run
  auto* eval = app.add_subcommand("eval", "Benchmark evaluation");
  eval->require_subcommand(1);
  auto* eval_run = eval->add_subcommand("run", "Score predictions against a manifest");
  fs::path manifest_path, pred_dir, out_path;
  std::string report_format, model_name = "model", teds_scope = "doc", cer_mode = "codepoint",
                             aggregate_mode = "corpus";
  bool teds_strict = false, strict = false;
  int workers = 0;
  int teds_decimals = 0;
  fs::path per_entry_path;
  NormalizeFlags eval_norm;
  eval_run->add_option("--manifest", manifest_path, "Manifest JSONL")->required()->check(CLI::ExistingFile);
  eval_run->add_option("--pred", pred_dir, "Directory of <id>.md or <id>.txt predictions")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval_run->add_option("--out", out_path, "JSON report path")->required();
  eval_run->add_option("--report", report_format, "Also print a table")->check(CLI::IsMember({"md"}));
  eval_run->add_option("--per-entry", per_entry_path, "Per-pair JSONL output");
  eval_run->add_option("--model-name", model_name)->capture_default_str();
  eval_run->add_option("--teds-scope", teds_scope)->check(CLI::IsMember({"doc", "tables"}))->capture_default_str();
  eval_run->add_flag("--teds-strict-text", teds_strict, "0/1 text relabel cost in TEDS");
  eval_run->add_option("--teds-decimals", teds_decimals, "TEDS rounding used for MARS")->capture_default_str();
  eval_run->add_option("--cer-mode", cer_mode)->check(CLI::IsMember({"codepoint", "grapheme"}))->capture_default_str();
  eval_run->add_option("--aggregate", aggregate_mode)
      ->check(CLI::IsMember({"corpus", "sentence"}))
      ->capture_default_str();
  eval_run->add_flag("--strict", strict, "Fail on missing predictions");
  eval_run->add_option("--workers", workers, "Worker threads (default: ARABDOC_WORKERS or all cores)");
  eval_norm.attach(eval_run);

  // lint
  auto* lint = app.add_subcommand("lint", "Ground-truth quality checks");
  fs::path lint_manifest;
  LintConfig lint_cfg;
  bool no_page_check = false;
  lint->add_option("--manifest", lint_manifest)->required()->check(CLI::ExistingFile);
  lint->add_option("--latin-run", lint_cfg.latin_run_words, "Latin-word run length flagged")->capture_default_str();
  lint->add_option("--sparsity-threshold", lint_cfg.sparsity_threshold)->capture_default_str();
  lint->add_flag("--no-page-number-check", no_page_check);

  // normalize
  auto* normalize = app.add_subcommand("normalize", "Standardize one Markdown/HTML output");
  std::string normalize_input;
  NormalizeFlags norm_flags;
  normalize->add_option("input", normalize_input, "File, or - for stdin");
  norm_flags.attach(normalize);

  // train-lm
  auto* train = app.add_subcommand("train-lm", "Train the n-gram language model");
  std::vector<fs::path> train_inputs;
  fs::path lm_out;
  int order = 5;
  double k = 0.1;
  std::string unit = "char";
  train->add_option("inputs", train_inputs, "JSONL corpora or text files")->required()->check(CLI::ExistingFile);
  train->add_option("--out", lm_out)->required();
  train->add_option("--order", order)->capture_default_str();
  train->add_option("-k,--smoothing", k)->capture_default_str();
  train->add_option("--unit", unit)->check(CLI::IsMember({"char", "word"}))->capture_default_str();

  // filter
  auto* filter = app.add_subcommand("filter", "Perplexity and table-sparsity corpus filter");
  fs::path filter_lm;
  std::vector<fs::path> filter_inputs;
  FilterConfig filter_cfg;
  fs::path filter_out;
  filter->add_option("inputs", filter_inputs, "JSONL corpora or text files")->required()->check(CLI::ExistingFile);
  filter->add_option("--lm", filter_lm)->required()->check(CLI::ExistingFile);
  filter->add_option("--out", filter_out, "Directory for kept.jsonl and rejected.jsonl (stdout if omitted)");
  filter->add_option("--ppl-threshold", filter_cfg.ppl_threshold);
  filter->add_option("--sparsity-threshold", filter_cfg.sparsity_threshold)->capture_default_str();

  // sample-configs
  auto* sample = app.add_subcommand("sample-configs", "Sample render configurations as JSONL");
  std::size_t count = 10;
  std::uint64_t seed = 0;
  SamplerOptions sampler;
  fs::path catalog_path;
  sample->add_option("--count", count)->capture_default_str();
  sample->add_option("--seed", seed)->capture_default_str();
  sample->add_option("--landscape", sampler.landscape_probability)->capture_default_str();
  sample->add_option("--highlight", sampler.highlight_probability)->capture_default_str();
  sample->add_option("--colored-paragraph", sampler.colored_paragraph_probability)->capture_default_str();
  sample->add_option("--catalog", catalog_path)->check(CLI::ExistingFile);

  // render-jobs
  auto* render = app.add_subcommand("render-jobs", "Emit HTML render jobs for Markdown documents");
  std::vector<fs::path> render_inputs;
  fs::path render_out;
  std::uint64_t render_seed = 0;
  render->add_option("inputs", render_inputs, "JSONL corpora or Markdown files")->required()->check(CLI::ExistingFile);
  render->add_option("--out", render_out)->required();
  render->add_option("--seed", render_seed)->capture_default_str();

  // augment
  auto* augment = app.add_subcommand("augment", "Image degradation protocol");
  augment->require_subcommand(1);
  auto* aug_list = augment->add_subcommand("list", "Print the transform registry as JSON");
  auto* aug_plan = augment->add_subcommand("plan", "Assign 1/2/3 transforms to thirds of the images");
  fs::path plan_ids, plan_images, plan_out;
  std::uint64_t plan_seed = 0;
  bool allow_remainder = false;
  auto* ids_opt = aug_plan->add_option("--ids", plan_ids, "File with one image id per line")->check(CLI::ExistingFile);
  aug_plan->add_option("--images", plan_images, "Directory of <id>.png")->check(CLI::ExistingDirectory)->excludes(ids_opt);
  aug_plan->add_option("--seed", plan_seed)->capture_default_str();
  aug_plan->add_flag("--allow-remainder", allow_remainder, "Pad the last subset when n is not divisible by 3");
  aug_plan->add_option("--out", plan_out, "Plan JSONL (stdout if omitted)");
  auto* aug_run = augment->add_subcommand("run", "Apply a plan");
  fs::path run_plan, run_images, run_out;
  int run_workers = 0;
  aug_run->add_option("--plan", run_plan)->required()->check(CLI::ExistingFile);
  aug_run->add_option("--images", run_images)->required()->check(CLI::ExistingDirectory);
  aug_run->add_option("--out", run_out)->required();
  aug_run->add_option("--workers", run_workers);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*eval_run) {
      EvalConfig cfg;
      cfg.options.normalize = eval_norm.config();
      cfg.options.teds_scope = teds_scope == "tables" ? TreeScope::tables : TreeScope::document;
      cfg.options.teds_cost.text_cost = teds_strict ? TextCost::strict : TextCost::normalized_levenshtein;
      cfg.options.cer_mode = cer_mode == "grapheme" ? CerMode::grapheme : CerMode::codepoint;
      cfg.options.aggregation = aggregate_mode == "sentence" ? Aggregation::sentence_mean : Aggregation::corpus;
      cfg.options.teds_decimals = teds_decimals;
      cfg.model_name = model_name;
      cfg.strict = strict;
      cfg.workers = workers;
      const auto manifest = load_manifest(manifest_path);
      const auto report = run_evaluation(manifest, pred_dir, cfg);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
      write_file(out_path, render_json(report));
      if (!per_entry_path.empty()) write_file(per_entry_path, per_entry_jsonl(report));
      if (report_format == "md") {
        const auto md = render_markdown(report);
        auto md_path = out_path;
        md_path.replace_extension(".md");
        write_file(md_path, md);
        std::cout << md;
      }
    } else if (*lint) {
      lint_cfg.require_page_number = !no_page_check;
      const auto findings = lint_ground_truth(load_manifest(lint_manifest), lint_cfg);
      for (const auto& f : findings) {
        std::cout << f.id << "\t" << to_string(f.kind) << "\t" << f.detail << "\n";
      }
      std::cerr << findings.size() << " finding(s)\n";
    } else if (*normalize) {
      const auto out = normalize_output(read_input(normalize_input), norm_flags.config());
      for (const auto& w : out.warnings) std::cerr << "warning: " << w << "\n";
      std::cout << out.text << "\n";
    } else if (*train) {
      std::vector<std::string> corpus;
      for (auto& r : load_corpus(train_inputs)) corpus.push_back(std::move(r.text));
      train_lm(corpus, order, k, unit == "word" ? LmUnit::word : LmUnit::character).save(lm_out);
    } else if (*filter) {
      filter_cfg.validate();
      const auto lm = CharNgramLm::load(filter_lm);
      const auto records = load_corpus(filter_inputs);
      std::vector<Document> docs;
      for (const auto& r : records) docs.push_back(parse_markdown_lenient(r.text).document);
      const auto result = filter_corpus(docs, lm, filter_cfg);
      std::string kept;
      std::string rejected;
      for (std::size_t i : result.kept) {
        kept += nlohmann::ordered_json{{"id", records[i].id}, {"text", records[i].text}}.dump() + "\n";
      }
      for (const auto& r : result.rejected) {
        auto reasons = nlohmann::ordered_json::array();
        for (const auto& why : r.reasons) {
          reasons.push_back({{"reason", std::string(to_string(why.reason))},
                             {"value", why.value},
                             {"detail", why.detail}});
        }
        rejected += nlohmann::ordered_json{{"id", records[r.index].id},
                                           {"text", records[r.index].text},
                                           {"reasons", reasons}}
                        .dump() +
                    "\n";
      }
      if (filter_out.empty()) {
        std::cout << kept << rejected;
      } else {
        write_file(filter_out / "kept.jsonl", kept);
        write_file(filter_out / "rejected.jsonl", rejected);
      }
      std::cerr << result.kept.size() << " kept, " << result.rejected.size() << " rejected\n";
    } else if (*sample) {
      if (!catalog_path.empty()) sampler.catalog = RenderCatalog::from_json(read_file(catalog_path));
      for (std::size_t i = 0; i < count; ++i) {
        std::cout << sample_render_config(seed + i, sampler).to_json() << "\n";
      }
    } else if (*render) {
      const auto records = load_corpus(render_inputs);
      std::string manifest;
      for (std::size_t i = 0; i < records.size(); ++i) {
        const auto doc = parse_markdown_lenient(records[i].text).document;
        const auto job_seed = render_seed + i;
        const auto job = emit_render_job(doc, sample_render_config(job_seed), job_seed);
        write_render_job(job, render_out);
        manifest += nlohmann::ordered_json{{"schema_version", RenderJob::kSchemaVersion},
                                           {"source_id", records[i].id},
                                           {"job_id", job.job_id},
                                           {"seed", job_seed}}
                        .dump() +
                    "\n";
        std::cout << records[i].id << "\t" << job.job_id << "\n";
      }
      write_file(render_out / "manifest.jsonl", manifest);
    } else if (*aug_list) {
      std::cout << registry_json() << "\n";
    } else if (*aug_plan) {
      std::vector<std::string> ids;
      if (!plan_ids.empty()) ids = read_ids(plan_ids);
      else if (!plan_images.empty()) ids = png_ids(plan_images);
      else throw Error(ErrorCode::InvalidConfig, "one of --ids or --images is required");
      const auto plan = plan_to_jsonl(plan_augmentation(ids, plan_seed, allow_remainder));
      if (plan_out.empty()) std::cout << plan;
      else write_file(plan_out, plan);
    } else if (*aug_run) {
      const auto plan = plan_from_jsonl(read_file(run_plan));
      const auto result = run_augmentation(plan, run_images, run_out, resolve_workers(run_workers));
      std::cerr << result.output_ids.size() << " image(s) written, manifest " << result.manifest.string() << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
