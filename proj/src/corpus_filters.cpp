#include "arabdoc/corpus_filters.hpp"

#include "arabdoc/error.hpp"
#include "arabdoc/text.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace arabdoc {

std::vector<std::string> CharNgramLm::split_units(std::string_view s) const {
  if (unit_ == LmUnit::word) return text::split_whitespace(s);
  std::vector<std::string> out;
  for (char32_t cp : text::decode_utf8(s)) {
    std::string u;
    text::append_utf8(u, cp);
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<std::uint32_t> CharNgramLm::encode(std::string_view s) const {
  std::vector<std::uint32_t> ids;
  for (const auto& u : split_units(s)) {
    const auto it = ids_.find(u);
    ids.push_back(it == ids_.end() ? kUnknown : it->second);
  }
  return ids;
}

double CharNgramLm::probability(const std::vector<std::uint32_t>& context,
                                std::uint32_t next) const {
  std::uint64_t joint = 0;
  std::uint64_t total = 0;
  if (const auto t = context_totals_.find(context); t != context_totals_.end()) {
    total = t->second;
    const auto& nexts = counts_.at(context);
    if (const auto c = nexts.find(next); c != nexts.end()) joint = c->second;
  }
  return (static_cast<double>(joint) + k_) /
         (static_cast<double>(total) + k_ * static_cast<double>(outcome_count()));
}

CharNgramLm CharNgramLm::uniform(const std::vector<std::string>& alphabet, int order,
                                 LmUnit unit) {
  CharNgramLm lm;
  lm.order_ = order;
  lm.k_ = 1.0;
  lm.unit_ = unit;
  for (const auto& a : alphabet) {
    if (lm.ids_.contains(a)) continue;
    lm.ids_.emplace(a, static_cast<std::uint32_t>(lm.vocab_.size() + 3));
    lm.vocab_.push_back(a);
  }
  return lm;
}

namespace {

void validate_lm_params(int order, double k) {
  if (order < 1 || order > 6) {
    throw Error(ErrorCode::InvalidConfig, "order must be in [1,6], got " + std::to_string(order));
  }
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw Error(ErrorCode::InvalidConfig, "smoothing k must be > 0");
  }
}

template <typename Fn>
void for_each_event(const std::vector<std::uint32_t>& ids, int order, Fn&& fn) {
  const std::size_t ctx_len = static_cast<std::size_t>(order - 1);
  std::vector<std::uint32_t> ctx(ctx_len, CharNgramLm::kBegin);
  auto feed = [&](std::uint32_t next) {
    fn(static_cast<const std::vector<std::uint32_t>&>(ctx), next);
    if (ctx_len > 0) {
      ctx.erase(ctx.begin());
      ctx.push_back(next);
    }
  };
  for (auto id : ids) feed(id);
  feed(CharNgramLm::kEnd);
}

}  // namespace

CharNgramLm train_lm(const std::vector<std::string>& corpus, int order, double k, LmUnit unit) {
  validate_lm_params(order, k);
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "cannot train on an empty corpus");
  CharNgramLm lm;
  lm.order_ = order;
  lm.k_ = k;
  lm.unit_ = unit;
  // Vocabulary ids follow first appearance so training is deterministic.
  std::vector<std::vector<std::uint32_t>> encoded;
  for (const auto& doc : corpus) {
    std::vector<std::uint32_t> ids;
    for (auto& u : lm.split_units(doc)) {
      auto it = lm.ids_.find(u);
      if (it == lm.ids_.end()) {
        it = lm.ids_.emplace(u, static_cast<std::uint32_t>(lm.vocab_.size() + 3)).first;
        lm.vocab_.push_back(u);
      }
      ids.push_back(it->second);
    }
    encoded.push_back(std::move(ids));
  }
  for (const auto& ids : encoded) {
    for_each_event(ids, order, [&](const std::vector<std::uint32_t>& ctx, std::uint32_t next) {
      ++lm.counts_[ctx][next];
      ++lm.context_totals_[ctx];
    });
  }
  return lm;
}

double perplexity(const CharNgramLm& lm, std::string_view s) {
  const auto ids = lm.encode(s);
  if (ids.empty()) throw Error(ErrorCode::EmptyText, "perplexity of empty text");
  double log_sum = 0.0;
  std::size_t n = 0;
  for_each_event(ids, lm.order(), [&](const std::vector<std::uint32_t>& ctx, std::uint32_t next) {
    log_sum += std::log(lm.probability(ctx, next));
    ++n;
  });
  return std::exp(-log_sum / static_cast<double>(n));
}

std::string CharNgramLm::to_json() const {
  nlohmann::json j;
  j["format"] = "arabdoc-ngram-lm";
  j["schema_version"] = kSchemaVersion;
  j["order"] = order_;
  j["smoothing_k"] = k_;
  j["unit"] = unit_ == LmUnit::character ? "character" : "word";
  j["vocabulary"] = vocab_;
  auto rows = nlohmann::json::array();
  for (const auto& [ctx, nexts] : counts_) {
    for (const auto& [next, count] : nexts) {
      rows.push_back({{"context", ctx}, {"next", next}, {"count", count}});
    }
  }
  j["counts"] = std::move(rows);
  return j.dump();
}

CharNgramLm CharNgramLm::from_json(std::string_view s) {
  CharNgramLm lm;
  try {
    const auto j = nlohmann::json::parse(s);
    if (j.at("format") != "arabdoc-ngram-lm") {
      throw Error(ErrorCode::SchemaError, "not a language model file");
    }
    if (j.at("schema_version").get<int>() != kSchemaVersion) {
      throw Error(ErrorCode::SchemaError, "unsupported language model schema_version");
    }
    lm.order_ = j.at("order").get<int>();
    lm.k_ = j.at("smoothing_k").get<double>();
    validate_lm_params(lm.order_, lm.k_);
    const auto unit = j.at("unit").get<std::string>();
    if (unit != "character" && unit != "word") throw Error(ErrorCode::SchemaError, "bad unit");
    lm.unit_ = unit == "character" ? LmUnit::character : LmUnit::word;
    lm.vocab_ = j.at("vocabulary").get<std::vector<std::string>>();
    for (std::size_t i = 0; i < lm.vocab_.size(); ++i) {
      lm.ids_.emplace(lm.vocab_[i], static_cast<std::uint32_t>(i + 3));
    }
    for (const auto& row : j.at("counts")) {
      auto ctx = row.at("context").get<std::vector<std::uint32_t>>();
      const auto next = row.at("next").get<std::uint32_t>();
      const auto count = row.at("count").get<std::uint64_t>();
      lm.counts_[ctx][next] += count;
      lm.context_totals_[ctx] += count;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SchemaError, e.what());
  }
  return lm;
}

void CharNgramLm::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << to_json() << '\n';
}

CharNgramLm CharNgramLm::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

namespace {

void count_cells(const HtmlTree& t, SparsityResult& r) {
  if (t.is_cell()) {
    ++r.total_cells;
    if (text::is_blank(inner_text(t))) ++r.empty_cells;
  }
  for (const auto& c : t.children) count_cells(c, r);
}

}  // namespace

SparsityResult table_sparsity(const HtmlTree& table) {
  if (table.label != "table") {
    throw Error(ErrorCode::NotATable, "tree root is <" + table.label + ">");
  }
  SparsityResult r;
  count_cells(table, r);
  r.fraction = r.total_cells == 0 ? 1.0
                                  : static_cast<double>(r.empty_cells) /
                                        static_cast<double>(r.total_cells);
  return r;
}

void FilterConfig::validate() const {
  if (!(ppl_threshold > 1.0)) throw Error(ErrorCode::InvalidConfig, "ppl_threshold must be > 1");
  if (!(sparsity_threshold >= 0.0 && sparsity_threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidConfig, "sparsity_threshold must be in [0,1]");
  }
}

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::Perplexity: return "Perplexity";
    case RejectReason::TableSparsity: return "TableSparsity";
    case RejectReason::EmptyText: return "EmptyText";
  }
  return "Unknown";
}

FilterResult filter_corpus(const std::vector<Document>& docs, const CharNgramLm& lm,
                           const FilterConfig& cfg) {
  cfg.validate();
  FilterResult result;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    std::vector<Rejection> reasons;
    const std::string body = plain_text(docs[i]);
    if (text::is_blank(body)) {
      reasons.push_back({RejectReason::EmptyText, "document has no text", 0.0});
    } else {
      const double ppl = perplexity(lm, body);
      if (ppl > cfg.ppl_threshold) {
        reasons.push_back({RejectReason::Perplexity, "perplexity above threshold", ppl});
      }
    }
    std::size_t t = 0;
    for (const auto* table : tables_of(docs[i])) {
      const auto s = table_sparsity(*table);
      if (s.fraction > cfg.sparsity_threshold) {
        std::string detail = "table " + std::to_string(t) + ": " +
                             std::to_string(s.empty_cells) + "/" +
                             std::to_string(s.total_cells) + " empty cells";
        if (s.total_cells == 0) detail = "table " + std::to_string(t) + " has no cells";
        reasons.push_back({RejectReason::TableSparsity, std::move(detail), s.fraction});
      }
      ++t;
    }
    if (reasons.empty()) {
      result.kept.push_back(i);
    } else {
      result.rejected.push_back({i, std::move(reasons)});
    }
  }
  return result;
}

}  // namespace arabdoc
