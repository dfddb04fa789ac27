#pragma once

#include "arabdoc/doc_model.hpp"
#include "arabdoc/html_tree.hpp"

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace arabdoc {

enum class LmUnit { character, word };

/// Add-k smoothed n-gram model with begin-of-sequence padding and an
/// end-of-sequence symbol. Unseen units map to a shared unknown symbol.
class CharNgramLm {
public:
  static constexpr int kSchemaVersion = 1;
  static constexpr std::uint32_t kUnknown = 0;
  static constexpr std::uint32_t kEnd = 1;
  static constexpr std::uint32_t kBegin = 2;  // context padding only, never predicted

  int order() const { return order_; }
  double smoothing_k() const { return k_; }
  LmUnit unit() const { return unit_; }

  /// Vocabulary units in id order (ids 3, 4, ...).
  const std::vector<std::string>& vocabulary() const { return vocab_; }

  /// Number of outcomes a context can predict: vocabulary + end + unknown.
  std::size_t outcome_count() const { return vocab_.size() + 2; }

  /// Conditional probability of `next` (a unit id) after `context` (the last
  /// order-1 unit ids, padded with kBegin).
  double probability(const std::vector<std::uint32_t>& context, std::uint32_t next) const;

  /// Unit ids for text, without padding or end symbol.
  std::vector<std::uint32_t> encode(std::string_view text) const;

  /// Model with no counts, hence uniform over alphabet + end + unknown.
  static CharNgramLm uniform(const std::vector<std::string>& alphabet, int order = 1,
                             LmUnit unit = LmUnit::character);

  void save(const std::filesystem::path& path) const;
  static CharNgramLm load(const std::filesystem::path& path);
  std::string to_json() const;
  static CharNgramLm from_json(std::string_view json);

  bool operator==(const CharNgramLm&) const = default;

  friend CharNgramLm train_lm(const std::vector<std::string>& corpus, int order, double k,
                              LmUnit unit);

private:
  std::vector<std::string> split_units(std::string_view text) const;

  int order_ = 5;
  double k_ = 0.1;
  LmUnit unit_ = LmUnit::character;
  std::vector<std::string> vocab_;
  std::map<std::string, std::uint32_t> ids_;
  std::map<std::vector<std::uint32_t>, std::map<std::uint32_t, std::uint64_t>> counts_;
  std::map<std::vector<std::uint32_t>, std::uint64_t> context_totals_;
};

/// Throws EmptyCorpus for an empty corpus and InvalidConfig for order outside
/// [1,6] or k <= 0.
CharNgramLm train_lm(const std::vector<std::string>& corpus, int order = 5, double k = 0.1,
                     LmUnit unit = LmUnit::character);

/// exp(-(1/N) sum log P(u_i | context)) over the units plus the end symbol.
/// Throws EmptyText.
double perplexity(const CharNgramLm& lm, std::string_view text);

struct SparsityResult {
  double fraction = 1.0;
  std::size_t empty_cells = 0;
  std::size_t total_cells = 0;
};

/// Share of td/th cells whose text is empty or whitespace. A table with no
/// cells has sparsity 1. Throws NotATable.
SparsityResult table_sparsity(const HtmlTree& table);

struct FilterConfig {
  double ppl_threshold = std::numeric_limits<double>::infinity();
  double sparsity_threshold = 0.25;

  void validate() const;
};

enum class RejectReason { Perplexity, TableSparsity, EmptyText };

std::string_view to_string(RejectReason r);

struct Rejection {
  RejectReason reason = RejectReason::Perplexity;
  std::string detail;
  double value = 0.0;
};

struct RejectedDocument {
  std::size_t index = 0;
  std::vector<Rejection> reasons;
};

struct FilterResult {
  std::vector<std::size_t> kept;  // input indices, ascending
  std::vector<RejectedDocument> rejected;
};

/// A document is rejected iff its perplexity exceeds ppl_threshold or any of
/// its tables has sparsity strictly above sparsity_threshold.
FilterResult filter_corpus(const std::vector<Document>& docs, const CharNgramLm& lm,
                           const FilterConfig& cfg);

}  // namespace arabdoc
