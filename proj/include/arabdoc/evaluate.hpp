#pragma once

#include "arabdoc/doc_model.hpp"
#include "arabdoc/metrics.hpp"
#include "arabdoc/normalize.hpp"
#include "arabdoc/teds.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace arabdoc {

struct EvalOptions {
  NormalizeConfig normalize;
  TreeScope teds_scope = TreeScope::document;
  CostModel teds_cost;
  CerMode cer_mode = CerMode::codepoint;
  Aggregation aggregation = Aggregation::corpus;
  /// Reported TEDS precision; MARS is composed from the reported value.
  int teds_decimals = 0;
};

/// Scores for one pair or for a whole corpus. The raw count fields let corpus
/// rows be rebuilt exactly without going through rounded per-pair scores.
struct MetricReport {
  double wer = 0.0;
  double cer = 0.0;
  double bleu = 0.0;
  double chrf = 0.0;
  double teds = 0.0;  // rounded to EvalOptions::teds_decimals
  double mars = 0.0;  // (chrf + teds) / 2
  std::vector<std::string> warnings;

  double teds_raw = 0.0;  // full precision, 0..100
  EditCounts word_counts;
  EditCounts char_counts;
  BleuStats bleu_counts;
  ChrfStats chrf_counts;

  bool operator==(const MetricReport&) const = default;
};

/// Normalizes both raw texts, then scores them. Throws Error(EmptyReference)
/// when the normalized reference is empty.
MetricReport evaluate_texts(std::string_view reference, std::string_view hypothesis,
                            const EvalOptions& options = {});

MetricReport evaluate_pair(const Document& reference, const Document& hypothesis,
                           const EvalOptions& options = {});

/// Corpus row from per-pair reports: WER/CER pool edit counts, BLEU/ChrF pool
/// n-gram counts (or average per-pair scores in sentence_mean mode) and TEDS
/// is the mean of per-pair raw TEDS.
MetricReport aggregate(const std::vector<MetricReport>& pairs, const EvalOptions& options = {});

}  // namespace arabdoc
