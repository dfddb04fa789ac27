#include "arabdoc/evaluate.hpp"

#include "arabdoc/error.hpp"

namespace arabdoc {

MetricReport evaluate_texts(std::string_view reference, std::string_view hypothesis,
                            const EvalOptions& options) {
  const auto ref = normalize_output(reference, options.normalize);
  const auto hyp = normalize_output(hypothesis, options.normalize);

  MetricReport r;
  for (const auto& w : ref.warnings) r.warnings.push_back("reference: " + w);
  for (const auto& w : hyp.warnings) r.warnings.push_back("hypothesis: " + w);

  r.char_counts = char_edit_counts(ref.text, hyp.text, options.cer_mode);
  r.word_counts = word_edit_counts(ref.text, hyp.text);
  r.bleu_counts = bleu_stats(ref.text, hyp.text);
  r.chrf_counts = chrf_stats(ref.text, hyp.text);

  r.cer = r.char_counts.rate();
  r.wer = r.word_counts.rate();
  r.bleu = bleu_score(r.bleu_counts);
  r.chrf = chrf_score(r.chrf_counts);

  const auto ref_tree = document_to_tree(ref.document, options.teds_scope);
  const auto hyp_tree = document_to_tree(hyp.document, options.teds_scope);
  r.teds_raw = 100.0 * teds_similarity(ref_tree, hyp_tree, options.teds_cost);
  r.teds = round_to(r.teds_raw, options.teds_decimals);
  r.mars = mars(r.chrf, r.teds);
  return r;
}

MetricReport evaluate_pair(const Document& reference, const Document& hypothesis,
                           const EvalOptions& options) {
  return evaluate_texts(serialize(reference), serialize(hypothesis), options);
}

MetricReport aggregate(const std::vector<MetricReport>& pairs, const EvalOptions& options) {
  if (pairs.empty()) throw Error(ErrorCode::EmptyCorpus, "no pairs to aggregate");
  MetricReport c;
  double teds_sum = 0.0;
  double bleu_sum = 0.0;
  double chrf_sum = 0.0;
  for (const auto& p : pairs) {
    c.word_counts += p.word_counts;
    c.char_counts += p.char_counts;
    c.bleu_counts += p.bleu_counts;
    c.chrf_counts += p.chrf_counts;
    teds_sum += p.teds_raw;
    bleu_sum += p.bleu;
    chrf_sum += p.chrf;
  }
  const double n = static_cast<double>(pairs.size());
  c.wer = c.word_counts.rate();
  c.cer = c.char_counts.rate();
  if (options.aggregation == Aggregation::corpus) {
    c.bleu = bleu_score(c.bleu_counts);
    c.chrf = chrf_score(c.chrf_counts);
  } else {
    c.bleu = bleu_sum / n;
    c.chrf = chrf_sum / n;
  }
  c.teds_raw = teds_sum / n;
  c.teds = round_to(c.teds_raw, options.teds_decimals);
  c.mars = mars(c.chrf, c.teds);
  return c;
}

}  // namespace arabdoc
