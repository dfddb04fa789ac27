#include "arabdoc/metrics.hpp"

#include "arabdoc/error.hpp"
#include "arabdoc/text.hpp"

#include <cmath>
#include <map>

namespace arabdoc {

double EditCounts::rate() const {
  if (reference_length == 0) throw Error(ErrorCode::EmptyReference, "reference is empty");
  return static_cast<double>(edits) / static_cast<double>(reference_length);
}

EditCounts char_edit_counts(std::string_view reference, std::string_view hypothesis,
                            CerMode mode) {
  if (mode == CerMode::codepoint) {
    const auto r = text::decode_utf8(reference);
    if (r.empty()) throw Error(ErrorCode::EmptyReference, "reference has no characters");
    const auto h = text::decode_utf8(hypothesis);
    return {levenshtein(r, h), r.size()};
  }
  const auto r = text::graphemes(reference);
  if (r.empty()) throw Error(ErrorCode::EmptyReference, "reference has no characters");
  const auto h = text::graphemes(hypothesis);
  return {levenshtein<std::string>(r, h), r.size()};
}

double cer(std::string_view reference, std::string_view hypothesis, CerMode mode) {
  return char_edit_counts(reference, hypothesis, mode).rate();
}

EditCounts word_edit_counts(std::string_view reference, std::string_view hypothesis) {
  const auto r = text::split_whitespace(reference);
  if (r.empty()) throw Error(ErrorCode::EmptyReference, "reference has no tokens");
  const auto h = text::split_whitespace(hypothesis);
  return {levenshtein<std::string>(r, h), r.size()};
}

double wer(std::string_view reference, std::string_view hypothesis) {
  return word_edit_counts(reference, hypothesis).rate();
}

BleuStats& BleuStats::operator+=(const BleuStats& o) {
  for (int n = 0; n < kBleuOrder; ++n) {
    matches[n] += o.matches[n];
    totals[n] += o.totals[n];
  }
  hypothesis_length += o.hypothesis_length;
  reference_length += o.reference_length;
  return *this;
}

namespace {

template <typename Seq>
std::map<Seq, std::uint64_t> ngram_counts(const std::vector<typename Seq::value_type>& units,
                                          std::size_t n) {
  std::map<Seq, std::uint64_t> counts;
  if (units.size() < n) return counts;
  for (std::size_t i = 0; i + n <= units.size(); ++i) {
    ++counts[Seq(units.begin() + static_cast<std::ptrdiff_t>(i),
                 units.begin() + static_cast<std::ptrdiff_t>(i + n))];
  }
  return counts;
}

template <typename Map>
std::uint64_t clipped_matches(const Map& hyp, const Map& ref) {
  std::uint64_t m = 0;
  for (const auto& [gram, count] : hyp) {
    const auto it = ref.find(gram);
    if (it != ref.end()) m += std::min(count, it->second);
  }
  return m;
}

template <typename Map>
std::uint64_t total(const Map& m) {
  std::uint64_t t = 0;
  for (const auto& kv : m) t += kv.second;
  return t;
}

void check_corpus(const std::vector<std::string>& refs, const std::vector<std::string>& hyps) {
  if (refs.size() != hyps.size()) {
    throw Error(ErrorCode::LengthMismatch, std::to_string(refs.size()) + " references vs " +
                                               std::to_string(hyps.size()) + " hypotheses");
  }
  if (refs.empty()) throw Error(ErrorCode::EmptyCorpus, "no sentence pairs");
}

}  // namespace

BleuStats bleu_stats(std::string_view reference, std::string_view hypothesis) {
  using Gram = std::vector<std::string>;
  const auto r = text::split_whitespace(reference);
  const auto h = text::split_whitespace(hypothesis);
  BleuStats s;
  s.hypothesis_length = h.size();
  s.reference_length = r.size();
  for (std::size_t n = 1; n <= kBleuOrder; ++n) {
    const auto hc = ngram_counts<Gram>(h, n);
    const auto rc = ngram_counts<Gram>(r, n);
    s.matches[n - 1] = clipped_matches(hc, rc);
    s.totals[n - 1] = h.size() >= n ? h.size() - n + 1 : 0;
  }
  return s;
}

double bleu_score(const BleuStats& s) {
  if (s.hypothesis_length == 0 || s.matches[0] == 0) return 0.0;
  double log_sum = 0.0;
  for (int n = 0; n < kBleuOrder; ++n) {
    double p = 0.0;
    if (n == 0) {
      p = static_cast<double>(s.matches[0]) / static_cast<double>(s.totals[0]);
    } else if (s.matches[n] == 0) {
      p = 1.0 / static_cast<double>(s.totals[n] + 1);
    } else {
      p = static_cast<double>(s.matches[n]) / static_cast<double>(s.totals[n]);
    }
    log_sum += std::log(p);
  }
  const double c = static_cast<double>(s.hypothesis_length);
  const double r = static_cast<double>(s.reference_length);
  const double bp = c < r ? std::exp(1.0 - r / c) : 1.0;
  return 100.0 * bp * std::exp(log_sum / kBleuOrder);
}

double bleu(const std::vector<std::string>& references,
            const std::vector<std::string>& hypotheses, Aggregation aggregation) {
  check_corpus(references, hypotheses);
  if (aggregation == Aggregation::corpus) {
    BleuStats total_stats;
    for (std::size_t i = 0; i < references.size(); ++i) {
      total_stats += bleu_stats(references[i], hypotheses[i]);
    }
    return bleu_score(total_stats);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < references.size(); ++i) {
    sum += bleu_score(bleu_stats(references[i], hypotheses[i]));
  }
  return sum / static_cast<double>(references.size());
}

ChrfStats& ChrfStats::operator+=(const ChrfStats& o) {
  for (int n = 0; n < kChrfOrder; ++n) {
    hypothesis[n] += o.hypothesis[n];
    reference[n] += o.reference[n];
    matches[n] += o.matches[n];
  }
  return *this;
}

ChrfStats chrf_stats(std::string_view reference, std::string_view hypothesis) {
  auto strip = [](std::string_view s) {
    std::vector<char32_t> out;
    for (char32_t cp : text::decode_utf8(s)) {
      if (!text::is_whitespace(cp)) out.push_back(cp);
    }
    return out;
  };
  const auto r = strip(reference);
  const auto h = strip(hypothesis);
  ChrfStats s;
  for (std::size_t n = 1; n <= kChrfOrder; ++n) {
    const auto hc = ngram_counts<std::u32string>(h, n);
    const auto rc = ngram_counts<std::u32string>(r, n);
    s.hypothesis[n - 1] = total(hc);
    s.reference[n - 1] = total(rc);
    s.matches[n - 1] = clipped_matches(hc, rc);
  }
  return s;
}

double chrf_score(const ChrfStats& s) {
  double precision = 0.0;
  double recall = 0.0;
  int effective = 0;
  bool any = false;
  for (int n = 0; n < kChrfOrder; ++n) {
    if (s.hypothesis[n] > 0 || s.reference[n] > 0) any = true;
    if (s.hypothesis[n] == 0 || s.reference[n] == 0) continue;
    precision += static_cast<double>(s.matches[n]) / static_cast<double>(s.hypothesis[n]);
    recall += static_cast<double>(s.matches[n]) / static_cast<double>(s.reference[n]);
    ++effective;
  }
  if (!any) return 100.0;
  if (effective == 0) return 0.0;
  precision /= effective;
  recall /= effective;
  if (precision + recall == 0.0) return 0.0;
  const double b2 = kChrfBeta * kChrfBeta;
  return 100.0 * (1.0 + b2) * precision * recall / (b2 * precision + recall);
}

double chrf(const std::vector<std::string>& references,
            const std::vector<std::string>& hypotheses, Aggregation aggregation) {
  check_corpus(references, hypotheses);
  if (aggregation == Aggregation::corpus) {
    ChrfStats total_stats;
    for (std::size_t i = 0; i < references.size(); ++i) {
      total_stats += chrf_stats(references[i], hypotheses[i]);
    }
    return chrf_score(total_stats);
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < references.size(); ++i) {
    sum += chrf_score(chrf_stats(references[i], hypotheses[i]));
  }
  return sum / static_cast<double>(references.size());
}

double mars(double chrf_value, double teds_value) {
  auto check = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0 || v > 100.0) {
      throw Error(ErrorCode::OutOfRange,
                  std::string(name) + " = " + std::to_string(v) + " outside [0,100]");
    }
  };
  check(chrf_value, "chrf");
  check(teds_value, "teds");
  return (chrf_value + teds_value) / 2.0;
}

double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

}  // namespace arabdoc
