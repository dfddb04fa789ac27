#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace arabdoc {

/// Unit-cost Levenshtein distance (insert, delete, substitute) over any
/// equality-comparable sequence.
template <typename T>
std::size_t levenshtein(std::span<const T> a, std::span<const T> b) {
  if (a.size() < b.size()) std::swap(a, b);
  // One DP row; short rows live on the stack.
  std::array<std::size_t, 64> small;
  std::vector<std::size_t> large;
  std::size_t* row = small.data();
  if (b.size() + 1 > small.size()) {
    large.resize(b.size() + 1);
    row = large.data();
  }
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    std::size_t left = i;
    row[0] = i;
    const T& ai = a[i - 1];
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      const std::size_t sub = diag + (ai == b[j - 1] ? 0 : 1);
      left = std::min(std::min(up, left) + 1, sub);
      row[j] = left;
      diag = up;
    }
  }
  return row[b.size()];
}

inline std::size_t levenshtein(std::u32string_view a, std::u32string_view b) {
  return levenshtein<char32_t>(std::span<const char32_t>(a.data(), a.size()),
                               std::span<const char32_t>(b.data(), b.size()));
}

/// Raw edit counts; rates pool across a corpus by summing these.
struct EditCounts {
  std::uint64_t edits = 0;
  std::uint64_t reference_length = 0;

  double rate() const;
  EditCounts& operator+=(const EditCounts& o) {
    edits += o.edits;
    reference_length += o.reference_length;
    return *this;
  }
  bool operator==(const EditCounts&) const = default;
};

enum class CerMode { codepoint, grapheme };

/// Throws Error(EmptyReference) if the reference has no characters.
EditCounts char_edit_counts(std::string_view reference, std::string_view hypothesis,
                            CerMode mode = CerMode::codepoint);
double cer(std::string_view reference, std::string_view hypothesis,
           CerMode mode = CerMode::codepoint);

/// Whitespace tokenisation. Throws Error(EmptyReference) with no tokens.
EditCounts word_edit_counts(std::string_view reference, std::string_view hypothesis);
double wer(std::string_view reference, std::string_view hypothesis);

enum class Aggregation { corpus, sentence_mean };

inline constexpr int kBleuOrder = 4;

struct BleuStats {
  std::array<std::uint64_t, kBleuOrder> matches{};
  std::array<std::uint64_t, kBleuOrder> totals{};
  std::uint64_t hypothesis_length = 0;
  std::uint64_t reference_length = 0;

  BleuStats& operator+=(const BleuStats& o);
  bool operator==(const BleuStats&) const = default;
};

BleuStats bleu_stats(std::string_view reference, std::string_view hypothesis);

/// BLEU in [0,100]: clipped n-gram precisions for n = 1..4, geometric mean,
/// brevity penalty exp(1 - r/c) when c < r. Zero unigram matches give 0;
/// a zero higher-order precision is smoothed to 1/(total + 1).
double bleu_score(const BleuStats& stats);

/// Throws LengthMismatch / EmptyCorpus.
double bleu(const std::vector<std::string>& references,
            const std::vector<std::string>& hypotheses,
            Aggregation aggregation = Aggregation::corpus);

inline constexpr int kChrfOrder = 6;
inline constexpr double kChrfBeta = 2.0;

struct ChrfStats {
  std::array<std::uint64_t, kChrfOrder> hypothesis{};
  std::array<std::uint64_t, kChrfOrder> reference{};
  std::array<std::uint64_t, kChrfOrder> matches{};

  ChrfStats& operator+=(const ChrfStats& o);
  bool operator==(const ChrfStats&) const = default;
};

/// Character n-gram counts (n = 1..6) with whitespace removed.
ChrfStats chrf_stats(std::string_view reference, std::string_view hypothesis);

/// ChrF in [0,100]. Precision and recall are averaged over the orders for
/// which both sides have n-grams, then combined as F-beta with beta = 2.
/// Two empty sides score 100.
double chrf_score(const ChrfStats& stats);

double chrf(const std::vector<std::string>& references,
            const std::vector<std::string>& hypotheses,
            Aggregation aggregation = Aggregation::corpus);

/// (chrf + teds) / 2, both on the 0..100 scale. Throws OutOfRange.
double mars(double chrf_score, double teds_score);

/// Rounds half away from zero to `decimals` places.
double round_to(double value, int decimals);

}  // namespace arabdoc
