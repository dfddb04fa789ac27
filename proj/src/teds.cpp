#include "arabdoc/teds.hpp"

#include "arabdoc/metrics.hpp"
#include "arabdoc/text.hpp"

#include <algorithm>
#include <vector>

namespace arabdoc {

double normalized_text_distance(std::string_view a, std::string_view b) {
  const auto ua = text::decode_utf8(a);
  const auto ub = text::decode_utf8(b);
  const auto longest = std::max(ua.size(), ub.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(levenshtein(ua, ub)) / static_cast<double>(longest);
}

double CostModel::relabel(const HtmlTree& a, const HtmlTree& b) const {
  if (a.label != b.label) return 1.0;
  if (a.is_text()) {
    if (a.text == b.text) return 0.0;
    if (text_cost == TextCost::strict) return 1.0;
    return normalized_text_distance(a.text, b.text);
  }
  if (a.cell_attrs != b.cell_attrs) return 1.0;
  return 0.0;
}

namespace {

// Postorder view of a tree with leftmost-leaf descendants and keyroots.
struct Annotated {
  std::vector<const HtmlTree*> nodes;
  std::vector<std::size_t> leftmost;
  std::vector<std::size_t> keyroots;
  std::vector<std::u32string> texts;

  explicit Annotated(const HtmlTree& root) {
    visit(root);
    std::vector<bool> seen(nodes.size(), false);
    for (std::size_t i = nodes.size(); i-- > 0;) {
      if (!seen[leftmost[i]]) {
        keyroots.push_back(i);
        seen[leftmost[i]] = true;
      }
    }
    std::sort(keyroots.begin(), keyroots.end());
    texts.reserve(nodes.size());
    for (const auto* n : nodes) {
      texts.push_back(n->is_text() ? text::decode_utf8(n->text) : std::u32string());
    }
  }

  std::size_t visit(const HtmlTree& t) {
    std::size_t first_leaf = static_cast<std::size_t>(-1);
    for (const auto& c : t.children) {
      const std::size_t lm = visit(c);
      if (first_leaf == static_cast<std::size_t>(-1)) first_leaf = lm;
    }
    const std::size_t index = nodes.size();
    nodes.push_back(&t);
    leftmost.push_back(first_leaf == static_cast<std::size_t>(-1) ? index : first_leaf);
    return leftmost.back();
  }
};

double relabel_cost(const Annotated& ta, std::size_t i, const Annotated& tb, std::size_t j,
                    const CostModel& cost) {
  const HtmlTree& a = *ta.nodes[i];
  const HtmlTree& b = *tb.nodes[j];
  if (a.label != b.label) return 1.0;
  if (a.is_text() && a.text != b.text && cost.text_cost == TextCost::normalized_levenshtein) {
    const auto& sa = ta.texts[i];
    const auto& sb = tb.texts[j];
    const auto longest = std::max(sa.size(), sb.size());
    return static_cast<double>(levenshtein(sa, sb)) / static_cast<double>(longest);
  }
  return cost.relabel(a, b);
}

}  // namespace

double tree_edit_distance(const HtmlTree& a, const HtmlTree& b, const CostModel& cost) {
  const Annotated ta(a);
  const Annotated tb(b);
  const std::size_t n1 = ta.nodes.size();
  const std::size_t n2 = tb.nodes.size();
  const double del = cost.delete_cost();
  const double ins = cost.insert_cost();

  std::vector<double> treedist(n1 * n2, 0.0);
  std::vector<double> fd((n1 + 1) * (n2 + 1), 0.0);
  const std::size_t stride = n2 + 1;

  for (std::size_t i : ta.keyroots) {
    for (std::size_t j : tb.keyroots) {
      const std::size_t li = ta.leftmost[i];
      const std::size_t lj = tb.leftmost[j];
      const std::size_t m = i - li + 2;
      const std::size_t n = j - lj + 2;
      fd[0] = 0.0;
      for (std::size_t x = 1; x < m; ++x) fd[x * stride] = fd[(x - 1) * stride] + del;
      for (std::size_t y = 1; y < n; ++y) fd[y] = fd[y - 1] + ins;
      for (std::size_t x = 1; x < m; ++x) {
        const std::size_t i1 = li + x - 1;
        for (std::size_t y = 1; y < n; ++y) {
          const std::size_t j1 = lj + y - 1;
          const double remove = fd[(x - 1) * stride + y] + del;
          const double insert = fd[x * stride + y - 1] + ins;
          if (ta.leftmost[i1] == li && tb.leftmost[j1] == lj) {
            const double rel = fd[(x - 1) * stride + y - 1] + relabel_cost(ta, i1, tb, j1, cost);
            const double best = std::min({remove, insert, rel});
            fd[x * stride + y] = best;
            treedist[i1 * n2 + j1] = best;
          } else {
            const std::size_t p = ta.leftmost[i1] - li;
            const std::size_t q = tb.leftmost[j1] - lj;
            const double sub = fd[p * stride + q] + treedist[i1 * n2 + j1];
            fd[x * stride + y] = std::min({remove, insert, sub});
          }
        }
      }
    }
  }
  return treedist[(n1 - 1) * n2 + (n2 - 1)];
}

double teds_similarity(const HtmlTree& a, const HtmlTree& b, const CostModel& cost) {
  const double ted = tree_edit_distance(a, b, cost);
  const double denom = static_cast<double>(std::max(a.size(), b.size()));
  return std::clamp(1.0 - ted / denom, 0.0, 1.0);
}

}  // namespace arabdoc
