// Brute-force reference implementations used only by the tests. They share
// no code path with the library beyond the corpus/model data types.
#ifndef TRG_TESTS_ORACLE_HPP
#define TRG_TESTS_ORACLE_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "trg/corpus.hpp"
#include "trg/generator.hpp"
#include "trg/lattice.hpp"

namespace oracle {

/// Exact non-negative fraction num/den (den > 0).
struct Ratio {
  __int128 num = 0;
  __int128 den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator<(const Ratio& a, const Ratio& b) { return a.num * b.den < b.num * a.den; }
  friend bool operator==(const Ratio& a, const Ratio& b) { return a.num * b.den == b.num * a.den; }
  friend bool operator>=(const Ratio& a, const Ratio& b) { return !(a < b); }
};

inline bool contains_run(const std::vector<std::string>& tokens, const std::vector<std::string>& w) {
  if (w.size() > tokens.size()) return false;
  for (std::size_t s = 0; s + w.size() <= tokens.size(); ++s)
    if (std::equal(w.begin(), w.end(), tokens.begin() + static_cast<std::ptrdiff_t>(s))) return true;
  return false;
}

struct Counts {
  std::int64_t n = 0, g = 0, w = 0, both = 0;
};

/// Scans every instance directly.
inline Counts count(const trg::Corpus& corpus, const std::vector<std::string>& w, const trg::Feature& g) {
  Counts c;
  c.n = static_cast<std::int64_t>(corpus.size());
  for (const auto& inst : corpus.instances()) {
    const bool hg = inst.cc.contains(g);
    const bool hw = contains_run(inst.tokens, w);
    c.g += hg;
    c.w += hw;
    c.both += hg && hw;
  }
  return c;
}

inline Ratio express(const Counts& c) {
  if (c.w == 0 || c.g == c.n) return {0, 1};
  // P(g|w) - P(g) = (both*N - g*w) / (w*N); divided by (N - g)/N.
  const __int128 lift = static_cast<__int128>(c.both) * c.n - static_cast<__int128>(c.g) * c.w;
  if (lift <= 0) return {0, 1};
  return {lift, static_cast<__int128>(c.w) * (c.n - c.g)};
}

inline Ratio core(const Counts& c) {
  if (c.g == 0) return {0, 1};
  return {c.both, c.g};
}

inline Ratio weight(const Counts& c) {
  const Ratio e = express(c), k = core(c);
  return {e.num * k.num, e.den * k.den};
}

inline std::vector<std::string> slice(const trg::Instance& inst, trg::Span s) {
  return {inst.tokens.begin() + static_cast<std::ptrdiff_t>(s.start),
          inst.tokens.begin() + static_cast<std::ptrdiff_t>(s.end)};
}

/// Naive alignment of one feature: full enumeration, every pairwise
/// comparison, components by repeated relaxation.
inline std::vector<trg::Span> align_feature(const trg::Corpus& corpus, const trg::Instance& inst,
                                            const trg::Feature& g, Ratio sigma) {
  const std::size_t n = inst.tokens.size();
  std::vector<trg::Span> spans;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t e = s + 1; e <= n; ++e) spans.push_back({s, e});
  std::vector<Ratio> w;
  for (auto s : spans) w.push_back(weight(count(corpus, slice(inst, s), g)));

  std::vector<bool> keep(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    bool is_max = true;
    for (std::size_t j = 0; j < spans.size(); ++j) {
      const bool comparable = trg::includes(spans[i], spans[j]) || trg::includes(spans[j], spans[i]);
      if (comparable && w[i] < w[j]) is_max = false;
    }
    keep[i] = is_max && w[i] >= sigma;
  }

  std::vector<std::size_t> label(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) label[i] = i;
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i < spans.size(); ++i)
      for (std::size_t j = 0; j < spans.size(); ++j) {
        if (!keep[i] || !keep[j] || !(w[i] == w[j])) continue;
        const bool edge = (trg::includes(spans[i], spans[j]) && spans[i].length() == spans[j].length() + 1) ||
                          (trg::includes(spans[j], spans[i]) && spans[j].length() == spans[i].length() + 1);
        if (edge && label[j] > label[i]) {
          label[j] = label[i];
          changed = true;
        }
      }
  }
  std::vector<trg::Span> out;
  for (std::size_t root = 0; root < spans.size(); ++root) {
    if (!keep[root] || label[root] != root) continue;
    trg::Span best = spans[root];
    for (std::size_t i = 0; i < spans.size(); ++i) {
      if (!keep[i] || label[i] != root) continue;
      const auto& s = spans[i];
      if (s.length() > best.length() || (s.length() == best.length() && s.start < best.start)) best = s;
    }
    out.push_back(best);
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct Enumerated {
  double weight = -1.0;
  std::string text;
  std::size_t candidates = 0;
};

/// Exhaustive argmax of the min-based appropriation weight over every
/// (schema, fragment per placeholder) combination; the first maximum in
/// (schema order, fragment order) wins.
inline Enumerated enumerate_best(const trg::TrgModel& model, const trg::FeatureCollection& query) {
  Enumerated best;
  const auto sq = trg::encode(query, model.schema_selector.index);
  const auto sw = trg::selection_weights(model.schema_selector, sq.vector);
  for (std::size_t s = 0; s < model.schemas.size(); ++s) {
    const auto& entry = model.schemas[s];
    const auto positions = entry.schema.placeholder_positions();
    std::vector<std::vector<double>> fw;
    std::vector<const trg::FragmentSelector*> sels;
    bool missing = false;
    for (std::size_t p : positions) {
      auto it = model.fragment_selectors.find({entry.id, p});
      if (it == model.fragment_selectors.end()) {
        missing = true;
        break;
      }
      sels.push_back(&it->second);
      fw.push_back(trg::selection_weights(it->second.model, trg::encode(query, it->second.model.index).vector));
    }
    if (missing) continue;
    std::vector<std::size_t> pick;
    auto visit = [&](auto&& self) -> void {
      if (pick.size() == positions.size()) {
        double p = std::clamp(sw[s], 0.0, 1.0);
        std::vector<std::string> texts;
        for (std::size_t i = 0; i < pick.size(); ++i) {
          p = std::min(p, std::clamp(fw[i][pick[i]], 0.0, 1.0));
          texts.push_back(sels[i]->items[pick[i]].text);
        }
        ++best.candidates;
        if (p > best.weight) {
          best.weight = p;
          best.text = trg::fill(entry.schema, texts);
        }
        return;
      }
      for (std::size_t i = 0; i < fw[pick.size()].size(); ++i) {
        pick.push_back(i);
        self(self);
        pick.pop_back();
      }
    };
    visit(visit);
  }
  return best;
}

/// Random corpus whose features tend to co-occur with "their" words, so that
/// alignments are non-trivial.
inline trg::Corpus random_corpus(std::mt19937_64& rng, std::size_t max_tokens = 8) {
  static const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g", "."};
  std::uniform_int_distribution<std::size_t> n_inst(2, 9), n_tok(1, max_tokens), pick_word(0, vocab.size() - 1),
      n_feat(0, 3), pick_val(0, 2), pick_attr(0, 2);
  std::bernoulli_distribution coin(0.6);
  std::vector<trg::Instance> instances;
  const std::size_t count = n_inst(rng);
  for (std::size_t i = 0; i < count; ++i) {
    trg::FeatureCollection cc;
    std::vector<std::string> words;
    const std::size_t nf = n_feat(rng);
    for (std::size_t f = 0; f < nf; ++f) {
      const std::size_t a = pick_attr(rng), v = pick_val(rng);
      cc.insert(trg::Feature("a" + std::to_string(a), "v" + std::to_string(v)));
      if (coin(rng)) words.push_back(vocab[(a * 3 + v) % (vocab.size() - 1)]);
    }
    const std::size_t target = std::max(words.size(), n_tok(rng));
    while (words.size() < target) {
      std::uniform_int_distribution<std::size_t> at(0, words.size());
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(at(rng)), vocab[pick_word(rng)]);
    }
    if (words.size() > max_tokens) words.resize(max_tokens);
    std::string text;
    for (const auto& w : words) text += (text.empty() ? "" : " ") + w;
    instances.push_back(trg::make_instance("r" + std::to_string(i), text, cc));
  }
  return trg::Corpus(std::move(instances));
}

/// Solves A x = b for square non-singular A by Gaussian elimination with
/// partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    std::swap(a[c], a[piv]);
    std::swap(b[c], b[piv]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= a[r][k] * x[k];
    x[r] = s / a[r][r];
  }
  return x;
}

}  // namespace oracle

#endif  // TRG_TESTS_ORACLE_HPP
