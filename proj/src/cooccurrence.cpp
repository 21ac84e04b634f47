#include "trg/cooccurrence.hpp"

#include <algorithm>

#include "trg/error.hpp"

namespace trg {

std::size_t intersection_size(const InstanceSet& a, const InstanceSet& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

CooccurrenceTable CooccurrenceTable::build(const Corpus& corpus, std::optional<std::size_t> max_len) {
  CooccurrenceTable t;
  t.n_ = corpus.size();
  t.max_len_ = max_len;
  // Instances are visited in order, so each set stays sorted and a repeat
  // inside one instance shows up as the set's last element.
  auto add = [](InstanceSet& set, std::uint32_t idx) {
    if (set.empty() || set.back() != idx) set.push_back(idx);
  };
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const auto idx = static_cast<std::uint32_t>(i);
    const auto& inst = corpus[i];
    for (const auto& f : inst.cc) add(t.features_[f.key()], idx);
    const std::size_t n = inst.tokens.size();
    const std::size_t cap = max_len ? std::min(*max_len, n) : n;
    for (std::size_t s = 0; s < n; ++s) {
      std::string w;
      for (std::size_t e = s; e < n && e - s < cap; ++e) {
        if (e > s) w += ' ';
        w += inst.tokens[e];
        add(t.fragments_[w], idx);
      }
    }
  }
  return t;
}

const InstanceSet* CooccurrenceTable::instances_of(const Feature& g) const {
  auto it = features_.find(g.key());
  return it == features_.end() ? nullptr : &it->second;
}

const InstanceSet* CooccurrenceTable::instances_of(std::string_view fragment) const {
  auto it = fragments_.find(std::string(fragment));
  return it == fragments_.end() ? nullptr : &it->second;
}

double CooccurrenceTable::p_feature(const Feature& g) const {
  const auto* gs = instances_of(g);
  if (!gs || n_ == 0) return 0.0;
  return static_cast<double>(gs->size()) / static_cast<double>(n_);
}

double CooccurrenceTable::p_feature_given_fragment(const Feature& g, std::string_view w) const {
  const auto* ws = instances_of(w);
  if (!ws) throw DataError("fragment '" + std::string(w) + "' does not occur in the corpus");
  const auto* gs = instances_of(g);
  if (!gs) return 0.0;
  return static_cast<double>(intersection_size(*gs, *ws)) / static_cast<double>(ws->size());
}

double CooccurrenceTable::p_fragment_given_feature(std::string_view w, const Feature& g) const {
  const auto* gs = instances_of(g);
  if (!gs) throw DataError("feature '" + g.key() + "' does not occur in the corpus");
  const auto* ws = instances_of(w);
  if (!ws) return 0.0;
  return static_cast<double>(intersection_size(*ws, *gs)) / static_cast<double>(gs->size());
}

}  // namespace trg
