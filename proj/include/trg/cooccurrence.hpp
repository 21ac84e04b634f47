#ifndef TRG_COOCCURRENCE_HPP
#define TRG_COOCCURRENCE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "trg/corpus.hpp"

namespace trg {

/// Sorted indices of the corpus instances where something occurs.
using InstanceSet = std::vector<std::uint32_t>;

std::size_t intersection_size(const InstanceSet& a, const InstanceSet& b);

/// Whole-instance, binary co-occurrence counts over a corpus: for each
/// feature the instances whose CC holds it, for each fragment surface string
/// the instances whose TD contains it contiguously.
class CooccurrenceTable {
 public:
  /// `max_len` caps the fragment length recorded; nullopt means unlimited.
  static CooccurrenceTable build(const Corpus& corpus, std::optional<std::size_t> max_len = std::nullopt);

  std::size_t instance_count() const { return n_; }
  std::optional<std::size_t> max_len() const { return max_len_; }

  /// nullptr when the feature / fragment never occurs.
  const InstanceSet* instances_of(const Feature& g) const;
  const InstanceSet* instances_of(std::string_view fragment) const;

  std::size_t fragment_count() const { return fragments_.size(); }

  /// P(g) = |instances(g)| / N.
  double p_feature(const Feature& g) const;
  /// P(g|w). Throws DataError if w never occurs.
  double p_feature_given_fragment(const Feature& g, std::string_view w) const;
  /// P(w|g). Throws DataError if g never occurs; 0 for absent w.
  double p_fragment_given_feature(std::string_view w, const Feature& g) const;

 private:
  std::size_t n_ = 0;
  std::optional<std::size_t> max_len_;
  std::unordered_map<std::string, InstanceSet> features_;
  std::unordered_map<std::string, InstanceSet> fragments_;
};

}  // namespace trg

#endif  // TRG_COOCCURRENCE_HPP
