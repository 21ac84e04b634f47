#ifndef TRG_ALIGNER_HPP
#define TRG_ALIGNER_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "trg/cooccurrence.hpp"
#include "trg/corpus.hpp"
#include "trg/lattice.hpp"

namespace trg {

/// Absolute tolerance for comparing alignment weights.
inline constexpr double kWeightTolerance = 1e-12;

struct AlignConfig {
  double sigma = 0.5;
  /// Neighbourhood used by the maxima test. Components are always grouped
  /// by immediate adjacency.
  Neighbourhood neighbourhood = Neighbourhood::comparable;
  std::optional<std::size_t> max_len;

  /// Throws ValidationError unless 0 <= sigma <= 1.
  void validate() const;
};

/// Express(w,g): normalised lift of g given w. Zero when P(g|w) <= P(g) or
/// P(g) = 1.
double express(std::string_view w, const Feature& g, const CooccurrenceTable& table);
/// Core(w,g) = P(w|g).
double core(std::string_view w, const Feature& g, const CooccurrenceTable& table);
/// Express * Core; the alignment score. Zero for fragments not in the table.
double weight(std::string_view w, const Feature& g, const CooccurrenceTable& table);

struct AlignedSegment {
  Span span;
  FeatureCollection features;  // empty for unaligned segments

  friend bool operator==(const AlignedSegment&, const AlignedSegment&) = default;
};

struct AlignedInstance {
  Instance instance;
  std::vector<AlignedSegment> segments;  // partition of the tokens, in order

  friend bool operator==(const AlignedInstance&, const AlignedInstance&) = default;
};

/// weight(w,g) for every fragment of the instance, in triangle index order.
std::vector<double> weight_triangle(const Instance& instance, const Feature& g,
                                    const CooccurrenceTable& table);

/// Triangle flags marking the maxima of `values` (>= every neighbour).
std::vector<bool> maxima(const FragmentTriangle& triangle, const std::vector<double>& values,
                         Neighbourhood mode = Neighbourhood::comparable);

/// Fragments aligned to `g`: the longest (leftmost on ties) fragment of each
/// connected region of maxima whose weight clears sigma. Results are
/// ordered by start. When `diagnostics` is given, a note is appended for
/// any connected region whose maxima disagree in weight; such a region is
/// split into equal-weight parts.
std::vector<Span> align_feature(const Instance& instance, const Feature& g, const CooccurrenceTable& table,
                                const AlignConfig& config = {},
                                std::vector<std::string>* diagnostics = nullptr);

/// Unions overlapping spans (and their feature sets) until none overlap.
/// Output is sorted by start; features keep the order of `order_hint`
/// (normally the instance CC).
std::vector<AlignedSegment> merge_overlapping(std::vector<AlignedSegment> aligned,
                                              const FeatureCollection& order_hint);

/// Splits [0, token_count) at the borders of the (non-overlapping)
/// aligned spans; gaps become segments with no features.
std::vector<AlignedSegment> segment(std::vector<AlignedSegment> aligned, std::size_t token_count);

AlignedInstance align_instance(const Instance& instance, const CooccurrenceTable& table,
                               const AlignConfig& config = {},
                               std::vector<std::string>* diagnostics = nullptr);

/// Builds the table once, aligns each instance (in parallel for jobs > 1)
/// and returns results in corpus order.
std::vector<AlignedInstance> align_corpus(const Corpus& corpus, const AlignConfig& config = {},
                                          std::size_t jobs = 1,
                                          std::vector<std::string>* diagnostics = nullptr);

/// One JSON object per line:
/// {"id", "tokens", "cc", "segments": [{"start", "end", "features"}]}.
std::string serialize_aligned(const std::vector<AlignedInstance>& aligned);
std::vector<AlignedInstance> parse_aligned(std::string_view jsonl);

}  // namespace trg

#endif  // TRG_ALIGNER_HPP
