#ifndef TRG_SELECTOR_HPP
#define TRG_SELECTOR_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "trg/corpus.hpp"

namespace trg {

/// Column index over a selector's training feature universe, in
/// first-occurrence order.
class FeatureIndex {
 public:
  FeatureIndex() = default;
  explicit FeatureIndex(std::vector<std::string> keys);
  static FeatureIndex from_rows(const std::vector<FeatureCollection>& rows);

  std::size_t size() const { return keys_.size(); }
  const std::vector<std::string>& keys() const { return keys_; }
  std::optional<std::size_t> column(const std::string& key) const;

  friend bool operator==(const FeatureIndex& a, const FeatureIndex& b) { return a.keys_ == b.keys_; }

 private:
  std::vector<std::string> keys_;
  std::unordered_map<std::string, std::size_t> columns_;
};

struct EncodedQuery {
  Eigen::VectorXd vector;
  std::size_t ignored = 0;  // features absent from the index
};

/// Multi-hot encoding; unseen features are dropped and counted.
EncodedQuery encode(const FeatureCollection& cc, const FeatureIndex& index);

/// Per-item mapping vectors p_i (columns of `mapping`, M x items) solving
/// K p_i = s_i in the minimum-norm least-squares sense.
struct SelectorModel {
  FeatureIndex index;
  Eigen::MatrixXd mapping;

  std::size_t item_count() const { return static_cast<std::size_t>(mapping.cols()); }
  std::size_t feature_count() const { return index.size(); }
};

/// Singular values at or below this fraction of the largest are treated as zero.
inline constexpr double kPinvRcond = 1e-10;

/// Trains a selector. Row r of the design matrix encodes rows[r]; it derives
/// item item_of_row[r] (< item_count). Callers collapse identical items
/// before calling. Throws ValidationError when every row is empty.
SelectorModel train_selector(const std::vector<FeatureCollection>& rows,
                             const std::vector<std::size_t>& item_of_row, std::size_t item_count);

/// Convenience form: items identified by label; identical labels collapse
/// onto one item (first-occurrence order), returned through `items`.
SelectorModel train_selector(const std::vector<std::pair<std::string, FeatureCollection>>& records,
                             std::vector<std::string>* items);

struct Scored {
  std::size_t item = 0;
  double weight = 0.0;  // raw k* . p_i, not clipped
};

/// All selection weights, in item order.
std::vector<double> selection_weights(const SelectorModel& model, const Eigen::VectorXd& query);

/// Items ranked by weight (descending, ties by item order), at most top_n;
/// top_n == 0 returns every item.
std::vector<Scored> select(const SelectorModel& model, const Eigen::VectorXd& query, std::size_t top_n = 0);

nlohmann::ordered_json selector_to_json(const SelectorModel& model);
SelectorModel selector_from_json(const nlohmann::json& j);

}  // namespace trg

#endif  // TRG_SELECTOR_HPP
