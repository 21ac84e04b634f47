#ifndef TRG_GENERATOR_HPP
#define TRG_GENERATOR_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "trg/error.hpp"
#include "trg/model.hpp"

namespace trg {

struct GenOptions {
  double min_weight = 0.0;
  std::size_t beam = 0;      // children kept per expansion; 0 = unlimited
  bool strict = false;       // only schemata whose attributes equal the query's
  bool greedy = false;       // best schema, then best fragment per slot
  bool copy_values = false;  // offer the raw value when no fragment expresses it
};

struct Choice {
  std::size_t position = 0;  // element index in the schema
  std::size_t item = 0;      // fragment selector item; items.size() for a copied value
  std::string text;
  FeatureCollection cc;
  double weight = 0.0;  // raw selection weight
  bool copied = false;
};

struct Candidate {
  std::size_t schema_index = 0;  // position in TrgModel::schemas
  std::size_t schema_id = 0;
  double schema_weight = 0.0;  // raw
  std::vector<Choice> choices;
  double weight = 0.0;  // appropriation weight P(x)
};

struct TraceEntry {
  std::string kind;  // "schema" or "fragment"
  std::size_t schema_id = 0;
  std::optional<std::size_t> position;
  std::string item;
  double weight = 0.0;
};

struct GenResult {
  std::string text;
  Candidate candidate;
  std::vector<TraceEntry> trace;
};

class NoSchemaError : public Error {
 public:
  using Error::Error;
};

class NoFragmentCandidateError : public Error {
 public:
  using Error::Error;
};

/// Best candidate fell below GenOptions::min_weight; it is kept for inspection.
class BelowThresholdError : public Error {
 public:
  explicit BelowThresholdError(GenResult best);
  const GenResult& best() const { return best_; }

 private:
  GenResult best_;
};

inline double clamp_unit(double w) { return w < 0.0 ? 0.0 : (w > 1.0 ? 1.0 : w); }

/// P(x): the minimum of the clamped component weights. Empty input gives 0.
double appropriation_weight(std::span<const double> component_weights);

/// Literals verbatim, placeholders replaced in order, single-space joined.
/// Throws ValidationError on arity mismatch.
std::string fill(const Schema& schema, const std::vector<std::string>& choices);

/// The candidate maximising P(x). Ties resolve to the earliest schema, then
/// the earliest fragment items in training order.
GenResult generate(const TrgModel& model, const FeatureCollection& query, const GenOptions& options = {});

/// Up to k distinct texts in descending P(x).
std::vector<GenResult> generate_k(const TrgModel& model, const FeatureCollection& query, std::size_t k,
                                  const GenOptions& options = {});

GenResult generate(const std::filesystem::path& model_dir, const FeatureCollection& query,
                   const GenOptions& options = {});

/// {"text", "weight", "schema_index", "choices", "trace"}.
nlohmann::ordered_json result_to_json(const GenResult& result);

}  // namespace trg

#endif  // TRG_GENERATOR_HPP
