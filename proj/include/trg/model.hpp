#ifndef TRG_MODEL_HPP
#define TRG_MODEL_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "trg/aligner.hpp"
#include "trg/schema.hpp"
#include "trg/selector.hpp"

namespace trg {

inline constexpr int kModelFormatVersion = 1;

/// A schema with a stable id and the CCs of its schema-dataset records.
struct SchemaEntry {
  std::size_t id = 0;
  Schema schema;
  std::vector<FeatureCollection> records;
};

/// Fragment datasets are keyed by (schema id, placeholder position).
struct FragmentSelector {
  std::vector<FragmentRecord> items;  // distinct (text, cc) in first-occurrence order
  SelectorModel model;
};

struct TrgModel {
  std::vector<SchemaEntry> schemas;
  std::map<PlaceholderKey, std::vector<FragmentRecord>> fragments;

  SelectorModel schema_selector;  // items = schemas, in order
  std::map<PlaceholderKey, FragmentSelector> fragment_selectors;

  /// Position of the schema with this id, if any.
  std::optional<std::size_t> find_schema(std::size_t id) const;
};

/// Groups the extracted datasets into a model with ids 0..n-1 (untrained).
TrgModel model_from_datasets(const Datasets& datasets);

/// (Re)trains the schema selector and every fragment selector.
void train_selectors(TrgModel& model);

struct ModelMeta {
  int format_version = kModelFormatVersion;
  double sigma = 0.5;
  std::optional<std::size_t> max_len;
  std::string corpus_digest;
  std::size_t corpus_instances = 0;
  std::string datasets_digest;  // digest of schemas.json + fragments.json
};

/// 64-bit FNV-1a, hex encoded.
std::string digest(std::string_view bytes);

/// Writes schemas.json, fragments.json, selectors.json, aligned.jsonl and
/// meta.json. Output is byte-identical for identical inputs.
void save_model(const std::filesystem::path& dir, const TrgModel& model, const std::vector<AlignedInstance>& aligned,
                ModelMeta meta);

std::string schemas_to_json(const TrgModel& model);
std::string fragments_to_json(const TrgModel& model);
std::string selectors_to_json(const TrgModel& model);

/// Parses schemas.json + fragments.json (hand edits allowed). Fragment
/// datasets that refer to a missing schema or a non-placeholder position are
/// dropped with a warning.
TrgModel parse_datasets(std::string_view schemas_json, std::string_view fragments_json,
                        std::vector<std::string>* warnings = nullptr);

ModelMeta load_meta(const std::filesystem::path& dir);

/// Loads a trained model. Throws ValidationError if schemas.json or
/// fragments.json changed since the selectors were trained.
TrgModel load_model(const std::filesystem::path& dir);

struct ValidationReport {
  std::vector<std::string> warnings;
  bool datasets_edited = false;
  bool corpus_stale = false;
  std::size_t schema_count = 0;
  std::size_t fragment_dataset_count = 0;
};

/// Re-reads the hand-editable files, retrains every selector and refreshes
/// selectors.json / meta.json. `corpus` (optional) is checked against the
/// stored digest.
ValidationReport validate_model(const std::filesystem::path& dir,
                                const std::optional<std::filesystem::path>& corpus = std::nullopt);

}  // namespace trg

#endif  // TRG_MODEL_HPP
