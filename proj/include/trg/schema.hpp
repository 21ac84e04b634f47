#ifndef TRG_SCHEMA_HPP
#define TRG_SCHEMA_HPP

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "trg/aligner.hpp"
#include "trg/corpus.hpp"

namespace trg {

/// Schema slot carrying the attributes its fragment expresses.
struct Placeholder {
  std::vector<std::string> attributes;  // sorted, unique, non-empty

  explicit Placeholder(std::vector<std::string> attrs);
  friend bool operator==(const Placeholder&, const Placeholder&) = default;
  friend auto operator<=>(const Placeholder&, const Placeholder&) = default;
};

/// Literal token string kept verbatim in the schema.
struct Literal {
  std::string text;
  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal&, const Literal&) = default;
};

using SchemaElement = std::variant<Placeholder, Literal>;

/// A sentence plan: placeholders interleaved with literal segments.
/// Two schemata are the same iff they are element-wise equal.
struct Schema {
  std::vector<SchemaElement> elements;

  std::size_t placeholder_count() const;
  /// Element indices of the placeholders, in order.
  std::vector<std::size_t> placeholder_positions() const;
  /// Union of the placeholder attributes, sorted.
  std::vector<std::string> attributes() const;

  friend bool operator==(const Schema&, const Schema&) = default;
};

/// Human-readable form, e.g. `[name] "is a" [price]`.
std::string to_string(const Schema& schema);

/// A fragment that filled placeholder `position` (element index) of a schema.
struct FragmentRecord {
  std::string text;
  FeatureCollection cc;
  friend bool operator==(const FragmentRecord&, const FragmentRecord&) = default;
};

struct SchemaExtraction {
  Schema schema;
  std::vector<std::pair<std::size_t, FragmentRecord>> fragments;  // (position, record)
};

SchemaExtraction to_schema(const AlignedInstance& aligned);

/// Key of one fragment dataset: schema index + placeholder position.
struct PlaceholderKey {
  std::size_t schema = 0;
  std::size_t position = 0;
  friend auto operator<=>(const PlaceholderKey&, const PlaceholderKey&) = default;
};

struct SchemaRecord {
  std::size_t schema = 0;  // index into SchemaDataset::schemas
  FeatureCollection cc;    // full instance CC
};

struct SchemaDataset {
  std::vector<Schema> schemas;       // distinct, first-occurrence order
  std::vector<SchemaRecord> records; // one per aligned instance, corpus order
};

using FragmentDatasets = std::map<PlaceholderKey, std::vector<FragmentRecord>>;

struct Datasets {
  SchemaDataset schema_dataset;
  FragmentDatasets fragment_datasets;
};

Datasets build_datasets(const std::vector<AlignedInstance>& aligned);

}  // namespace trg

#endif  // TRG_SCHEMA_HPP
