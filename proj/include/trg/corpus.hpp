#ifndef TRG_CORPUS_HPP
#define TRG_CORPUS_HPP

#include <compare>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace trg {

/// An attribute=value pair, e.g. price=cheap.
class Feature {
 public:
  Feature(std::string attribute, std::string value);

  /// Parses "attr=value", splitting at the first '='.
  static Feature parse(std::string_view key);

  const std::string& attribute() const { return attribute_; }
  const std::string& value() const { return value_; }
  std::string key() const { return attribute_ + "=" + value_; }

  friend bool operator==(const Feature& a, const Feature& b) {
    return a.attribute_ == b.attribute_ && a.value_ == b.value_;
  }
  // Byte-wise on the canonical key. Attributes never contain '=', so
  // comparing (attribute, '=' + value) lexicographically is equivalent.
  friend std::strong_ordering operator<=>(const Feature& a, const Feature& b) {
    return a.key() <=> b.key();
  }

 private:
  std::string attribute_;
  std::string value_;
};

/// A collection of concepts (CC): a duplicate-free set of features kept in
/// insertion order. Repeated attributes with different values are allowed.
class FeatureCollection {
 public:
  FeatureCollection() = default;
  FeatureCollection(std::initializer_list<Feature> features);

  /// Returns false if the feature was already present.
  bool insert(Feature f);
  bool contains(const Feature& f) const;
  bool contains_attribute(std::string_view attribute) const;

  const std::vector<Feature>& features() const { return features_; }
  std::size_t size() const { return features_.size(); }
  bool empty() const { return features_.empty(); }
  auto begin() const { return features_.begin(); }
  auto end() const { return features_.end(); }

  /// Sorted, de-duplicated attribute names.
  std::vector<std::string> attributes() const;
  /// Canonical keys in insertion order.
  std::vector<std::string> keys() const;
  /// Canonical keys in byte-wise order; used for set equality.
  std::vector<std::string> sorted_keys() const;

  /// Parses "a=v,a=v" (whitespace around items is trimmed).
  static FeatureCollection parse_list(std::string_view text);

  // Set semantics: insertion order does not matter.
  friend bool operator==(const FeatureCollection& a, const FeatureCollection& b) {
    return a.sorted_keys() == b.sorted_keys();
  }

 private:
  std::vector<Feature> features_;
};

using Token = std::string;

/// Lowercases ASCII, splits on whitespace and peels leading/trailing
/// punctuation (.,;:!?'"()) into standalone tokens. Throws ValidationError
/// on whitespace-only input.
std::vector<Token> tokenize(std::string_view text);

std::string join_tokens(const std::vector<Token>& tokens, std::size_t begin, std::size_t end);
inline std::string join_tokens(const std::vector<Token>& tokens) {
  return join_tokens(tokens, 0, tokens.size());
}

struct Instance {
  std::string id;
  std::string text;  // raw text as ingested, for display
  std::vector<Token> tokens;
  FeatureCollection cc;

  friend bool operator==(const Instance&, const Instance&) = default;
};

/// Builds an instance from raw text, tokenizing it.
Instance make_instance(std::string id, std::string_view text, FeatureCollection cc);

class Corpus {
 public:
  Corpus() = default;
  /// Validates ids (unique) and tokens (non-empty) and builds the feature
  /// universe in first-occurrence order.
  explicit Corpus(std::vector<Instance> instances);

  const std::vector<Instance>& instances() const { return instances_; }
  const std::vector<Feature>& feature_universe() const { return universe_; }
  std::size_t size() const { return instances_.size(); }
  bool empty() const { return instances_.empty(); }
  const Instance& operator[](std::size_t i) const { return instances_[i]; }

  /// Index of the instance with this id, or size() if absent.
  std::size_t find(std::string_view id) const;

  friend bool operator==(const Corpus& a, const Corpus& b) { return a.instances_ == b.instances_; }

 private:
  std::vector<Instance> instances_;
  std::vector<Feature> universe_;
};

/// Reads a JSONL corpus. Unknown keys are reported through `warnings`.
Corpus load_corpus(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);
Corpus parse_corpus(std::string_view jsonl, std::vector<std::string>* warnings = nullptr);

/// Canonical serialization: one {"id","text","features"} object per line.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
std::string serialize_corpus(const Corpus& corpus);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace trg

#endif  // TRG_CORPUS_HPP
