#include "trg/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include "json.hpp"
#include "trg/error.hpp"

namespace trg {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_punct(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '\'': case '"': case '(': case ')':
      return true;
    default:
      return false;
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace

Feature::Feature(std::string attribute, std::string value)
    : attribute_(std::move(attribute)), value_(std::move(value)) {
  if (attribute_.empty() || value_.empty())
    throw ValidationError("feature attribute and value must be non-empty");
  if (attribute_.find('=') != std::string::npos)
    throw ValidationError("feature attribute contains '=': " + attribute_);
  if (attribute_.find('\n') != std::string::npos || value_.find('\n') != std::string::npos)
    throw ValidationError("feature contains a newline");
}

Feature Feature::parse(std::string_view key) {
  auto eq = key.find('=');
  if (eq == std::string_view::npos) throw ValidationError("feature without '=': " + std::string(key));
  return Feature(std::string(trim(key.substr(0, eq))), std::string(trim(key.substr(eq + 1))));
}

FeatureCollection::FeatureCollection(std::initializer_list<Feature> features) {
  for (const auto& f : features) insert(f);
}

bool FeatureCollection::insert(Feature f) {
  if (contains(f)) return false;
  features_.push_back(std::move(f));
  return true;
}

bool FeatureCollection::contains(const Feature& f) const {
  return std::find(features_.begin(), features_.end(), f) != features_.end();
}

bool FeatureCollection::contains_attribute(std::string_view attribute) const {
  return std::any_of(features_.begin(), features_.end(),
                     [&](const Feature& f) { return f.attribute() == attribute; });
}

std::vector<std::string> FeatureCollection::attributes() const {
  std::vector<std::string> out;
  for (const auto& f : features_) out.push_back(f.attribute());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> FeatureCollection::keys() const {
  std::vector<std::string> out;
  out.reserve(features_.size());
  for (const auto& f : features_) out.push_back(f.key());
  return out;
}

std::vector<std::string> FeatureCollection::sorted_keys() const {
  auto out = keys();
  std::sort(out.begin(), out.end());
  return out;
}

FeatureCollection FeatureCollection::parse_list(std::string_view text) {
  FeatureCollection cc;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = trim(text.substr(0, comma));
    if (item.empty()) throw ValidationError("empty item in feature list");
    cc.insert(Feature::parse(item));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
    if (trim(text).empty()) throw ValidationError("trailing ',' in feature list");
  }
  return cc;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j == i) break;
    std::string_view chunk = text.substr(i, j - i);
    i = j;

    std::size_t lead = 0;
    while (lead < chunk.size() && is_punct(chunk[lead])) ++lead;
    std::size_t trail = chunk.size();
    while (trail > lead && is_punct(chunk[trail - 1])) --trail;

    for (std::size_t k = 0; k < lead; ++k) tokens.emplace_back(1, chunk[k]);
    if (trail > lead) {
      std::string word(chunk.substr(lead, trail - lead));
      // ASCII-only folding keeps multi-byte UTF-8 sequences intact.
      for (auto& c : word)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
      tokens.push_back(std::move(word));
    }
    for (std::size_t k = trail; k < chunk.size(); ++k) tokens.emplace_back(1, chunk[k]);
  }
  if (tokens.empty()) throw ValidationError("empty text");
  return tokens;
}

std::string join_tokens(const std::vector<Token>& tokens, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += ' ';
    out += tokens[i];
  }
  return out;
}

Instance make_instance(std::string id, std::string_view text, FeatureCollection cc) {
  Instance inst;
  inst.id = std::move(id);
  inst.text = std::string(text);
  inst.tokens = tokenize(text);
  inst.cc = std::move(cc);
  return inst;
}

Corpus::Corpus(std::vector<Instance> instances) : instances_(std::move(instances)) {
  std::unordered_set<std::string> ids;
  std::unordered_set<std::string> seen;
  for (const auto& inst : instances_) {
    if (inst.tokens.empty()) throw ValidationError("instance '" + inst.id + "' has no tokens");
    if (!ids.insert(inst.id).second) throw ValidationError("duplicate instance id '" + inst.id + "'");
    for (const auto& f : inst.cc)
      if (seen.insert(f.key()).second) universe_.push_back(f);
  }
}

std::size_t Corpus::find(std::string_view id) const {
  for (std::size_t i = 0; i < instances_.size(); ++i)
    if (instances_[i].id == id) return i;
  return instances_.size();
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NoInputError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

Corpus parse_corpus(std::string_view jsonl, std::vector<std::string>* warnings) {
  using nlohmann::json;
  std::vector<Instance> instances;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    auto nl = jsonl.find('\n', pos);
    auto line = jsonl.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? jsonl.size() : nl + 1;
    ++line_no;
    if (trim(line).empty()) continue;

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
    }
    if (!obj.is_object()) throw ParseError("expected a JSON object", line_no);
    for (const auto& [k, v] : obj.items())
      if (k != "id" && k != "text" && k != "features" && warnings)
        warnings->push_back("line " + std::to_string(line_no) + ": ignoring unknown key '" + k + "'");
    if (!obj.contains("id") || !obj["id"].is_string()) throw ParseError("missing string \"id\"", line_no);
    if (!obj.contains("text") || !obj["text"].is_string()) throw ParseError("missing string \"text\"", line_no);
    if (!obj.contains("features") || !obj["features"].is_array())
      throw ParseError("missing array \"features\"", line_no);

    std::string id = obj["id"].get<std::string>();
    if (!ids.insert(id).second) throw ValidationError("line " + std::to_string(line_no) + ": duplicate id '" + id + "'");
    FeatureCollection cc;
    try {
      for (const auto& f : obj["features"]) {
        if (!f.is_object() || !f.contains("attr") || !f.contains("value") || !f["attr"].is_string() ||
            !f["value"].is_string())
          throw ParseError("feature must be {\"attr\": string, \"value\": string}", line_no);
        cc.insert(Feature(f["attr"].get<std::string>(), f["value"].get<std::string>()));
      }
      instances.push_back(make_instance(std::move(id), obj["text"].get<std::string>(), std::move(cc)));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (instances.empty()) throw NoInputError("empty corpus");
  return Corpus(std::move(instances));
}

Corpus load_corpus(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  return parse_corpus(read_file(path), warnings);
}

std::string serialize_corpus(const Corpus& corpus) {
  using nlohmann::ordered_json;
  if (corpus.empty()) throw ValidationError("empty corpus");
  std::string out;
  for (const auto& inst : corpus.instances()) {
    ordered_json obj;
    obj["id"] = inst.id;
    obj["text"] = inst.text;
    obj["features"] = ordered_json::array();
    for (const auto& f : inst.cc) obj["features"].push_back({{"attr", f.attribute()}, {"value", f.value()}});
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  write_file(path, serialize_corpus(corpus));
}

}  // namespace trg
