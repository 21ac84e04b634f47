#include "trg/model.hpp"

#include <algorithm>
#include <cstdio>

#include "json.hpp"
#include "trg/error.hpp"

namespace trg {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string key_string(const PlaceholderKey& k) {
  return std::to_string(k.schema) + ":" + std::to_string(k.position);
}

PlaceholderKey parse_key(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) throw ValidationError("fragment key '" + s + "' is not schemaIndex:position");
  try {
    std::size_t used = 0;
    PlaceholderKey k;
    k.schema = std::stoul(s.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(s);
    k.position = std::stoul(s.substr(colon + 1), &used);
    if (used != s.size() - colon - 1) throw std::invalid_argument(s);
    return k;
  } catch (const std::logic_error&) {
    throw ValidationError("fragment key '" + s + "' is not schemaIndex:position");
  }
}

FeatureCollection cc_from_json(const json& arr) {
  FeatureCollection cc;
  for (const auto& k : arr) cc.insert(Feature::parse(k.get<std::string>()));
  return cc;
}

std::string dump(const ordered_json& j) { return j.dump(1) + "\n"; }

}  // namespace

std::optional<std::size_t> TrgModel::find_schema(std::size_t id) const {
  for (std::size_t i = 0; i < schemas.size(); ++i)
    if (schemas[i].id == id) return i;
  return std::nullopt;
}

TrgModel model_from_datasets(const Datasets& datasets) {
  TrgModel model;
  const auto& sd = datasets.schema_dataset;
  for (std::size_t i = 0; i < sd.schemas.size(); ++i) model.schemas.push_back({i, sd.schemas[i], {}});
  for (const auto& rec : sd.records) model.schemas[rec.schema].records.push_back(rec.cc);
  model.fragments = datasets.fragment_datasets;
  return model;
}

void train_selectors(TrgModel& model) {
  model.fragment_selectors.clear();
  model.schema_selector = {};
  if (!model.schemas.empty()) {
    std::vector<FeatureCollection> rows;
    std::vector<std::size_t> items;
    for (std::size_t i = 0; i < model.schemas.size(); ++i)
      for (const auto& cc : model.schemas[i].records) {
        rows.push_back(cc);
        items.push_back(i);
      }
    if (rows.empty()) throw ValidationError("schema dataset has no records");
    model.schema_selector = train_selector(rows, items, model.schemas.size());
  }
  for (const auto& [key, records] : model.fragments) {
    if (records.empty()) continue;
    FragmentSelector sel;
    std::vector<FeatureCollection> rows;
    std::vector<std::size_t> items;
    for (const auto& rec : records) {
      auto it = std::find(sel.items.begin(), sel.items.end(), rec);
      items.push_back(static_cast<std::size_t>(it - sel.items.begin()));
      if (it == sel.items.end()) sel.items.push_back(rec);
      rows.push_back(rec.cc);
    }
    try {
      sel.model = train_selector(rows, items, sel.items.size());
    } catch (const ValidationError& e) {
      throw ValidationError("fragment dataset " + key_string(key) + ": " + e.what());
    }
    model.fragment_selectors.emplace(key, std::move(sel));
  }
}

std::string digest(std::string_view bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string schemas_to_json(const TrgModel& model) {
  auto arr = ordered_json::array();
  for (const auto& entry : model.schemas) {
    ordered_json s;
    s["id"] = entry.id;
    auto elems = ordered_json::array();
    for (const auto& e : entry.schema.elements) {
      if (const auto* p = std::get_if<Placeholder>(&e))
        elems.push_back({{"ph", p->attributes}});
      else
        elems.push_back({{"lit", std::get<Literal>(e).text}});
    }
    s["elements"] = std::move(elems);
    auto ccs = ordered_json::array();
    for (const auto& cc : entry.records) ccs.push_back(cc.keys());
    s["cc"] = std::move(ccs);
    arr.push_back(std::move(s));
  }
  return dump(arr);
}

std::string fragments_to_json(const TrgModel& model) {
  ordered_json obj = ordered_json::object();
  for (const auto& [key, records] : model.fragments) {
    auto arr = ordered_json::array();
    for (const auto& r : records) arr.push_back({{"text", r.text}, {"cc", r.cc.keys()}});
    obj[key_string(key)] = std::move(arr);
  }
  return dump(obj);
}

std::string selectors_to_json(const TrgModel& model) {
  ordered_json obj;
  ordered_json schema_sel = selector_to_json(model.schema_selector);
  auto ids = ordered_json::array();
  for (const auto& e : model.schemas) ids.push_back(e.id);
  schema_sel["items"] = std::move(ids);
  obj["schema_selector"] = std::move(schema_sel);
  ordered_json frag = ordered_json::object();
  for (const auto& [key, sel] : model.fragment_selectors) {
    ordered_json j = selector_to_json(sel.model);
    auto items = ordered_json::array();
    for (const auto& r : sel.items) items.push_back({{"text", r.text}, {"cc", r.cc.keys()}});
    j["items"] = std::move(items);
    frag[key_string(key)] = std::move(j);
  }
  obj["fragment_selectors"] = std::move(frag);
  return dump(obj);
}

namespace {

std::string meta_to_json(const ModelMeta& meta) {
  ordered_json j;
  j["format_version"] = meta.format_version;
  j["sigma"] = meta.sigma;
  j["max_len"] = meta.max_len ? ordered_json(*meta.max_len) : ordered_json(nullptr);
  j["corpus_digest"] = meta.corpus_digest;
  j["corpus_instances"] = meta.corpus_instances;
  j["datasets_digest"] = meta.datasets_digest;
  return dump(j);
}

std::string datasets_digest(std::string_view schemas, std::string_view fragments) {
  return digest(std::string(schemas) + '\0' + std::string(fragments));
}

}  // namespace

void save_model(const std::filesystem::path& dir, const TrgModel& model, const std::vector<AlignedInstance>& aligned,
                ModelMeta meta) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create model directory '" + dir.string() + "': " + ec.message());
  const std::string schemas = schemas_to_json(model);
  const std::string fragments = fragments_to_json(model);
  meta.datasets_digest = datasets_digest(schemas, fragments);
  write_file(dir / "schemas.json", schemas);
  write_file(dir / "fragments.json", fragments);
  write_file(dir / "selectors.json", selectors_to_json(model));
  write_file(dir / "aligned.jsonl", serialize_aligned(aligned));
  write_file(dir / "meta.json", meta_to_json(meta));
}

TrgModel parse_datasets(std::string_view schemas_json, std::string_view fragments_json,
                        std::vector<std::string>* warnings) {
  TrgModel model;
  auto warn = [&](std::string msg) {
    if (warnings) warnings->push_back(std::move(msg));
  };
  json sj, fj;
  try {
    sj = json::parse(schemas_json);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("schemas.json: ") + e.what());
  }
  try {
    fj = json::parse(fragments_json);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("fragments.json: ") + e.what());
  }
  if (!sj.is_array()) throw ValidationError("schemas.json must hold an array");
  if (!fj.is_object()) throw ValidationError("fragments.json must hold an object");

  try {
    for (const auto& s : sj) {
      SchemaEntry entry;
      entry.id = s.at("id").get<std::size_t>();
      if (model.find_schema(entry.id)) throw ValidationError("duplicate schema id " + std::to_string(entry.id));
      for (const auto& e : s.at("elements")) {
        if (e.contains("ph"))
          entry.schema.elements.emplace_back(Placeholder(e["ph"].get<std::vector<std::string>>()));
        else if (e.contains("lit"))
          entry.schema.elements.emplace_back(Literal{e["lit"].get<std::string>()});
        else
          throw ValidationError("schema element needs \"ph\" or \"lit\"");
      }
      if (entry.schema.elements.empty()) throw ValidationError("schema " + std::to_string(entry.id) + " is empty");
      if (s.contains("cc"))
        for (const auto& cc : s["cc"]) entry.records.push_back(cc_from_json(cc));
      if (entry.records.empty()) warn("schema " + std::to_string(entry.id) + " has no training records");
      model.schemas.push_back(std::move(entry));
    }
    for (const auto& [k, arr] : fj.items()) {
      const PlaceholderKey key = parse_key(k);
      auto idx = model.find_schema(key.schema);
      if (!idx) {
        warn("fragments " + k + " refer to a missing schema; dropped");
        continue;
      }
      const auto& elems = model.schemas[*idx].schema.elements;
      if (key.position >= elems.size() || !std::holds_alternative<Placeholder>(elems[key.position])) {
        warn("fragments " + k + " do not point at a placeholder; dropped");
        continue;
      }
      auto& records = model.fragments[key];
      for (const auto& r : arr) records.push_back({r.at("text").get<std::string>(), cc_from_json(r.at("cc"))});
    }
  } catch (const json::exception& e) {
    throw ValidationError(e.what());
  }
  for (const auto& entry : model.schemas)
    for (std::size_t pos : entry.schema.placeholder_positions()) {
      auto it = model.fragments.find({entry.id, pos});
      if (it == model.fragments.end() || it->second.empty())
        warn("schema " + std::to_string(entry.id) + " position " + std::to_string(pos) + " has no fragments");
    }
  return model;
}

ModelMeta load_meta(const std::filesystem::path& dir) {
  json j;
  try {
    j = json::parse(read_file(dir / "meta.json"));
    ModelMeta meta;
    meta.format_version = j.at("format_version").get<int>();
    meta.sigma = j.at("sigma").get<double>();
    if (!j.at("max_len").is_null()) meta.max_len = j["max_len"].get<std::size_t>();
    meta.corpus_digest = j.at("corpus_digest").get<std::string>();
    meta.corpus_instances = j.at("corpus_instances").get<std::size_t>();
    meta.datasets_digest = j.at("datasets_digest").get<std::string>();
    if (meta.format_version != kModelFormatVersion)
      throw ValidationError("unsupported model format version " + std::to_string(meta.format_version));
    return meta;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("meta.json: ") + e.what());
  }
}

TrgModel load_model(const std::filesystem::path& dir) {
  const ModelMeta meta = load_meta(dir);
  const std::string schemas = read_file(dir / "schemas.json");
  const std::string fragments = read_file(dir / "fragments.json");
  if (datasets_digest(schemas, fragments) != meta.datasets_digest)
    throw ValidationError("schemas.json/fragments.json edited since training; run validate first");
  TrgModel model = parse_datasets(schemas, fragments);
  try {
    json sel = json::parse(read_file(dir / "selectors.json"));
    model.schema_selector = selector_from_json(sel.at("schema_selector"));
    if (model.schema_selector.item_count() != model.schemas.size())
      throw ValidationError("schema selector does not match schemas.json");
    for (const auto& [k, j] : sel.at("fragment_selectors").items()) {
      const PlaceholderKey key = parse_key(k);
      FragmentSelector fs;
      fs.model = selector_from_json(j);
      for (const auto& r : j.at("items")) fs.items.push_back({r.at("text").get<std::string>(), cc_from_json(r.at("cc"))});
      if (fs.items.size() != fs.model.item_count()) throw ValidationError("fragment selector " + k + " is inconsistent");
      model.fragment_selectors.emplace(key, std::move(fs));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("selectors.json: ") + e.what());
  }
  return model;
}

ValidationReport validate_model(const std::filesystem::path& dir, const std::optional<std::filesystem::path>& corpus) {
  ValidationReport report;
  ModelMeta meta = load_meta(dir);
  const std::string schemas = read_file(dir / "schemas.json");
  const std::string fragments = read_file(dir / "fragments.json");
  report.datasets_edited = datasets_digest(schemas, fragments) != meta.datasets_digest;
  TrgModel model = parse_datasets(schemas, fragments, &report.warnings);
  train_selectors(model);
  report.schema_count = model.schemas.size();
  report.fragment_dataset_count = model.fragments.size();
  if (corpus) {
    const std::string bytes = read_file(*corpus);
    report.corpus_stale = digest(bytes) != meta.corpus_digest;
    if (report.corpus_stale) report.warnings.push_back("corpus digest differs from the one the model was trained on");
  }
  meta.datasets_digest = datasets_digest(schemas, fragments);
  write_file(dir / "selectors.json", selectors_to_json(model));
  write_file(dir / "meta.json", meta_to_json(meta));
  return report;
}

}  // namespace trg
