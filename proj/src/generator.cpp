#include "trg/generator.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <queue>
#include <set>

namespace trg {

BelowThresholdError::BelowThresholdError(GenResult best)
    : Error("best appropriation weight " + std::to_string(best.candidate.weight) + " is below the threshold"),
      best_(std::move(best)) {}

double appropriation_weight(std::span<const double> component_weights) {
  if (component_weights.empty()) return 0.0;
  double w = 1.0;
  for (double c : component_weights) w = std::min(w, clamp_unit(c));
  return w;
}

std::string fill(const Schema& schema, const std::vector<std::string>& choices) {
  if (choices.size() != schema.placeholder_count())
    throw ValidationError("schema has " + std::to_string(schema.placeholder_count()) + " placeholders, got " +
                          std::to_string(choices.size()) + " fragments");
  std::string out;
  std::size_t next = 0;
  for (const auto& e : schema.elements) {
    const std::string& piece =
        std::holds_alternative<Placeholder>(e) ? choices[next++] : std::get<Literal>(e).text;
    if (piece.empty()) continue;
    if (!out.empty()) out += ' ';
    out += piece;
  }
  return out;
}

namespace {

struct Option {
  std::size_t item;
  double raw;
  double clamped;
  const FragmentRecord* record;  // null for a copied value
  FragmentRecord copy;
};

struct State {
  double bound;
  std::size_t schema;
  std::vector<std::size_t> picks;  // indices into the slot's option list
};

// Max-heap order: higher bound first, then earlier schema, then
// lexicographically smaller picks (a prefix sorts before its extensions).
struct LowerPriority {
  bool operator()(const State& a, const State& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    if (a.schema != b.schema) return a.schema > b.schema;
    return std::lexicographical_compare(b.picks.begin(), b.picks.end(), a.picks.begin(), a.picks.end());
  }
};

class Search {
 public:
  Search(const TrgModel& model, const FeatureCollection& query, const GenOptions& options)
      : model_(model), query_(query), options_(options) {
    if (query.empty()) throw ValidationError("empty query");
    if (model.schemas.empty()) throw NoSchemaError("model has no schemata");
    const auto q = encode(query, model.schema_selector.index);
    schema_weights_ = selection_weights(model.schema_selector, q.vector);
    const auto query_attrs = query.attributes();
    for (std::size_t i = 0; i < model.schemas.size(); ++i) {
      trace_.push_back({"schema", model.schemas[i].id, std::nullopt, to_string(model.schemas[i].schema),
                        schema_weights_[i]});
      if (!options.strict || model.schemas[i].schema.attributes() == query_attrs) eligible_.push_back(i);
    }
    if (eligible_.empty()) throw NoSchemaError("no schema covers the query attributes");
    if (options.beam > 0 && eligible_.size() > options.beam) {
      std::stable_sort(eligible_.begin(), eligible_.end(),
                       [&](std::size_t a, std::size_t b) { return schema_weights_[a] > schema_weights_[b]; });
      eligible_.resize(options.beam);
      std::sort(eligible_.begin(), eligible_.end());
    }
  }

  std::vector<GenResult> best_first(std::size_t k) {
    std::priority_queue<State, std::vector<State>, LowerPriority> open;
    for (std::size_t s : eligible_) open.push({clamp_unit(schema_weights_[s]), s, {}});
    std::vector<GenResult> out;
    std::set<std::string> texts;
    while (!open.empty() && out.size() < k) {
      State st = open.top();
      open.pop();
      const auto positions = model_.schemas[st.schema].schema.placeholder_positions();
      if (st.picks.size() == positions.size()) {
        GenResult r = finish(st.schema, st.picks);
        assert(r.candidate.weight == st.bound);
        if (texts.insert(r.text).second) out.push_back(std::move(r));
        continue;
      }
      const auto& opts = options_for(st.schema, positions[st.picks.size()]);
      for (std::size_t i = 0; i < opts.size(); ++i) {
        State child{std::min(st.bound, opts[i].clamped), st.schema, st.picks};
        child.picks.push_back(i);
        assert(child.bound <= st.bound);  // min never increases along a path
        open.push(std::move(child));
      }
    }
    return out;
  }

  GenResult greedy() {
    std::size_t best = eligible_.front();
    for (std::size_t s : eligible_)
      if (schema_weights_[s] > schema_weights_[best]) best = s;
    std::vector<std::size_t> picks;
    for (std::size_t pos : model_.schemas[best].schema.placeholder_positions()) {
      const auto& opts = options_for(best, pos);
      std::size_t top = 0;
      for (std::size_t i = 1; i < opts.size(); ++i)
        if (opts[i].raw > opts[top].raw) top = i;
      picks.push_back(top);
    }
    return finish(best, picks);
  }

 private:
  const std::vector<Option>& options_for(std::size_t schema, std::size_t position) {
    const PlaceholderKey key{model_.schemas[schema].id, position};
    auto cached = cache_.find(key);
    if (cached != cache_.end()) return cached->second;

    std::vector<Option> opts;
    auto it = model_.fragment_selectors.find(key);
    if (it != model_.fragment_selectors.end()) {
      const auto& sel = it->second;
      const auto w = selection_weights(sel.model, encode(query_, sel.model.index).vector);
      for (std::size_t i = 0; i < sel.items.size(); ++i) {
        trace_.push_back({"fragment", key.schema, position, sel.items[i].text, w[i]});
        opts.push_back({i, w[i], clamp_unit(w[i]), &sel.items[i], {}});
      }
      if (options_.beam > 0 && opts.size() > options_.beam) {
        std::stable_sort(opts.begin(), opts.end(), [](const Option& a, const Option& b) { return a.raw > b.raw; });
        opts.resize(options_.beam);
        std::sort(opts.begin(), opts.end(), [](const Option& a, const Option& b) { return a.item < b.item; });
      }
    }
    if (options_.copy_values) add_copy_option(schema, position, it, opts);
    if (opts.empty())
      throw NoFragmentCandidateError("schema " + std::to_string(key.schema) + " position " +
                                     std::to_string(position) + " has no fragment candidates");
    return cache_.emplace(key, std::move(opts)).first->second;
  }

  void add_copy_option(std::size_t schema, std::size_t position,
                       std::map<PlaceholderKey, FragmentSelector>::const_iterator sel, std::vector<Option>& opts) {
    const auto& ph = std::get<Placeholder>(model_.schemas[schema].schema.elements[position]);
    if (ph.attributes.size() != 1) return;
    const Feature* wanted = nullptr;
    for (const auto& f : query_)
      if (f.attribute() == ph.attributes.front()) {
        wanted = &f;
        break;
      }
    if (!wanted) return;
    std::size_t item_count = 0;
    if (sel != model_.fragment_selectors.end()) {
      item_count = sel->second.items.size();
      for (const auto& rec : sel->second.items)
        if (rec.cc.contains(*wanted)) return;
    }
    Option copy{item_count, 1.0, 1.0, nullptr, {}};
    copy.copy.text = wanted->value();
    std::replace(copy.copy.text.begin(), copy.copy.text.end(), '_', ' ');
    copy.copy.cc.insert(*wanted);
    trace_.push_back({"fragment", model_.schemas[schema].id, position, "copy:" + copy.copy.text, 1.0});
    opts.push_back(std::move(copy));
  }

  GenResult finish(std::size_t schema, const std::vector<std::size_t>& picks) {
    const auto& entry = model_.schemas[schema];
    const auto positions = entry.schema.placeholder_positions();
    GenResult r;
    r.candidate.schema_index = schema;
    r.candidate.schema_id = entry.id;
    r.candidate.schema_weight = schema_weights_[schema];
    std::vector<double> components{schema_weights_[schema]};
    std::vector<std::string> texts;
    for (std::size_t i = 0; i < picks.size(); ++i) {
      const Option& o = options_for(schema, positions[i])[picks[i]];
      const FragmentRecord& rec = o.record ? *o.record : o.copy;
      r.candidate.choices.push_back({positions[i], o.item, rec.text, rec.cc, o.raw, o.record == nullptr});
      components.push_back(o.raw);
      texts.push_back(rec.text);
    }
    r.candidate.weight = appropriation_weight(components);
    r.text = fill(entry.schema, texts);
    r.trace = trace_;
    return r;
  }

  const TrgModel& model_;
  const FeatureCollection& query_;
  GenOptions options_;
  std::vector<double> schema_weights_;
  std::vector<std::size_t> eligible_;
  std::map<PlaceholderKey, std::vector<Option>> cache_;
  std::vector<TraceEntry> trace_;
};

}  // namespace

std::vector<GenResult> generate_k(const TrgModel& model, const FeatureCollection& query, std::size_t k,
                                  const GenOptions& options) {
  if (k == 0) throw ValidationError("k must be positive");
  Search search(model, query, options);
  std::vector<GenResult> results;
  if (options.greedy)
    results.push_back(search.greedy());
  else
    results = search.best_first(k);
  if (results.empty()) throw NoSchemaError("no candidate could be assembled");
  if (results.front().candidate.weight < options.min_weight) throw BelowThresholdError(std::move(results.front()));
  std::erase_if(results, [&](const GenResult& r) { return r.candidate.weight < options.min_weight; });
  return results;
}

GenResult generate(const TrgModel& model, const FeatureCollection& query, const GenOptions& options) {
  return std::move(generate_k(model, query, 1, options).front());
}

GenResult generate(const std::filesystem::path& model_dir, const FeatureCollection& query,
                   const GenOptions& options) {
  return generate(load_model(model_dir), query, options);
}

nlohmann::ordered_json result_to_json(const GenResult& result) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["text"] = result.text;
  j["weight"] = result.candidate.weight;
  j["schema_index"] = result.candidate.schema_id;
  j["schema_weight"] = result.candidate.schema_weight;
  auto choices = ordered_json::array();
  for (const auto& c : result.candidate.choices)
    choices.push_back({{"position", c.position},
                       {"text", c.text},
                       {"cc", c.cc.keys()},
                       {"weight", c.weight},
                       {"copied", c.copied}});
  j["choices"] = std::move(choices);
  auto trace = ordered_json::array();
  for (const auto& t : result.trace) {
    ordered_json e;
    e["kind"] = t.kind;
    e["schema_index"] = t.schema_id;
    if (t.position) e["position"] = *t.position;
    e["item"] = t.item;
    e["weight"] = t.weight;
    trace.push_back(std::move(e));
  }
  j["trace"] = std::move(trace);
  return j;
}

}  // namespace trg
