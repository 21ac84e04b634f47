#include "trg/schema.hpp"

#include <algorithm>

#include "trg/error.hpp"

namespace trg {

Placeholder::Placeholder(std::vector<std::string> attrs) : attributes(std::move(attrs)) {
  std::sort(attributes.begin(), attributes.end());
  attributes.erase(std::unique(attributes.begin(), attributes.end()), attributes.end());
  if (attributes.empty()) throw ValidationError("placeholder without attributes");
}

std::size_t Schema::placeholder_count() const {
  return static_cast<std::size_t>(std::count_if(elements.begin(), elements.end(), [](const SchemaElement& e) {
    return std::holds_alternative<Placeholder>(e);
  }));
}

std::vector<std::size_t> Schema::placeholder_positions() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (std::holds_alternative<Placeholder>(elements[i])) out.push_back(i);
  return out;
}

std::vector<std::string> Schema::attributes() const {
  std::vector<std::string> out;
  for (const auto& e : elements)
    if (const auto* p = std::get_if<Placeholder>(&e)) out.insert(out.end(), p->attributes.begin(), p->attributes.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string to_string(const Schema& schema) {
  std::string out;
  for (const auto& e : schema.elements) {
    if (!out.empty()) out += ' ';
    if (const auto* p = std::get_if<Placeholder>(&e)) {
      out += '[';
      for (std::size_t i = 0; i < p->attributes.size(); ++i) {
        if (i) out += ',';
        out += p->attributes[i];
      }
      out += ']';
    } else {
      out += '"' + std::get<Literal>(e).text + '"';
    }
  }
  return out;
}

SchemaExtraction to_schema(const AlignedInstance& aligned) {
  SchemaExtraction out;
  const auto& tokens = aligned.instance.tokens;
  for (const auto& seg : aligned.segments) {
    std::string text = join_tokens(tokens, seg.span.start, seg.span.end);
    if (seg.features.empty()) {
      out.schema.elements.emplace_back(Literal{std::move(text)});
    } else {
      out.fragments.push_back({out.schema.elements.size(), FragmentRecord{std::move(text), seg.features}});
      out.schema.elements.emplace_back(Placeholder(seg.features.attributes()));
    }
  }
  return out;
}

Datasets build_datasets(const std::vector<AlignedInstance>& aligned) {
  Datasets out;
  auto& sd = out.schema_dataset;
  for (const auto& a : aligned) {
    SchemaExtraction ex = to_schema(a);
    auto it = std::find(sd.schemas.begin(), sd.schemas.end(), ex.schema);
    const auto idx = static_cast<std::size_t>(it - sd.schemas.begin());
    if (it == sd.schemas.end()) sd.schemas.push_back(std::move(ex.schema));
    sd.records.push_back({idx, a.instance.cc});
    for (auto& [pos, rec] : ex.fragments) out.fragment_datasets[{idx, pos}].push_back(std::move(rec));
  }
  return out;
}

}  // namespace trg
