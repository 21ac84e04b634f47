#include "trg/synth.hpp"

#include <cstdio>
#include <random>

#include "json.hpp"
#include "trg/error.hpp"

namespace trg {

std::vector<Template> parse_templates(std::string_view json_text) {
  using nlohmann::ordered_json;
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const ordered_json::parse_error& e) {
    throw ValidationError(std::string("templates: ") + e.what());
  }
  if (!j.is_array() || j.empty()) throw ValidationError("templates must be a non-empty array");
  std::vector<Template> out;
  try {
    for (const auto& t : j) {
      Template tpl;
      for (const auto& e : t.at("elements")) {
        TemplateElement el;
        if (e.contains("ph")) {
          el.attribute = e["ph"].get<std::string>();
          for (const auto& [value, surf] : e.at("values").items()) el.values.emplace_back(value, surf.get<std::string>());
          if (el.values.empty()) throw ValidationError("slot '" + el.attribute + "' has an empty value pool");
          for (const auto& [value, surf] : el.values) {
            Feature(el.attribute, value);  // validates the pair
            tokenize(surf);
          }
        } else {
          el.literal = e.at("lit").get<std::string>();
          tokenize(el.literal);
        }
        tpl.elements.push_back(std::move(el));
      }
      if (tpl.elements.empty()) throw ValidationError("template without elements");
      out.push_back(std::move(tpl));
    }
  } catch (const ordered_json::exception& e) {
    throw ValidationError(std::string("templates: ") + e.what());
  }
  return out;
}

SynthCorpus synthesize(const std::vector<Template>& templates, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw ValidationError("n must be positive");
  if (templates.empty()) throw ValidationError("no templates");
  std::mt19937_64 rng(seed);
  // Plain modulo keeps the draw sequence identical across standard libraries.
  auto pick = [&](std::size_t size) { return static_cast<std::size_t>(rng() % size); };

  std::vector<Instance> instances;
  SynthCorpus out;
  for (std::size_t i = 0; i < n; ++i) {
    const Template& tpl = templates[pick(templates.size())];
    char id[32];
    std::snprintf(id, sizeof id, "s%05zu", i);
    std::string text;
    FeatureCollection cc;
    std::vector<AlignedSegment> segments;
    std::size_t pos = 0;
    for (const auto& el : tpl.elements) {
      std::string piece;
      AlignedSegment seg;
      if (el.is_slot()) {
        const auto& [value, surf] = el.values[pick(el.values.size())];
        piece = surf;
        Feature f(el.attribute, value);
        cc.insert(f);
        seg.features.insert(std::move(f));
      } else {
        piece = el.literal;
      }
      const std::size_t len = tokenize(piece).size();
      seg.span = {pos, pos + len};
      pos += len;
      // Adjacent literals form one unaligned segment.
      if (seg.features.empty() && !segments.empty() && segments.back().features.empty())
        segments.back().span.end = seg.span.end;
      else
        segments.push_back(std::move(seg));
      if (!text.empty()) text += ' ';
      text += piece;
    }
    Instance inst = make_instance(id, text, cc);
    if (inst.tokens.size() != pos) throw ValidationError("template pieces do not tokenize independently");
    out.gold.push_back({inst, std::move(segments)});
    instances.push_back(std::move(inst));
  }
  out.corpus = Corpus(std::move(instances));
  return out;
}

}  // namespace trg
