#ifndef TRG_SYNTH_HPP
#define TRG_SYNTH_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "trg/aligner.hpp"
#include "trg/corpus.hpp"

namespace trg {

/// One element of a synthetic-corpus template: either a literal or a slot
/// for `attribute` whose value pool maps feature values to surface text.
struct TemplateElement {
  std::string literal;
  std::string attribute;
  std::vector<std::pair<std::string, std::string>> values;  // (value, surface)

  bool is_slot() const { return !attribute.empty(); }
};

struct Template {
  std::vector<TemplateElement> elements;
};

/// Parses [{"elements": [{"ph": "attr", "values": {"v": "surface"}} | {"lit": "..."}]}].
std::vector<Template> parse_templates(std::string_view json_text);

struct SynthCorpus {
  Corpus corpus;
  std::vector<AlignedInstance> gold;  // literals become unaligned segments
};

/// Draws n instances (template, then one value per slot, uniformly) from a
/// 64-bit Mersenne Twister seeded with `seed`.
SynthCorpus synthesize(const std::vector<Template>& templates, std::size_t n, std::uint64_t seed);

}  // namespace trg

#endif  // TRG_SYNTH_HPP
