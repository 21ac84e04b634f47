#include "trg/aligner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "json.hpp"
#include "trg/error.hpp"
#include "trg/parallel.hpp"

namespace trg {

void AlignConfig::validate() const {
  if (!(sigma >= 0.0 && sigma <= 1.0))
    throw ValidationError("sigma must lie in [0,1], got " + std::to_string(sigma));
}

double express(std::string_view w, const Feature& g, const CooccurrenceTable& table) {
  const double pg = table.p_feature(g);
  if (pg >= 1.0) return 0.0;
  const double pgw = table.p_feature_given_fragment(g, w);
  if (pgw <= pg) return 0.0;
  return (pgw - pg) / (1.0 - pg);
}

double core(std::string_view w, const Feature& g, const CooccurrenceTable& table) {
  if (!table.instances_of(g)) return 0.0;
  return table.p_fragment_given_feature(w, g);
}

double weight(std::string_view w, const Feature& g, const CooccurrenceTable& table) {
  if (!table.instances_of(w) || !table.instances_of(g)) return 0.0;
  return express(w, g, table) * core(w, g, table);
}

std::vector<double> weight_triangle(const Instance& instance, const Feature& g,
                                    const CooccurrenceTable& table) {
  FragmentTriangle tri = enumerate_fragments(instance);
  std::vector<double> out(tri.size(), 0.0);
  for (std::size_t i = 0; i < tri.size(); ++i) out[i] = weight(surface(tri.span(i), instance), g, table);
  return out;
}

std::vector<bool> maxima(const FragmentTriangle& tri, const std::vector<double>& values, Neighbourhood mode) {
  const std::size_t n = tri.token_count();
  const double lowest = -std::numeric_limits<double>::infinity();
  std::vector<bool> out(tri.size(), false);
  if (mode == Neighbourhood::immediate) {
    for (std::size_t i = 0; i < tri.size(); ++i) {
      const Span w = tri.span(i);
      const double v = values[i] + kWeightTolerance;
      bool ok = true;
      if (w.length() > 1)
        ok = ok && v >= values[tri.index({w.start, w.end - 1})] && v >= values[tri.index({w.start + 1, w.end})];
      if (w.start > 0) ok = ok && v >= values[tri.index({w.start - 1, w.end})];
      if (w.end < n) ok = ok && v >= values[tri.index({w.start, w.end + 1})];
      out[i] = ok;
    }
    return out;
  }

  // below[i]: max over strict sub-fragments; above[i]: over strict super-fragments.
  // Each is a two-term recurrence over the triangle edges.
  std::vector<double> below(tri.size(), lowest), above(tri.size(), lowest);
  for (std::size_t k = 2; k <= n; ++k) {
    for (std::size_t s = 0; s + k <= n; ++s) {
      const std::size_t left = tri.index({s, s + k - 1});
      const std::size_t right = tri.index({s + 1, s + k});
      below[tri.index({s, s + k})] =
          std::max({values[left], values[right], below[left], below[right]});
    }
  }
  for (std::size_t k = n; k-- > 1;) {
    for (std::size_t s = 0; s + k <= n; ++s) {
      double best = lowest;
      if (s > 0) {
        const std::size_t up = tri.index({s - 1, s + k});
        best = std::max({best, values[up], above[up]});
      }
      if (s + k < n) {
        const std::size_t up = tri.index({s, s + k + 1});
        best = std::max({best, values[up], above[up]});
      }
      above[tri.index({s, s + k})] = best;
    }
  }
  for (std::size_t i = 0; i < tri.size(); ++i) {
    const double v = values[i] + kWeightTolerance;
    out[i] = v >= below[i] && v >= above[i];
  }
  return out;
}

std::vector<Span> align_feature(const Instance& instance, const Feature& g, const CooccurrenceTable& table,
                                const AlignConfig& config, std::vector<std::string>* diagnostics) {
  const FragmentTriangle tri = enumerate_fragments(instance);
  const std::vector<double> w = weight_triangle(instance, g, table);
  const std::vector<bool> is_max = maxima(tri, w, config.neighbourhood);

  std::vector<bool> keep(tri.size(), false);
  for (std::size_t i = 0; i < tri.size(); ++i)
    keep[i] = is_max[i] && w[i] + kWeightTolerance >= config.sigma;

  auto same = [&](std::size_t a, std::size_t b) { return std::abs(w[a] - w[b]) <= kWeightTolerance; };
  const std::size_t n = tri.token_count();
  auto adjacent_indices = [&](const Span& s) {
    std::vector<std::size_t> out;
    if (s.length() > 1) {
      out.push_back(tri.index({s.start, s.end - 1}));
      out.push_back(tri.index({s.start + 1, s.end}));
    }
    if (s.start > 0) out.push_back(tri.index({s.start - 1, s.end}));
    if (s.end < n) out.push_back(tri.index({s.start, s.end + 1}));
    return out;
  };

  std::vector<Span> result;
  std::vector<bool> seen(tri.size(), false);
  bool uneven = false;
  for (std::size_t i = 0; i < tri.size(); ++i) {
    if (!keep[i] || seen[i]) continue;
    std::vector<std::size_t> stack{i};
    seen[i] = true;
    Span best = tri.span(i);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const Span cs = tri.span(cur);
      if (cs.length() > best.length() || (cs.length() == best.length() && cs.start < best.start)) best = cs;
      for (std::size_t nb : adjacent_indices(cs)) {
        if (!keep[nb]) continue;
        if (!same(cur, nb)) {
          uneven = true;
          continue;
        }
        if (!seen[nb]) {
          seen[nb] = true;
          stack.push_back(nb);
        }
      }
    }
    result.push_back(best);
  }
  if (uneven && diagnostics)
    diagnostics->push_back("instance '" + instance.id + "', feature " + g.key() +
                           ": connected maxima with unequal weights split into equal-weight regions");
  std::sort(result.begin(), result.end());
  return result;
}

std::vector<AlignedSegment> merge_overlapping(std::vector<AlignedSegment> aligned,
                                              const FeatureCollection& order_hint) {
  std::sort(aligned.begin(), aligned.end(),
            [](const AlignedSegment& a, const AlignedSegment& b) { return a.span < b.span; });
  std::vector<AlignedSegment> merged;
  for (auto& seg : aligned) {
    if (!merged.empty() && merged.back().span.overlaps(seg.span)) {
      auto& last = merged.back();
      last.span.end = std::max(last.span.end, seg.span.end);
      for (const auto& f : seg.features) last.features.insert(f);
    } else {
      merged.push_back(std::move(seg));
    }
  }
  for (auto& seg : merged) {
    FeatureCollection ordered;
    for (const auto& f : order_hint)
      if (seg.features.contains(f)) ordered.insert(f);
    for (const auto& f : seg.features) ordered.insert(f);
    seg.features = std::move(ordered);
  }
  return merged;
}

std::vector<AlignedSegment> segment(std::vector<AlignedSegment> aligned, std::size_t token_count) {
  std::vector<AlignedSegment> out;
  std::size_t pos = 0;
  for (auto& seg : aligned) {
    if (seg.span.start > pos) out.push_back({{pos, seg.span.start}, {}});
    pos = seg.span.end;
    out.push_back(std::move(seg));
  }
  if (pos < token_count) out.push_back({{pos, token_count}, {}});
  return out;
}

AlignedInstance align_instance(const Instance& instance, const CooccurrenceTable& table,
                               const AlignConfig& config, std::vector<std::string>* diagnostics) {
  std::vector<AlignedSegment> aligned;
  for (const auto& g : instance.cc)
    for (const auto& span : align_feature(instance, g, table, config, diagnostics))
      aligned.push_back({span, FeatureCollection{g}});
  AlignedInstance out;
  out.instance = instance;
  out.segments = segment(merge_overlapping(std::move(aligned), instance.cc), instance.tokens.size());
  return out;
}

std::vector<AlignedInstance> align_corpus(const Corpus& corpus, const AlignConfig& config, std::size_t jobs,
                                          std::vector<std::string>* diagnostics) {
  config.validate();
  const CooccurrenceTable table = CooccurrenceTable::build(corpus, config.max_len);
  std::vector<AlignedInstance> out(corpus.size());
  std::vector<std::vector<std::string>> notes(corpus.size());
  parallel_for(corpus.size(), jobs, [&](std::size_t i) {
    out[i] = align_instance(corpus[i], table, config, diagnostics ? &notes[i] : nullptr);
  });
  if (diagnostics)
    for (auto& n : notes) diagnostics->insert(diagnostics->end(), n.begin(), n.end());
  return out;
}

std::string serialize_aligned(const std::vector<AlignedInstance>& aligned) {
  using nlohmann::ordered_json;
  std::string out;
  for (const auto& a : aligned) {
    ordered_json obj;
    obj["id"] = a.instance.id;
    obj["tokens"] = a.instance.tokens;
    obj["cc"] = a.instance.cc.keys();
    obj["segments"] = ordered_json::array();
    for (const auto& s : a.segments)
      obj["segments"].push_back({{"start", s.span.start}, {"end", s.span.end}, {"features", s.features.keys()}});
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<AlignedInstance> parse_aligned(std::string_view jsonl) {
  using nlohmann::json;
  std::vector<AlignedInstance> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < jsonl.size()) {
    auto nl = jsonl.find('\n', pos);
    auto line = jsonl.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? jsonl.size() : nl + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      json obj = json::parse(line);
      AlignedInstance a;
      a.instance.id = obj.at("id").get<std::string>();
      a.instance.tokens = obj.at("tokens").get<std::vector<std::string>>();
      if (a.instance.tokens.empty()) throw ValidationError("no tokens");
      a.instance.text = join_tokens(a.instance.tokens);
      if (obj.contains("cc"))
        for (const auto& k : obj["cc"]) a.instance.cc.insert(Feature::parse(k.get<std::string>()));
      std::size_t expect = 0;
      for (const auto& s : obj.at("segments")) {
        AlignedSegment seg;
        seg.span = {s.at("start").get<std::size_t>(), s.at("end").get<std::size_t>()};
        if (seg.span.start != expect || seg.span.end <= seg.span.start)
          throw ValidationError("segments must partition the tokens in order");
        expect = seg.span.end;
        for (const auto& k : s.at("features")) {
          Feature f = Feature::parse(k.get<std::string>());
          a.instance.cc.insert(f);
          seg.features.insert(std::move(f));
        }
        a.segments.push_back(std::move(seg));
      }
      if (expect != a.instance.tokens.size()) throw ValidationError("segments must cover every token");
      out.push_back(std::move(a));
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    } catch (const ValidationError& e) {
      throw ValidationError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace trg
