#ifndef TRG_RENDER_HPP
#define TRG_RENDER_HPP

#include <string>
#include <string_view>
#include <vector>

#include "trg/aligner.hpp"

namespace trg {

enum class Metric { express, core, weight };

Metric parse_metric(std::string_view name);
std::string_view metric_name(Metric m);

/// Per-fragment metric values over one instance's triangle, with the maxima
/// of the shown metric and the fragments aligned to the feature.
struct TriangleView {
  Instance instance;
  Feature feature;
  Metric metric;
  std::vector<double> values;  // triangle index order
  std::vector<bool> maxima;
  std::vector<Span> aligned;
};

TriangleView triangle_view(const Instance& instance, const Feature& g, Metric metric, const CooccurrenceTable& table,
                           const AlignConfig& config = {});

/// One line per row, longest fragments first; "surface:value" cells with
/// three decimals, '*' after maxima and '^' after aligned fragments.
std::string render_text(const TriangleView& view);

/// Standalone SVG 1.1 using only rect, text and title elements: one rect per
/// fragment, fill proportional to the value, maxima outlined in red.
std::string render_svg(const TriangleView& view);

}  // namespace trg

#endif  // TRG_RENDER_HPP
