#include "trg/render.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "trg/error.hpp"

namespace trg {

namespace {

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

Metric parse_metric(std::string_view name) {
  if (name == "express") return Metric::express;
  if (name == "core") return Metric::core;
  if (name == "weight") return Metric::weight;
  throw ValidationError("unknown metric '" + std::string(name) + "'");
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::express: return "express";
    case Metric::core: return "core";
    case Metric::weight: return "weight";
  }
  return "weight";
}

TriangleView triangle_view(const Instance& instance, const Feature& g, Metric metric, const CooccurrenceTable& table,
                           const AlignConfig& config) {
  TriangleView view{instance, g, metric, {}, {}, {}};
  const FragmentTriangle tri = enumerate_fragments(instance);
  view.values.resize(tri.size());
  for (std::size_t i = 0; i < tri.size(); ++i) {
    const std::string w = surface(tri.span(i), instance);
    const bool known = table.instances_of(w) && table.instances_of(g);
    switch (metric) {
      case Metric::express: view.values[i] = known ? express(w, g, table) : 0.0; break;
      case Metric::core: view.values[i] = known ? core(w, g, table) : 0.0; break;
      case Metric::weight: view.values[i] = weight(w, g, table); break;
    }
  }
  view.maxima = maxima(tri, view.values, config.neighbourhood);
  view.aligned = align_feature(instance, g, table, config);
  return view;
}

std::string render_text(const TriangleView& view) {
  const FragmentTriangle tri = enumerate_fragments(view.instance);
  std::ostringstream out;
  out << "instance " << view.instance.id << "  feature " << view.feature.key() << "  metric "
      << metric_name(view.metric) << "\n";
  for (std::size_t k = tri.token_count(); k >= 1; --k) {
    out << "row " << k << ":";
    for (const Span& s : tri.row(k)) {
      const std::size_t i = tri.index(s);
      out << (s.start == 0 ? " " : " | ") << surface(s, view.instance) << ':' << fixed3(view.values[i]);
      if (view.maxima[i]) out << '*';
      if (std::find(view.aligned.begin(), view.aligned.end(), s) != view.aligned.end()) out << '^';
    }
    out << "\n";
  }
  out << "(* maxima, ^ aligned)\n";
  return out.str();
}

std::string render_svg(const TriangleView& view) {
  const FragmentTriangle tri = enumerate_fragments(view.instance);
  const std::size_t n = tri.token_count();
  constexpr double kCellW = 120, kCellH = 34, kMargin = 10;
  const double width = 2 * kMargin + static_cast<double>(n) * kCellW;
  const double height = 2 * kMargin + static_cast<double>(n) * kCellH + 20;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
  out << "<text x=\"" << kMargin << "\" y=\"" << height - 8 << "\">" << xml_escape(view.instance.id) << "  "
      << xml_escape(view.feature.key()) << "  " << metric_name(view.metric) << "</text>\n";
  for (std::size_t k = n; k >= 1; --k) {
    const double y = kMargin + static_cast<double>(n - k) * kCellH;
    for (const Span& s : tri.row(k)) {
      const std::size_t i = tri.index(s);
      const double v = std::clamp(view.values[i], 0.0, 1.0);
      const double x = kMargin + static_cast<double>(k - 1) * kCellW / 2 + static_cast<double>(s.start) * kCellW;
      const int r = static_cast<int>(255 - v * (255 - 70));
      const int g = static_cast<int>(255 - v * (255 - 130));
      const int b = static_cast<int>(255 - v * (255 - 180));
      const bool aligned = std::find(view.aligned.begin(), view.aligned.end(), s) != view.aligned.end();
      const std::string label = surface(s, view.instance);
      out << "<rect class=\"cell\" x=\"" << x + 1 << "\" y=\"" << y + 1 << "\" width=\"" << kCellW - 2
          << "\" height=\"" << kCellH - 2 << "\" fill=\"rgb(" << r << ',' << g << ',' << b << ")\" stroke=\""
          << (view.maxima[i] ? "#d00000" : "#999999") << "\" stroke-width=\"" << (view.maxima[i] ? 2.5 : 0.8)
          << "\"><title>" << xml_escape(label) << ": " << fixed3(view.values[i])
          << (aligned ? " (aligned)" : "") << "</title></rect>\n";
      std::string shown = label;
      if (shown.size() > 20) {
        std::size_t cut = 18;
        while (cut > 0 && (static_cast<unsigned char>(shown[cut]) & 0xC0) == 0x80) --cut;  // UTF-8 boundary
        shown = shown.substr(0, cut) + "..";
      }
      out << "<text x=\"" << x + 4 << "\" y=\"" << y + 14 << "\">" << xml_escape(shown) << "</text>\n";
      out << "<text x=\"" << x + 4 << "\" y=\"" << y + 27 << "\">" << fixed3(view.values[i])
          << (aligned ? " \xE2\x86\x90 aligned" : "") << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace trg
