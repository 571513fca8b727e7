#include "plsv/viz.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <stdexcept>

namespace plsv {

namespace {

constexpr std::array<const char*, kPaletteColors> kColors = {
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231",
    "#911eb4", "#46f0f0", "#f032e6", "#bcf60c", "#fabebe",
    "#008080", "#e6beff", "#9a6324", "#fffac8", "#800000",
    "#aaffc3", "#808000", "#ffd8b1", "#000075", "#808080"};

constexpr std::array<MarkerShape, 4> kShapes = {
    MarkerShape::kCircle, MarkerShape::kSquare, MarkerShape::kTriangle,
    MarkerShape::kDiamond};

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string Escape(std::string_view text) {
  std::string out;
  for (char c : text) {
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

std::string Marker(const PaletteEntry& style, double cx, double cy, double r) {
  const std::string fill = " fill=\"" + style.color + "\"";
  switch (style.shape) {
    case MarkerShape::kCircle:
      return "<circle cx=\"" + Num(cx) + "\" cy=\"" + Num(cy) + "\" r=\"" +
             Num(r) + "\"" + fill + "/>";
    case MarkerShape::kSquare:
      return "<rect x=\"" + Num(cx - r) + "\" y=\"" + Num(cy - r) +
             "\" width=\"" + Num(2 * r) + "\" height=\"" + Num(2 * r) + "\"" +
             fill + "/>";
    case MarkerShape::kTriangle:
      return "<polygon points=\"" + Num(cx) + "," + Num(cy - r) + " " +
             Num(cx - r) + "," + Num(cy + r) + " " + Num(cx + r) + "," +
             Num(cy + r) + "\"" + fill + "/>";
    case MarkerShape::kDiamond:
      return "<polygon points=\"" + Num(cx) + "," + Num(cy - r) + " " +
             Num(cx + r) + "," + Num(cy) + " " + Num(cx) + "," + Num(cy + r) +
             " " + Num(cx - r) + "," + Num(cy) + "\"" + fill + "/>";
  }
  return {};
}

std::string JoinWords(std::span<const std::string> words, size_t limit) {
  std::string out;
  for (size_t i = 0; i < std::min(limit, words.size()); ++i) {
    if (i) out += ' ';
    out += words[i];
  }
  return out;
}

}  // namespace

Palette AssignPalette(std::span<const std::string> labels) {
  const std::set<std::string> distinct(labels.begin(), labels.end());
  Palette palette;
  size_t i = 0;
  for (const auto& label : distinct) {
    palette[label] = PaletteEntry{kColors[i % kPaletteColors],
                                  kShapes[(i / kPaletteColors) % kShapes.size()]};
    ++i;
  }
  return palette;
}

CanvasTransform FitCanvas(const ScatterSpec& spec) {
  double lo_x = std::numeric_limits<double>::infinity(), hi_x = -lo_x;
  double lo_y = lo_x, hi_y = -lo_x;
  auto include = [&](const Matrix<double>& m) {
    for (size_t i = 0; i < m.rows(); ++i) {
      lo_x = std::min(lo_x, m(i, 0));
      hi_x = std::max(hi_x, m(i, 0));
      lo_y = std::min(lo_y, m(i, 1));
      hi_y = std::max(hi_y, m(i, 1));
    }
  };
  include(spec.doc_coords);
  include(spec.topic_coords);
  CanvasTransform t;
  t.width = spec.width;
  t.height = spec.height;
  t.mid_x = (lo_x + hi_x) / 2;
  t.mid_y = (lo_y + hi_y) / 2;
  const double usable = 1 - 2 * kCanvasMargin;
  const double range_x = hi_x - lo_x, range_y = hi_y - lo_y;
  double scale = std::numeric_limits<double>::infinity();
  if (range_x > 0) scale = std::min(scale, usable * spec.width / range_x);
  if (range_y > 0) scale = std::min(scale, usable * spec.height / range_y);
  t.scale = std::isfinite(scale) ? scale : 1.0;
  return t;
}

std::string RenderScatter(const ScatterSpec& spec) {
  const size_t n = spec.doc_coords.rows();
  if (n == 0) throw std::invalid_argument("RenderScatter: no documents");
  if (spec.doc_coords.cols() != 2)
    throw std::invalid_argument("RenderScatter: document coordinates must be 2-D");
  if (spec.labels.size() != n)
    throw std::invalid_argument("RenderScatter: label count does not match documents");
  if (spec.topic_coords.rows() > 0 && spec.topic_coords.cols() != 2)
    throw std::invalid_argument("RenderScatter: topic coordinates must be 2-D");
  if (!spec.topic_words.empty() &&
      spec.topic_words.size() != spec.topic_coords.rows())
    throw std::invalid_argument("RenderScatter: topic word lists do not match topics");
  if (spec.width <= 0 || spec.height <= 0)
    throw std::invalid_argument("RenderScatter: canvas size must be positive");
  for (const auto& l : spec.labels)
    if (!spec.palette.contains(l))
      throw std::invalid_argument("RenderScatter: palette has no entry for label '" +
                                  l + "'");
  if (!spec.doc_coords.AllFinite() || !spec.topic_coords.AllFinite())
    throw std::invalid_argument("RenderScatter: non-finite coordinates");

  const CanvasTransform t = FitCanvas(spec);
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(spec.width) + "\" height=\"" +
         std::to_string(spec.height) + "\" viewBox=\"0 0 " +
         std::to_string(spec.width) + " " + std::to_string(spec.height) +
         "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(spec.width) +
         "\" height=\"" + std::to_string(spec.height) + "\" fill=\"white\"/>\n";

  svg += "<g id=\"documents\" fill-opacity=\"0.8\">\n";
  for (size_t i = 0; i < n; ++i) {
    svg += Marker(spec.palette.at(spec.labels[i]), t.X(spec.doc_coords(i, 0)),
                  t.Y(spec.doc_coords(i, 1)), kDocRadius);
    svg += '\n';
  }
  svg += "</g>\n";

  if (spec.topic_coords.rows() > 0) {
    svg += "<g id=\"topics\">\n";
    for (size_t z = 0; z < spec.topic_coords.rows(); ++z) {
      const double cx = t.X(spec.topic_coords(z, 0));
      const double cy = t.Y(spec.topic_coords(z, 1));
      svg += "<g class=\"topic\"><circle cx=\"" + Num(cx) + "\" cy=\"" + Num(cy) +
             "\" r=\"" + Num(kTopicRadius) +
             "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\">";
      std::string title = "topic " + std::to_string(z);
      if (!spec.topic_words.empty())
        title += ": " + JoinWords(spec.topic_words[z], spec.topic_words[z].size());
      svg += "<title>" + Escape(title) + "</title></circle>";
      if (spec.show_words && !spec.topic_words.empty()) {
        svg += "<text class=\"topic-words\" x=\"" + Num(cx + kTopicRadius + 2) +
               "\" y=\"" + Num(cy + 3) +
               "\" font-family=\"sans-serif\" font-size=\"10\">" +
               Escape(JoinWords(spec.topic_words[z], 3)) + "</text>";
      }
      svg += "</g>\n";
    }
    svg += "</g>\n";
  }

  std::set<std::string> present(spec.labels.begin(), spec.labels.end());
  svg += "<g id=\"legend\" font-family=\"sans-serif\" font-size=\"10\">\n";
  double y = 12;
  for (const auto& label : present) {
    svg += Marker(spec.palette.at(label), 10, y - 3, 4);
    svg += "<text x=\"18\" y=\"" + Num(y) + "\">" + Escape(label) + "</text>\n";
    y += 13;
  }
  svg += "</g>\n</svg>\n";
  return svg;
}

}  // namespace plsv
