#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "plsv/matrix.h"

namespace plsv {

enum class MarkerShape { kCircle, kSquare, kTriangle, kDiamond };

struct PaletteEntry {
  std::string color;  // "#rrggbb"
  MarkerShape shape = MarkerShape::kCircle;

  bool operator==(const PaletteEntry&) const = default;
};

using Palette = std::map<std::string, PaletteEntry>;

inline constexpr size_t kPaletteColors = 20;

// Distinct labels in sorted order get the fixed colors in turn; past 20
// labels the colors repeat with the next marker shape.
Palette AssignPalette(std::span<const std::string> labels);

struct ScatterSpec {
  Matrix<double> doc_coords;    // N x 2
  std::vector<std::string> labels;
  Matrix<double> topic_coords;  // Z x 2, may be empty
  std::vector<std::vector<std::string>> topic_words;  // empty or Z lists
  int width = 800;
  int height = 800;
  Palette palette;
  bool show_words = false;
};

inline constexpr double kCanvasMargin = 0.05;
inline constexpr double kDocRadius = 2.0;
inline constexpr double kTopicRadius = 6.0;

// Canvas position of a data point, given the spec's bounding box.
struct CanvasTransform {
  double scale = 1;
  double mid_x = 0, mid_y = 0;
  double width = 0, height = 0;

  double X(double x) const { return width / 2 + (x - mid_x) * scale; }
  double Y(double y) const { return height / 2 - (y - mid_y) * scale; }
};

CanvasTransform FitCanvas(const ScatterSpec& spec);

// Deterministic SVG 1.1 document.
std::string RenderScatter(const ScatterSpec& spec);

}  // namespace plsv
