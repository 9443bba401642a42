#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "umbrella/mapping.hpp"

namespace umbrella {

struct FigureInput {
  std::vector<Point2> tangency_points;  // singular / tangency points to mark
  std::optional<Point2> probe;          // extra point whose level curves are drawn
};

/// Maps plane coordinates to SVG image coordinates (y axis flipped).
struct ViewTransform {
  double min_x = 0.0;
  double max_y = 0.0;
  double scale = 1.0;
  double margin = 20.0;
  double width = 0.0;
  double height = 0.0;

  Point2 to_image(Point2 p) const {
    return {margin + (p.x1 - min_x) * scale, margin + (max_y - p.x2) * scale};
  }
};

ViewTransform figure_view(const GDSMapping& m, const FigureInput& input);

/// SVG with the level curves through every marked point and the probe, the
/// centres, and a marker at each tangency point.
std::string render_svg(const GDSMapping& m, const FigureInput& input);

std::string render_figure(const GDSMapping& m, const FigureInput& input,
                          const std::filesystem::path& out);

}  // namespace umbrella
