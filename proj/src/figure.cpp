#include "umbrella/figure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "umbrella/foliation.hpp"

namespace umbrella {

namespace {

constexpr double kImageSize = 600.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::vector<Point2> depicted_points(const FigureInput& input) {
  std::vector<Point2> pts = input.tangency_points;
  if (input.probe) pts.push_back(*input.probe);
  return pts;
}

// Semi-axes of a_1 u^2 + a_2 v^2 = c when that set is a bounded curve.
std::optional<std::pair<double, double>> semi_axes(const Row2& a, double c) {
  if (a[0] * a[1] <= 0.0) return std::nullopt;
  const double u = c / a[0];
  const double v = c / a[1];
  if (!(u > 0.0 && v > 0.0)) return std::nullopt;
  return std::make_pair(std::sqrt(u), std::sqrt(v));
}

std::string polyline(const ViewTransform& view, const std::vector<Point2>& pts) {
  std::string d;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Point2 s = view.to_image(pts[k]);
    d += (k == 0 ? "M" : " L") + num(s.x1) + "," + num(s.x2);
  }
  return d;
}

// Unbounded level curves (indefinite coefficient rows), sampled out to `reach`.
std::string open_curve_path(const ViewTransform& view, const Row2& a, Point2 p, double c, double reach) {
  std::vector<std::vector<Point2>> branches;
  constexpr int kSamples = 64;
  if (c == 0.0) {
    const double slope = std::sqrt(-a[0] / a[1]);
    for (double sgn : {1.0, -1.0}) {
      branches.push_back({p + Point2{-reach, -sgn * slope * reach}, p + Point2{reach, sgn * slope * reach}});
    }
  } else {
    // Branches open along u when c / a_1 > 0, else along v.
    const bool along_u = c / a[0] > 0.0;
    const double s1 = std::sqrt(std::abs(c / a[0]));
    const double s2 = std::sqrt(std::abs(c / a[1]));
    const double t_max = std::acosh(std::max(1.0, reach / std::min(s1, s2)) + 1.0);
    for (double sgn : {1.0, -1.0}) {
      std::vector<Point2> br;
      for (int k = 0; k <= kSamples; ++k) {
        const double t = -t_max + 2.0 * t_max * k / kSamples;
        const Point2 d = along_u ? Point2{sgn * s1 * std::cosh(t), s2 * std::sinh(t)}
                                 : Point2{s1 * std::sinh(t), sgn * s2 * std::cosh(t)};
        br.push_back(p + d);
      }
      branches.push_back(std::move(br));
    }
  }
  std::string d;
  for (const auto& br : branches) d += (d.empty() ? "" : " ") + polyline(view, br);
  return d;
}

}  // namespace

ViewTransform figure_view(const GDSMapping& m, const FigureInput& input) {
  double min_x = m.center(0).x1, max_x = min_x, min_y = m.center(0).x2, max_y = min_y;
  auto include = [&](Point2 q) {
    min_x = std::min(min_x, q.x1);
    max_x = std::max(max_x, q.x1);
    min_y = std::min(min_y, q.x2);
    max_y = std::max(max_y, q.x2);
  };
  for (const Point2& p : m.centers()) include(p);
  for (const Point2& q : depicted_points(input)) {
    include(q);
    const std::vector<double> levels = evaluate(m, q);
    for (std::size_t i = 0; i < m.ell(); ++i) {
      if (const auto axes = semi_axes(m.row(i), levels[i])) {
        include(m.center(i) + Point2{axes->first, axes->second});
        include(m.center(i) - Point2{axes->first, axes->second});
      }
    }
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  const double pad = 0.05 * span;
  ViewTransform view;
  view.min_x = min_x - pad;
  view.max_y = max_y + pad;
  view.scale = kImageSize / (span + 2.0 * pad);
  view.width = 2.0 * view.margin + (max_x - min_x + 2.0 * pad) * view.scale;
  view.height = 2.0 * view.margin + (max_y - min_y + 2.0 * pad) * view.scale;
  return view;
}

std::string render_svg(const GDSMapping& m, const FigureInput& input) {
  const std::vector<Point2> pts = depicted_points(input);
  if (pts.empty()) {
    throw Error(ErrorCode::InvalidInput, "figure needs tangency points or a probe point to depict");
  }
  const ViewTransform view = figure_view(m, input);
  const double reach = (view.width + view.height) / view.scale;

  std::ostringstream svg;
  svg << R"(<?xml version="1.0" encoding="UTF-8"?>)" << "\n";
  svg << R"(<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 )" << num(view.width) << " "
      << num(view.height) << R"(" width=")" << num(view.width) << R"(" height=")" << num(view.height)
      << R"(">)" << "\n";
  svg << R"(<rect x="0" y="0" width=")" << num(view.width) << R"(" height=")" << num(view.height)
      << R"(" fill="white"/>)" << "\n";
  svg << R"(<defs><clipPath id="view"><rect x="0" y="0" width=")" << num(view.width) << R"(" height=")"
      << num(view.height) << R"("/></clipPath></defs>)" << "\n";

  svg << R"svg(<g fill="none" stroke-width="1.5" clip-path="url(#view)">)svg" << "\n";
  for (const Point2& q : pts) {
    for (const FoliationLevel& lv : levels_through_point(m, q)) {
      const Row2& a = m.row(lv.index);
      const std::string kind(to_string(lv.kind));
      const char* stroke = lv.index == 0 ? "#c0392b" : "#2c3e50";
      std::string d;
      if (const auto axes = semi_axes(a, lv.level)) {
        const Point2 c = view.to_image(lv.center);
        const double rx = axes->first * view.scale;
        const double ry = axes->second * view.scale;
        d = "M" + num(c.x1 + rx) + "," + num(c.x2) + " A" + num(rx) + "," + num(ry) + " 0 1 0 " +
            num(c.x1 - rx) + "," + num(c.x2) + " A" + num(rx) + "," + num(ry) + " 0 1 0 " +
            num(c.x1 + rx) + "," + num(c.x2) + " Z";
      } else if (lv.kind == ConicKind::single_point) {
        const Point2 c = view.to_image(lv.center);
        d = "M" + num(c.x1 + 2.0) + "," + num(c.x2) + " A2,2 0 1 0 " + num(c.x1 - 2.0) + "," +
            num(c.x2) + " A2,2 0 1 0 " + num(c.x1 + 2.0) + "," + num(c.x2) + " Z";
      } else if (a[0] * a[1] < 0.0) {
        d = open_curve_path(view, a, lv.center, lv.level, reach);
      }
      svg << R"(<path class="level )" << kind << R"(" data-index=")" << lv.index << R"(" stroke=")"
          << stroke << R"(" d=")" << d << R"("/>)" << "\n";
    }
  }
  svg << "</g>\n";

  for (std::size_t i = 0; i < m.ell(); ++i) {
    const Point2 c = view.to_image(m.center(i));
    svg << R"(<circle class="center" data-index=")" << i << R"(" cx=")" << num(c.x1) << R"(" cy=")"
        << num(c.x2) << R"(" r="3.5" fill="black"/>)" << "\n";
  }
  for (const Point2& q : input.tangency_points) {
    const Point2 c = view.to_image(q);
    svg << R"(<circle class="tangency" cx=")" << num(c.x1) << R"(" cy=")" << num(c.x2)
        << R"(" r="5" fill="none" stroke="#27ae60" stroke-width="2"/>)" << "\n";
  }
  if (input.probe) {
    const Point2 c = view.to_image(*input.probe);
    svg << R"(<rect class="probe" x=")" << num(c.x1 - 3.0) << R"(" y=")" << num(c.x2 - 3.0)
        << R"(" width="6" height="6" fill="#8e44ad"/>)" << "\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string render_figure(const GDSMapping& m, const FigureInput& input, const std::filesystem::path& out) {
  std::string svg = render_svg(m, input);
  std::ofstream file(out, std::ios::binary);
  if (!file) throw Error(ErrorCode::IoError, "cannot open " + out.string() + " for writing");
  file << svg;
  if (!file) throw Error(ErrorCode::IoError, "failed writing " + out.string());
  return svg;
}

}  // namespace umbrella
