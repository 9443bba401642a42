#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "umbrella/conic.hpp"
#include "umbrella/mapping.hpp"

namespace umbrella {

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Box {
  double x0 = -1.0;
  double y0 = -1.0;
  double x1 = 1.0;
  double y1 = 1.0;

  bool valid() const;
  bool contains(Point2 q, double margin = 0.0) const;
};

/// The level curve {F_i = c_i} through some point.
struct FoliationLevel {
  std::size_t index = 0;
  Point2 center;
  double level = 0.0;
  Conic conic;  // component i minus c_i
  ConicKind kind = ConicKind::empty;
};

std::vector<FoliationLevel> levels_through_point(const GDSMapping& m, Point2 q,
                                                 double tol = kDefaultConicTol);

/// Centres' bounding box grown by three times its larger side on every side.
Box default_search_box(const GDSMapping& m);

inline constexpr int kDefaultGrid = 200;
inline constexpr double kDefaultTangencyTol = 1e-7;

struct TangencyReport {
  std::vector<Point2> points;            // lexicographic
  std::vector<double> objective;         // max normalised cross product at each point
  std::vector<Point2> excluded_points;   // centres where some level curve is a point
  int excluded_regions = 0;
};

/// Max over level-curve pairs of |g_i x g_k| / (|g_i| |g_k|), gradients taken
/// from the level conics through q. Returns +inf where a gradient vanishes.
double tangency_objective(const GDSMapping& m, Point2 q);

/// Grid scan plus derivative-free descent for points where all level curves
/// through the point are mutually tangent.
TangencyReport tangency_search(const GDSMapping& m, const Box& box, int grid_n = kDefaultGrid,
                               double tol = kDefaultTangencyTol);

/// box scaled by `factor` about its centre.
Box scaled_box(const Box& box, double factor);

inline constexpr double kNestedScales[] = {1.0, 10.0, 100.0, 1000.0};

/// tangency_search over box scaled by each factor in turn (increasing, >= 1).
/// A point is taken from the smallest box containing it.
TangencyReport tangency_search_nested(const GDSMapping& m, const Box& box,
                                      std::span<const double> scales = kNestedScales,
                                      int grid_n = kDefaultGrid, double tol = kDefaultTangencyTol);

struct DegeneracyReport {
  std::vector<bool> sigma_flags;  // p_i is itself a singular point
  std::vector<std::pair<std::size_t, std::size_t>> coincident_centers;  // zero-based
  bool rank_deficient_A = false;

  /// No condition on the central point is triggered.
  bool central_point_clean() const;
};

DegeneracyReport detect_degeneracy(const GDSMapping& m, double tol = kDefaultRankTol);

}  // namespace umbrella
