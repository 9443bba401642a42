#pragma once

#include <vector>

#include "umbrella/conic.hpp"
#include "umbrella/mapping.hpp"

namespace umbrella {

struct SingularPointRecord {
  Point2 location;
  int jacobian_rank = 1;
  Point2 kernel;
  double max_minor_residual = 0.0;
  bool degenerate = false;  // location coincides with some centre
  std::vector<double> levels;
};

struct SingularLocus {
  std::vector<SingularPointRecord> points;  // lexicographic by location
  // Set when every pair of minor conics shares a component: the singular set
  // contains a curve and `points` only lists the refined seeds on it.
  bool non_isolated = false;
  std::vector<Point2> candidates;  // seeds produced by elimination
};

struct SolverOptions {
  double tol = 1e-8;             // on canonically normalised minor residuals
  int max_iterations = 50;
  double step_tol = 1e-13;
  double rank_tol = 1e-6;        // sigma_min / sigma_max at accepted points
};

inline constexpr double kDegeneracyDistance = 1e-6;

/// True when q lies within 1e-6 (1 + |p_i|) of some centre p_i.
bool near_center(const GDSMapping& m, Point2 q);

/// All isolated real singular points of m (l >= 3).
SingularLocus solve_singular_points(const GDSMapping& m, const SolverOptions& opts = {});
SingularLocus solve_singular_points(const GDSMapping& m, double tol);

struct SingularCurve {
  Conic conic;
  ConicKind kind;
};

/// The singular set of an l = 2 mapping: the zero set of its single minor.
SingularCurve singular_curve(const GDSMapping& m, double tol = kDefaultConicTol);

}  // namespace umbrella
