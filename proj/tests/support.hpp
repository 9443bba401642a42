#pragma once

// Shared fixtures, random generators and brute-force oracles for the tests.
// Nothing here calls into the solver paths it is used to check.

#include <cmath>
#include <random>
#include <vector>

#include "umbrella/mapping.hpp"

namespace umbrella::testing {

inline GDSMapping worked_example() {
  return make_special(MapForm::ellipse_circle, {{0, 0}, {1, 0}, {0, 1}}, EllipseCircleParams{1.0, 2.0});
}

inline GDSMapping worked_example_l4() {
  return make_mapping({{1, 2}, {1, 1}, {1, 1}, {1, 1}}, {{0, 0}, {1, 0}, {0, 1}, {1, 1}});
}

inline GDSMapping collinear_example() {
  return make_special(MapForm::ellipse_circle, {{0, 0}, {1, 0}, {2, 0}}, EllipseCircleParams{1.0, 2.0});
}

inline std::vector<Point2> random_centers(std::mt19937_64& rng, std::size_t ell, double lo = -2.0,
                                          double hi = 2.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<Point2> out;
  for (std::size_t i = 0; i < ell; ++i) {
    const double x = u(rng);
    const double y = u(rng);
    out.push_back({x, y});
  }
  return out;
}

/// Random non-zero entry with magnitude in [0.2, 3] and random sign.
inline double random_entry(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.2, 3.0);
  std::bernoulli_distribution neg(0.3);
  return (neg(rng) ? -1.0 : 1.0) * mag(rng);
}

inline GDSMapping random_general(std::mt19937_64& rng, std::size_t ell) {
  std::vector<Row2> rows;
  for (std::size_t i = 0; i < ell; ++i) rows.push_back({random_entry(rng), random_entry(rng)});
  return make_mapping(rows, random_centers(rng, ell));
}

inline GDSMapping random_ellipse_circle(std::mt19937_64& rng, std::size_t ell) {
  return make_special(MapForm::ellipse_circle, random_centers(rng, ell), EllipseCircleParams{1.0, 2.0});
}

/// 2x2 minor of Jacobian rows i, k computed straight from the definition
/// of the component partial derivatives.
inline double direct_minor(const GDSMapping& m, std::size_t i, std::size_t k, Point2 x) {
  const double ri1 = 2.0 * m.row(i)[0] * (x.x1 - m.center(i).x1);
  const double ri2 = 2.0 * m.row(i)[1] * (x.x2 - m.center(i).x2);
  const double rk1 = 2.0 * m.row(k)[0] * (x.x1 - m.center(k).x1);
  const double rk2 = 2.0 * m.row(k)[1] * (x.x2 - m.center(k).x2);
  return ri1 * rk2 - ri2 * rk1;
}

/// Max |minor| over all row pairs.
inline double max_direct_minor(const GDSMapping& m, Point2 x) {
  double r = 0.0;
  for (std::size_t i = 0; i < m.ell(); ++i) {
    for (std::size_t k = i + 1; k < m.ell(); ++k) r = std::max(r, std::abs(direct_minor(m, i, k, x)));
  }
  return r;
}

}  // namespace umbrella::testing
