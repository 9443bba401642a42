#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "umbrella/mapping.hpp"
#include "umbrella/singular_locus.hpp"

namespace umbrella {

struct CrossCapWitness {
  Point2 eta;   // unit kernel direction
  Point2 tau;   // eta rotated by +90 degrees
  double det_value = 0.0;       // det[dF(tau), D2F(eta,eta), D2F(tau,eta)]
  double normalized_det = 0.0;  // det_value / product of column norms
  bool is_crosscap = false;
};

using Hessian2 = std::array<double, 3>;  // (h11, h12, h22)

inline constexpr double kDefaultCrossCapTol = 1e-6;
inline constexpr double kCrossCapRankTol = 1e-6;

/// Raw determinant of the three recognition columns for explicit eta, tau
/// (l = 3). The directions are not normalised.
double crosscap_determinant(std::span<const Row2> jacobian_rows, std::span<const Hessian2> hessians,
                            Point2 eta, Point2 tau);

/// Whitney umbrella recognition from the 2-jet of a map germ R^2 -> R^3:
/// rank-1 differential and dF(tau), D2F(eta,eta), D2F(tau,eta) independent.
CrossCapWitness crosscap_from_jet(std::span<const Row2> jacobian_rows,
                                  std::span<const Hessian2> hessians,
                                  double tol = kDefaultCrossCapTol);

CrossCapWitness crosscap_test(const GDSMapping& m, Point2 q, double tol = kDefaultCrossCapTol);

enum class MapClassKind { whitney_umbrella, immersion, unresolved };

std::string_view to_string(MapClassKind kind);

struct MapClass {
  MapClassKind kind = MapClassKind::unresolved;
  std::optional<Point2> point;
  std::optional<double> det;
  std::string reason;
  SingularLocus locus;
};

MapClass classify_map(const GDSMapping& m, double tol = 1e-8);

}  // namespace umbrella
