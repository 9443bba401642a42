#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

#include "umbrella/mapping.hpp"

namespace umbrella {

/// c20 x1^2 + c11 x1 x2 + c02 x2^2 + c10 x1 + c01 x2 + c00.
struct Conic {
  double c20 = 0.0;
  double c11 = 0.0;
  double c02 = 0.0;
  double c10 = 0.0;
  double c01 = 0.0;
  double c00 = 0.0;

  double operator()(Point2 x) const;
  Point2 gradient(Point2 x) const;
  std::array<double, 6> coefficients() const { return {c20, c11, c02, c10, c01, c00}; }
  double max_abs_coefficient() const;
  bool is_zero() const { return max_abs_coefficient() == 0.0; }

  /// Divide by the max-magnitude coefficient and make the first non-zero
  /// coefficient positive. The zero conic is returned unchanged.
  Conic canonical() const;

  friend bool operator==(const Conic&, const Conic&) = default;
};

enum class ConicKind {
  circle,
  ellipse,
  rectangular_hyperbola,
  hyperbola,
  parabola,
  intersecting_lines,
  parallel_lines,
  single_line,
  single_point,
  empty,
  whole_plane,
};

std::string_view to_string(ConicKind kind);

inline constexpr double kDefaultConicTol = 1e-9;

ConicKind classify_conic(const Conic& c, double tol = kDefaultConicTol);

/// Polynomial in one variable, coefficients in ascending powers.
class UnivariatePoly {
 public:
  UnivariatePoly() = default;
  explicit UnivariatePoly(std::vector<double> ascending);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<double>& coefficients() const { return coeffs_; }
  double coefficient(std::size_t power) const {
    return power < coeffs_.size() ? coeffs_[power] : 0.0;
  }
  double operator()(double t) const;

  /// Drops leading coefficients with |c| <= threshold.
  UnivariatePoly trimmed(double threshold) const;

  friend UnivariatePoly operator+(const UnivariatePoly& a, const UnivariatePoly& b);
  friend UnivariatePoly operator-(const UnivariatePoly& a, const UnivariatePoly& b);
  friend UnivariatePoly operator*(const UnivariatePoly& a, const UnivariatePoly& b);

 private:
  std::vector<double> coeffs_;
};

enum class Variable { x1, x2 };

struct EliminationResult {
  UnivariatePoly poly;           // polynomial in the variable that is kept
  bool identically_zero = false;  // the conics share a component
};

/// Resultant of two conics with respect to `var` (Sylvester determinant of
/// the conics viewed as polynomials in `var`).
EliminationResult eliminate_variable(const Conic& c1, const Conic& c2, Variable var);

/// All complex roots via companion-matrix eigenvalues.
std::vector<std::complex<double>> polynomial_roots(const UnivariatePoly& p);

struct RealRoot {
  double value = 0.0;
  int multiplicity = 1;
};

/// Real roots (|Im| < 1e-8 (1 + |Re|)), merged when closer than tol, sorted.
std::vector<RealRoot> real_roots(const UnivariatePoly& p, double tol = 1e-9);

/// Tangency of two conics at q. Throws DegenerateGradient when either
/// gradient vanishes at q.
bool tangent_at_point(const Conic& c1, const Conic& c2, Point2 q, double tol = 1e-9);

struct MinorConic {
  std::size_t i = 0;  // zero-based row indices, i < k
  std::size_t k = 0;
  Conic conic;
};

/// The 2x2 Jacobian minor of rows i and k divided by the constant factor 4.
Conic minor_conic(const GDSMapping& m, std::size_t i, std::size_t k);

/// One conic per row pair i < k, in lexicographic order.
std::vector<MinorConic> minor_conics(const GDSMapping& m);

/// Component i of the mapping as a conic (level 0).
Conic component_conic(const GDSMapping& m, std::size_t i);

}  // namespace umbrella
