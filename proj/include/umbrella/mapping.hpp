#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "umbrella/error.hpp"

namespace umbrella {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }

double norm(Point2 p);
double distance(Point2 a, Point2 b);
bool is_finite(Point2 p);

using Row2 = std::array<double, 2>;

/// The l x 2 coefficient matrix A. Every entry must be non-zero.
class CoefficientMatrix {
 public:
  explicit CoefficientMatrix(std::vector<Row2> rows);

  std::size_t ell() const { return rows_.size(); }
  const Row2& row(std::size_t i) const { return rows_[i]; }
  std::span<const Row2> rows() const { return rows_; }

  /// 1 when all rows are proportional, else 2.
  int rank() const;

 private:
  std::vector<Row2> rows_;
};

enum class MapForm { general, distance_squared, lorentzian, ellipse_circle };

std::string_view to_string(MapForm form);
MapForm map_form_from_string(std::string_view name);

/// Parameters (a, b) of the ellipse/circle normal form, 0 < a < b.
struct EllipseCircleParams {
  double a = 1.0;
  double b = 2.0;
};

/// A generalized distance-squared mapping of the plane,
///   x -> ( a_i1 (x1 - p_i1)^2 + a_i2 (x2 - p_i2)^2 )_{i = 1..l}.
/// Immutable after construction.
class GDSMapping {
 public:
  GDSMapping(CoefficientMatrix coefficients, std::vector<Point2> centers,
             MapForm form = MapForm::general,
             std::optional<EllipseCircleParams> params = std::nullopt);

  std::size_t ell() const { return coefficients_.ell(); }
  const CoefficientMatrix& coefficients() const { return coefficients_; }
  const Row2& row(std::size_t i) const { return coefficients_.row(i); }
  std::span<const Point2> centers() const { return centers_; }
  const Point2& center(std::size_t i) const { return centers_[i]; }
  MapForm form() const { return form_; }
  const std::optional<EllipseCircleParams>& ellipse_circle_params() const { return params_; }
  int rank() const { return coefficients_.rank(); }

 private:
  CoefficientMatrix coefficients_;
  std::vector<Point2> centers_;
  MapForm form_;
  std::optional<EllipseCircleParams> params_;
};

GDSMapping make_mapping(std::vector<Row2> rows, std::vector<Point2> centers);

/// distance_squared: all-ones matrix. lorentzian: rows (-1, 1).
/// ellipse_circle: first row (a, b), remaining rows (1, 1).
GDSMapping make_special(MapForm kind, std::vector<Point2> centers,
                        std::optional<EllipseCircleParams> params = std::nullopt);

std::vector<double> evaluate(const GDSMapping& m, Point2 x);

struct JacobianMatrix {
  std::vector<Row2> rows;
  Point2 base;
};

/// Row i is 2 (a_i1 (x1 - p_i1), a_i2 (x2 - p_i2)).
JacobianMatrix jacobian(const GDSMapping& m, Point2 x);

struct RankInfo {
  int rank = 2;
  std::optional<Point2> kernel;  // unit vector, present when rank <= 1
  double sigma_max = 0.0;
  double sigma_min = 0.0;
};

inline constexpr double kDefaultRankTol = 1e-9;

/// Numerical rank of an l x 2 matrix from sigma_min / sigma_max < tol.
RankInfo numerical_rank(std::span<const Row2> rows, double tol = kDefaultRankTol);

RankInfo rank_at(const GDSMapping& m, Point2 x, double tol = kDefaultRankTol);

}  // namespace umbrella
