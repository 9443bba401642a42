#include "umbrella/mapping.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace umbrella {

double norm(Point2 p) { return std::hypot(p.x1, p.x2); }

double distance(Point2 a, Point2 b) { return norm(a - b); }

bool is_finite(Point2 p) { return std::isfinite(p.x1) && std::isfinite(p.x2); }

CoefficientMatrix::CoefficientMatrix(std::vector<Row2> rows) : rows_(std::move(rows)) {
  if (rows_.size() < 2) {
    throw Error(ErrorCode::DimensionMismatch,
                "coefficient matrix needs at least 2 rows, got " + std::to_string(rows_.size()));
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      const double v = rows_[i][j];
      if (!std::isfinite(v)) {
        throw Error(ErrorCode::NonFinite, "coefficient a" + std::to_string(i + 1) +
                                              std::to_string(j + 1) + " is not finite");
      }
      if (v == 0.0) {
        throw Error(ErrorCode::ZeroEntry, "coefficient a" + std::to_string(i + 1) +
                                              std::to_string(j + 1) + " is zero");
      }
    }
  }
}

int CoefficientMatrix::rank() const {
  const Row2& r0 = rows_[0];
  for (std::size_t k = 1; k < rows_.size(); ++k) {
    const Row2& rk = rows_[k];
    const double det = r0[0] * rk[1] - r0[1] * rk[0];
    const double scale = std::hypot(r0[0], r0[1]) * std::hypot(rk[0], rk[1]);
    if (std::abs(det) > 1e-12 * scale) return 2;
  }
  return 1;
}

std::string_view to_string(MapForm form) {
  switch (form) {
    case MapForm::general: return "general";
    case MapForm::distance_squared: return "distance_squared";
    case MapForm::lorentzian: return "lorentzian";
    case MapForm::ellipse_circle: return "ellipse_circle";
  }
  return "general";
}

MapForm map_form_from_string(std::string_view name) {
  if (name == "general") return MapForm::general;
  if (name == "distance_squared") return MapForm::distance_squared;
  if (name == "lorentzian") return MapForm::lorentzian;
  if (name == "ellipse_circle") return MapForm::ellipse_circle;
  throw Error(ErrorCode::InvalidInput, "unknown mapping form '" + std::string(name) + "'");
}

GDSMapping::GDSMapping(CoefficientMatrix coefficients, std::vector<Point2> centers, MapForm form,
                       std::optional<EllipseCircleParams> params)
    : coefficients_(std::move(coefficients)),
      centers_(std::move(centers)),
      form_(form),
      params_(params) {
  if (centers_.size() != coefficients_.ell()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix has " + std::to_string(coefficients_.ell()) + " rows but " +
                    std::to_string(centers_.size()) + " centers were given");
  }
  for (const Point2& p : centers_) {
    if (!is_finite(p)) throw Error(ErrorCode::NonFinite, "center is not finite");
  }
}

GDSMapping make_mapping(std::vector<Row2> rows, std::vector<Point2> centers) {
  return GDSMapping(CoefficientMatrix(std::move(rows)), std::move(centers));
}

GDSMapping make_special(MapForm kind, std::vector<Point2> centers,
                        std::optional<EllipseCircleParams> params) {
  const std::size_t ell = centers.size();
  std::vector<Row2> rows(ell, Row2{1.0, 1.0});
  switch (kind) {
    case MapForm::general:
      throw Error(ErrorCode::InvalidParams, "make_special needs a special form");
    case MapForm::distance_squared:
      break;
    case MapForm::lorentzian:
      for (Row2& r : rows) r[0] = -1.0;
      break;
    case MapForm::ellipse_circle: {
      if (!params) throw Error(ErrorCode::InvalidParams, "ellipse_circle needs (a, b)");
      const auto [a, b] = *params;
      if (!(std::isfinite(a) && std::isfinite(b) && 0.0 < a && a < b)) {
        throw Error(ErrorCode::InvalidParams,
                    "ellipse_circle requires 0 < a < b, got a=" + std::to_string(a) +
                        " b=" + std::to_string(b));
      }
      if (ell > 0) rows[0] = {a, b};
      return GDSMapping(CoefficientMatrix(std::move(rows)), std::move(centers), kind, params);
    }
  }
  return GDSMapping(CoefficientMatrix(std::move(rows)), std::move(centers), kind);
}

std::vector<double> evaluate(const GDSMapping& m, Point2 x) {
  if (!is_finite(x)) throw Error(ErrorCode::NonFinite, "evaluation point is not finite");
  std::vector<double> out(m.ell());
  for (std::size_t i = 0; i < m.ell(); ++i) {
    const Row2& a = m.row(i);
    const Point2 d = x - m.center(i);
    out[i] = a[0] * d.x1 * d.x1 + a[1] * d.x2 * d.x2;
  }
  return out;
}

JacobianMatrix jacobian(const GDSMapping& m, Point2 x) {
  if (!is_finite(x)) throw Error(ErrorCode::NonFinite, "evaluation point is not finite");
  JacobianMatrix jac{std::vector<Row2>(m.ell()), x};
  for (std::size_t i = 0; i < m.ell(); ++i) {
    const Row2& a = m.row(i);
    const Point2 d = x - m.center(i);
    jac.rows[i] = {2.0 * a[0] * d.x1, 2.0 * a[1] * d.x2};
  }
  return jac;
}

RankInfo numerical_rank(std::span<const Row2> rows, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParams, "rank tolerance must be positive");
  Eigen::MatrixX2d mat(static_cast<Eigen::Index>(rows.size()), 2);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    mat(static_cast<Eigen::Index>(i), 0) = rows[i][0];
    mat(static_cast<Eigen::Index>(i), 1) = rows[i][1];
  }
  Eigen::JacobiSVD<Eigen::MatrixX2d> svd(mat, Eigen::ComputeFullV);
  RankInfo info;
  info.sigma_max = svd.singularValues()(0);
  info.sigma_min = rows.size() >= 2 ? svd.singularValues()(1) : 0.0;
  if (info.sigma_max == 0.0) {
    info.rank = 0;
    info.kernel = Point2{1.0, 0.0};
    return info;
  }
  if (info.sigma_min / info.sigma_max >= tol) {
    info.rank = 2;
    return info;
  }
  info.rank = 1;
  Point2 k{svd.matrixV()(0, 1), svd.matrixV()(1, 1)};
  if (k.x1 < 0.0 || (k.x1 == 0.0 && k.x2 < 0.0)) k = -1.0 * k;
  info.kernel = (1.0 / norm(k)) * k;
  return info;
}

RankInfo rank_at(const GDSMapping& m, Point2 x, double tol) {
  const JacobianMatrix jac = jacobian(m, x);
  return numerical_rank(jac.rows, tol);
}

}  // namespace umbrella
