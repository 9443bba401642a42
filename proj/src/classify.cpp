#include "umbrella/classify.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace umbrella {

namespace {

struct Columns {
  Eigen::Vector3d dtau;
  Eigen::Vector3d d2_eta_eta;
  Eigen::Vector3d d2_tau_eta;
};

Columns recognition_columns(std::span<const Row2> rows, std::span<const Hessian2> hessians,
                            Point2 eta, Point2 tau) {
  Columns c;
  for (int i = 0; i < 3; ++i) {
    const Row2& j = rows[static_cast<std::size_t>(i)];
    const auto& [h11, h12, h22] = hessians[static_cast<std::size_t>(i)];
    c.dtau(i) = j[0] * tau.x1 + j[1] * tau.x2;
    c.d2_eta_eta(i) = h11 * eta.x1 * eta.x1 + 2.0 * h12 * eta.x1 * eta.x2 + h22 * eta.x2 * eta.x2;
    c.d2_tau_eta(i) = h11 * tau.x1 * eta.x1 + h12 * (tau.x1 * eta.x2 + tau.x2 * eta.x1) +
                      h22 * tau.x2 * eta.x2;
  }
  return c;
}

void require_three(std::size_t rows, std::size_t hessians) {
  if (rows != 3 || hessians != 3) {
    throw Error(ErrorCode::DimensionMismatch, "cross-cap recognition needs a map into R^3");
  }
}

}  // namespace

double crosscap_determinant(std::span<const Row2> jacobian_rows, std::span<const Hessian2> hessians,
                            Point2 eta, Point2 tau) {
  require_three(jacobian_rows.size(), hessians.size());
  const Columns c = recognition_columns(jacobian_rows, hessians, eta, tau);
  Eigen::Matrix3d mat;
  mat << c.dtau, c.d2_eta_eta, c.d2_tau_eta;
  return mat.determinant();
}

CrossCapWitness crosscap_from_jet(std::span<const Row2> jacobian_rows,
                                  std::span<const Hessian2> hessians, double tol) {
  require_three(jacobian_rows.size(), hessians.size());
  const RankInfo info = numerical_rank(jacobian_rows, kCrossCapRankTol);
  if (info.rank != 1) {
    throw Error(ErrorCode::NotRankOne,
                "differential has rank " + std::to_string(info.rank) + ", expected 1");
  }
  CrossCapWitness w;
  w.eta = *info.kernel;
  w.tau = {-w.eta.x2, w.eta.x1};
  const Columns c = recognition_columns(jacobian_rows, hessians, w.eta, w.tau);
  Eigen::Matrix3d mat;
  mat << c.dtau, c.d2_eta_eta, c.d2_tau_eta;
  w.det_value = mat.determinant();
  const double scale = c.dtau.norm() * c.d2_eta_eta.norm() * c.d2_tau_eta.norm();
  w.normalized_det = scale > 0.0 ? w.det_value / scale : 0.0;
  w.is_crosscap = std::abs(w.normalized_det) > tol;
  return w;
}

CrossCapWitness crosscap_test(const GDSMapping& m, Point2 q, double tol) {
  if (m.ell() != 3) {
    throw Error(ErrorCode::DimensionMismatch,
                "cross-cap test needs l = 3, got l = " + std::to_string(m.ell()));
  }
  const JacobianMatrix jac = jacobian(m, q);
  std::vector<Hessian2> hessians;
  for (std::size_t i = 0; i < 3; ++i) hessians.push_back({2.0 * m.row(i)[0], 0.0, 2.0 * m.row(i)[1]});
  return crosscap_from_jet(jac.rows, hessians, tol);
}

std::string_view to_string(MapClassKind kind) {
  switch (kind) {
    case MapClassKind::whitney_umbrella: return "whitney_umbrella";
    case MapClassKind::immersion: return "immersion";
    case MapClassKind::unresolved: return "unresolved";
  }
  return "unresolved";
}

MapClass classify_map(const GDSMapping& m, double tol) {
  if (m.ell() < 3) {
    throw Error(ErrorCode::DimensionMismatch,
                "classify_map needs l >= 3, got l = " + std::to_string(m.ell()));
  }
  MapClass out;
  try {
    out.locus = solve_singular_points(m, tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::SolverInconsistency) throw;
    out.reason = e.what();
    return out;
  }
  const auto& pts = out.locus.points;
  if (out.locus.non_isolated) {
    out.reason = "singular set contains a curve (central point in a degenerate set)";
    return out;
  }
  if (pts.empty()) {
    out.kind = MapClassKind::immersion;
    return out;
  }
  if (m.ell() == 3 && pts.size() == 1) {
    const Point2 q = pts.front().location;
    try {
      const CrossCapWitness w = crosscap_test(m, q);
      out.det = w.normalized_det;
      if (w.is_crosscap) {
        out.kind = MapClassKind::whitney_umbrella;
        out.point = q;
        return out;
      }
      out.reason = "singular point fails cross-cap recognition";
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotRankOne) throw;
      out.reason = e.what();
    }
    return out;
  }
  out.reason = std::to_string(pts.size()) + " singular points found for l = " + std::to_string(m.ell());
  return out;
}

}  // namespace umbrella
