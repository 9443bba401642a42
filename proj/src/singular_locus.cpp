#include "umbrella/singular_locus.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace umbrella {

namespace {

// Seeds from resultant roots are refined by Newton, so roots with a small
// imaginary part (split double roots) are kept.
std::vector<double> seed_coordinates(const UnivariatePoly& p) {
  std::vector<double> out;
  for (const auto& z : polynomial_roots(p)) {
    if (std::abs(z.imag()) <= 1e-3 * (1.0 + std::abs(z.real()))) out.push_back(z.real());
  }
  return out;
}

struct Refinement {
  Point2 x;
  double residual = 0.0;
  bool diverged = false;
};

double max_residual(std::span<const Conic> conics, Point2 x) {
  double r = 0.0;
  for (const Conic& c : conics) r = std::max(r, std::abs(c(x)));
  return r;
}

// Gauss-Newton on the overdetermined system {minor_k(x) = 0}.
Refinement refine(std::span<const Conic> conics, Point2 x, const SolverOptions& opts) {
  const auto n = static_cast<Eigen::Index>(conics.size());
  Eigen::VectorXd r(n);
  Eigen::MatrixX2d jac(n, 2);
  for (int it = 0; it < opts.max_iterations; ++it) {
    for (Eigen::Index k = 0; k < n; ++k) {
      const Conic& c = conics[static_cast<std::size_t>(k)];
      r(k) = c(x);
      const Point2 g = c.gradient(x);
      jac(k, 0) = g.x1;
      jac(k, 1) = g.x2;
    }
    Eigen::JacobiSVD<Eigen::MatrixX2d> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::Vector2d step = -svd.solve(r);
    if (!step.allFinite()) return {x, 0.0, true};
    x = {x.x1 + step(0), x.x2 + step(1)};
    if (!is_finite(x) || norm(x) > 1e12) return {x, 0.0, true};
    if (step.norm() < opts.step_tol * (1.0 + norm(x))) break;
  }
  return {x, max_residual(conics, x), false};
}

bool lexicographic(const Point2& a, const Point2& b) {
  return a.x1 != b.x1 ? a.x1 < b.x1 : a.x2 < b.x2;
}

}  // namespace

bool near_center(const GDSMapping& m, Point2 q) {
  for (const Point2& p : m.centers()) {
    if (distance(q, p) < kDegeneracyDistance * (1.0 + norm(p))) return true;
  }
  return false;
}

SingularLocus solve_singular_points(const GDSMapping& m, double tol) {
  SolverOptions opts;
  opts.tol = tol;
  return solve_singular_points(m, opts);
}

SingularLocus solve_singular_points(const GDSMapping& m, const SolverOptions& opts) {
  if (m.ell() < 3) {
    throw Error(ErrorCode::DimensionMismatch, "point solver needs l >= 3; use singular_curve for l = 2");
  }
  if (!(opts.tol > 0.0)) throw Error(ErrorCode::InvalidParams, "solver tolerance must be positive");

  std::vector<Conic> conics;
  for (const MinorConic& mc : minor_conics(m)) {
    if (!mc.conic.is_zero()) conics.push_back(mc.conic.canonical());
  }

  SingularLocus locus;
  bool found_pair = false;
  bool shared_component = conics.size() < 2;
  for (std::size_t a = 0; a < conics.size() && !found_pair; ++a) {
    for (std::size_t b = a + 1; b < conics.size() && !found_pair; ++b) {
      const EliminationResult in_x1 = eliminate_variable(conics[a], conics[b], Variable::x2);
      const EliminationResult in_x2 = eliminate_variable(conics[a], conics[b], Variable::x1);
      if (in_x1.identically_zero || in_x2.identically_zero) {
        shared_component = true;
        continue;
      }
      found_pair = true;
      for (double u : seed_coordinates(in_x1.poly)) {
        for (double v : seed_coordinates(in_x2.poly)) locus.candidates.push_back({u, v});
      }
    }
  }
  if (!found_pair) locus.non_isolated = true;
  if (shared_component) {
    for (const Point2& p : m.centers()) locus.candidates.push_back(p);
  }

  if (conics.empty()) {
    // Every minor vanishes identically: the whole plane is singular.
    for (const Point2& p : locus.candidates) {
      SingularPointRecord rec;
      rec.location = p;
      const RankInfo info = rank_at(m, p, opts.rank_tol);
      rec.jacobian_rank = std::min(info.rank, 1);
      rec.kernel = info.kernel.value_or(Point2{1.0, 0.0});
      rec.degenerate = near_center(m, p);
      rec.levels = evaluate(m, p);
      locus.points.push_back(std::move(rec));
    }
    std::sort(locus.points.begin(), locus.points.end(),
              [](const auto& l, const auto& r) { return lexicographic(l.location, r.location); });
    return locus;
  }

  std::size_t diverged = 0;
  for (const Point2& seed : locus.candidates) {
    const Refinement ref = refine(conics, seed, opts);
    if (ref.diverged) {
      ++diverged;
      continue;
    }
    if (!(ref.residual < opts.tol)) continue;
    const RankInfo info = rank_at(m, ref.x, opts.rank_tol);
    if (info.rank > 1) continue;
    const bool duplicate = std::any_of(locus.points.begin(), locus.points.end(), [&](const auto& rec) {
      return distance(rec.location, ref.x) < 10.0 * opts.tol;
    });
    if (duplicate) continue;
    SingularPointRecord rec;
    rec.location = ref.x;
    rec.jacobian_rank = info.rank;
    rec.kernel = info.kernel.value_or(Point2{1.0, 0.0});
    rec.max_minor_residual = ref.residual;
    rec.degenerate = near_center(m, ref.x);
    rec.levels = evaluate(m, ref.x);
    locus.points.push_back(std::move(rec));
  }

  if (!locus.candidates.empty() && diverged == locus.candidates.size()) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "Newton refinement diverged from every candidate:";
    for (const Point2& p : locus.candidates) msg << " (" << p.x1 << ", " << p.x2 << ")";
    throw Error(ErrorCode::SolverInconsistency, msg.str());
  }

  std::sort(locus.points.begin(), locus.points.end(),
            [](const auto& l, const auto& r) { return lexicographic(l.location, r.location); });
  return locus;
}

SingularCurve singular_curve(const GDSMapping& m, double tol) {
  if (m.ell() != 2) {
    throw Error(ErrorCode::DimensionMismatch,
                "singular_curve needs l = 2, got l = " + std::to_string(m.ell()));
  }
  const Conic c = minor_conic(m, 0, 1);
  return {c, classify_conic(c, tol)};
}

}  // namespace umbrella
