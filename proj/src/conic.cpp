#include "umbrella/conic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <Eigen/Dense>

namespace umbrella {

double Conic::operator()(Point2 x) const {
  return c20 * x.x1 * x.x1 + c11 * x.x1 * x.x2 + c02 * x.x2 * x.x2 + c10 * x.x1 + c01 * x.x2 +
         c00;
}

Point2 Conic::gradient(Point2 x) const {
  return {2.0 * c20 * x.x1 + c11 * x.x2 + c10, c11 * x.x1 + 2.0 * c02 * x.x2 + c01};
}

double Conic::max_abs_coefficient() const {
  double m = 0.0;
  for (double c : coefficients()) m = std::max(m, std::abs(c));
  return m;
}

Conic Conic::canonical() const {
  const double scale = max_abs_coefficient();
  if (scale == 0.0) return *this;
  double first = 0.0;
  for (double c : coefficients()) {
    if (c != 0.0) {
      first = c;
      break;
    }
  }
  const double s = (first < 0.0 ? -1.0 : 1.0) / scale;
  return {s * c20, s * c11, s * c02, s * c10, s * c01, s * c00};
}

std::string_view to_string(ConicKind kind) {
  switch (kind) {
    case ConicKind::circle: return "circle";
    case ConicKind::ellipse: return "ellipse";
    case ConicKind::rectangular_hyperbola: return "rectangular_hyperbola";
    case ConicKind::hyperbola: return "hyperbola";
    case ConicKind::parabola: return "parabola";
    case ConicKind::intersecting_lines: return "intersecting_lines";
    case ConicKind::parallel_lines: return "parallel_lines";
    case ConicKind::single_line: return "single_line";
    case ConicKind::single_point: return "single_point";
    case ConicKind::empty: return "empty";
    case ConicKind::whole_plane: return "whole_plane";
  }
  return "empty";
}

namespace {

// Rank-deficient quadratic part: lambda u^2 + d u + e v + c00 in rotated
// coordinates (u along the non-null eigenvector).
ConicKind classify_parabolic(const Conic& c, double tol) {
  const Eigen::Matrix2d quad{{c.c20, 0.5 * c.c11}, {0.5 * c.c11, c.c02}};
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(quad);
  const int big = std::abs(eig.eigenvalues()(1)) >= std::abs(eig.eigenvalues()(0)) ? 1 : 0;
  const double lambda = eig.eigenvalues()(big);
  const Eigen::Vector2d u = eig.eigenvectors().col(big);
  const Eigen::Vector2d v{-u(1), u(0)};
  const Eigen::Vector2d lin{c.c10, c.c01};
  const double d = lin.dot(u);
  const double e = lin.dot(v);
  if (std::abs(e) > tol * std::max({std::abs(lambda), std::abs(d), std::abs(c.c00)})) {
    return ConicKind::parabola;
  }
  const double disc = d * d - 4.0 * lambda * c.c00;
  if (std::abs(disc) <= tol * (d * d + 4.0 * std::abs(lambda * c.c00))) {
    return ConicKind::single_line;
  }
  return disc > 0.0 ? ConicKind::parallel_lines : ConicKind::empty;
}

}  // namespace

ConicKind classify_conic(const Conic& raw, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParams, "classification tolerance must be positive");
  if (raw.is_zero()) return ConicKind::whole_plane;
  const Conic c = raw.canonical();

  const double qmax = std::max({std::abs(c.c20), std::abs(c.c11), std::abs(c.c02)});
  if (qmax <= tol) {
    const double lin = std::max(std::abs(c.c10), std::abs(c.c01));
    return lin <= tol ? ConicKind::empty : ConicKind::single_line;
  }

  const double det_quad = c.c20 * c.c02 - 0.25 * c.c11 * c.c11;
  const double rel_det = det_quad / (qmax * qmax);
  if (std::abs(rel_det) <= tol) return classify_parabolic(c, tol);

  // Value at the centre decides degeneracy: det(full) = det(quad) * f(centre).
  const Point2 centre{(-c.c02 * c.c10 + 0.5 * c.c11 * c.c01) / (2.0 * det_quad),
                      (-c.c20 * c.c01 + 0.5 * c.c11 * c.c10) / (2.0 * det_quad)};
  const double f0 = c(centre);
  const double scale = std::abs(c.c20 * centre.x1 * centre.x1) +
                       std::abs(c.c11 * centre.x1 * centre.x2) +
                       std::abs(c.c02 * centre.x2 * centre.x2) + std::abs(c.c10 * centre.x1) +
                       std::abs(c.c01 * centre.x2) + std::abs(c.c00);
  const bool degenerate = std::abs(f0) <= tol * scale;

  if (rel_det > 0.0) {
    if (degenerate) return ConicKind::single_point;
    if (f0 * c.c20 > 0.0) return ConicKind::empty;
    const double m = std::max(std::abs(c.c20), std::abs(c.c02));
    const bool round = std::abs(c.c20 - c.c02) <= tol * m && std::abs(c.c11) <= tol * m;
    return round ? ConicKind::circle : ConicKind::ellipse;
  }
  if (degenerate) return ConicKind::intersecting_lines;
  return std::abs(c.c20 + c.c02) <= tol * qmax ? ConicKind::rectangular_hyperbola
                                               : ConicKind::hyperbola;
}

UnivariatePoly::UnivariatePoly(std::vector<double> ascending) : coeffs_(std::move(ascending)) {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double UnivariatePoly::operator()(double t) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * t + *it;
  return acc;
}

UnivariatePoly UnivariatePoly::trimmed(double threshold) const {
  std::vector<double> c = coeffs_;
  while (!c.empty() && std::abs(c.back()) <= threshold) c.pop_back();
  return UnivariatePoly(std::move(c));
}

UnivariatePoly operator+(const UnivariatePoly& a, const UnivariatePoly& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
  return UnivariatePoly(std::move(c));
}

UnivariatePoly operator-(const UnivariatePoly& a, const UnivariatePoly& b) {
  std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] -= b.coeffs_[i];
  return UnivariatePoly(std::move(c));
}

UnivariatePoly operator*(const UnivariatePoly& a, const UnivariatePoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  }
  return UnivariatePoly(std::move(c));
}

namespace {

using PolyMatrix = std::vector<std::vector<UnivariatePoly>>;

UnivariatePoly abs_poly(const UnivariatePoly& p) {
  std::vector<double> c = p.coefficients();
  for (double& v : c) v = std::abs(v);
  return UnivariatePoly(std::move(c));
}

// Laplace expansion along the first row. With `bound` set, all terms are
// added with absolute values, giving a coefficient-wise magnitude bound.
UnivariatePoly determinant(const PolyMatrix& mat, bool bound) {
  const std::size_t n = mat.size();
  if (n == 1) return bound ? abs_poly(mat[0][0]) : mat[0][0];
  UnivariatePoly acc;
  for (std::size_t col = 0; col < n; ++col) {
    if (mat[0][col].is_zero()) continue;
    PolyMatrix minor;
    minor.reserve(n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::vector<UnivariatePoly> row;
      row.reserve(n - 1);
      for (std::size_t c = 0; c < n; ++c) {
        if (c != col) row.push_back(mat[r][c]);
      }
      minor.push_back(std::move(row));
    }
    const UnivariatePoly entry = bound ? abs_poly(mat[0][col]) : mat[0][col];
    const UnivariatePoly term = entry * determinant(minor, bound);
    acc = (bound || col % 2 == 0) ? acc + term : acc - term;
  }
  return acc;
}

// Conic as a polynomial in the eliminated variable; entry k multiplies y^k
// and is itself a polynomial in the kept variable.
std::vector<UnivariatePoly> coefficients_in(const Conic& c, Variable var) {
  const double cut = 1e-14 * c.max_abs_coefficient();
  auto z = [cut](double v) { return std::abs(v) <= cut ? 0.0 : v; };
  std::vector<UnivariatePoly> q;
  if (var == Variable::x2) {
    q = {UnivariatePoly({z(c.c00), z(c.c10), z(c.c20)}), UnivariatePoly({z(c.c01), z(c.c11)}),
         UnivariatePoly({z(c.c02)})};
  } else {
    q = {UnivariatePoly({z(c.c00), z(c.c01), z(c.c02)}), UnivariatePoly({z(c.c10), z(c.c11)}),
         UnivariatePoly({z(c.c20)})};
  }
  while (q.size() > 1 && q.back().is_zero()) q.pop_back();
  return q;
}

PolyMatrix sylvester(const std::vector<UnivariatePoly>& f, const std::vector<UnivariatePoly>& g) {
  const std::size_t df = f.size() - 1;
  const std::size_t dg = g.size() - 1;
  const std::size_t n = df + dg;
  PolyMatrix mat(n, std::vector<UnivariatePoly>(n));
  for (std::size_t r = 0; r < dg; ++r) {
    for (std::size_t k = 0; k <= df; ++k) mat[r][r + k] = f[df - k];
  }
  for (std::size_t r = 0; r < df; ++r) {
    for (std::size_t k = 0; k <= dg; ++k) mat[dg + r][r + k] = g[dg - k];
  }
  return mat;
}

double max_abs(const UnivariatePoly& p) {
  double m = 0.0;
  for (double v : p.coefficients()) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

EliminationResult eliminate_variable(const Conic& c1, const Conic& c2, Variable var) {
  if (c1.is_zero() || c2.is_zero()) return {UnivariatePoly{}, true};
  const auto f = coefficients_in(c1, var);
  const auto g = coefficients_in(c2, var);

  UnivariatePoly res;
  UnivariatePoly bound;
  if (f.size() == 1 && g.size() == 1) {
    // Neither conic involves `var`: every common zero lies on a line
    // {kept = root of both}; the product keeps all such roots.
    res = f[0] * g[0];
    bound = abs_poly(f[0]) * abs_poly(g[0]);
  } else {
    const PolyMatrix mat = sylvester(f, g);
    res = determinant(mat, false);
    bound = determinant(mat, true);
  }
  const double threshold = 1e-11 * max_abs(bound);
  if (max_abs(res) <= threshold) return {UnivariatePoly{}, true};
  return {res.trimmed(threshold), false};
}

std::vector<std::complex<double>> polynomial_roots(const UnivariatePoly& p) {
  const int n = p.degree();
  if (n <= 0) return {};
  const auto& c = p.coefficients();
  const double lead = c.back();
  if (n == 1) return {std::complex<double>(-c[0] / lead, 0.0)};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[static_cast<std::size_t>(i)] / lead;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<std::complex<double>> roots;
  roots.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) roots.push_back(solver.eigenvalues()(i));
  return roots;
}

namespace {

double polish_root(const UnivariatePoly& p, double x) {
  std::vector<double> dc;
  for (std::size_t k = 1; k < p.coefficients().size(); ++k) {
    dc.push_back(static_cast<double>(k) * p.coefficients()[k]);
  }
  const UnivariatePoly dp(std::move(dc));
  for (int it = 0; it < 4; ++it) {
    const double fx = p(x);
    const double dfx = dp(x);
    if (fx == 0.0 || dfx == 0.0) break;
    const double next = x - fx / dfx;
    if (!std::isfinite(next) || std::abs(p(next)) >= std::abs(fx)) break;
    x = next;
  }
  return x;
}

}  // namespace

std::vector<RealRoot> real_roots(const UnivariatePoly& p, double tol) {
  if (p.is_zero()) throw Error(ErrorCode::ZeroPolynomial, "cannot isolate roots of the zero polynomial");
  std::vector<double> reals;
  for (const auto& z : polynomial_roots(p)) {
    if (std::abs(z.imag()) < 1e-8 * (1.0 + std::abs(z.real()))) {
      reals.push_back(polish_root(p, z.real()));
    }
  }
  std::sort(reals.begin(), reals.end());
  std::vector<RealRoot> out;
  double sum = 0.0;
  for (std::size_t i = 0; i < reals.size(); ++i) {
    if (!out.empty() && reals[i] - reals[i - 1] < tol) {
      RealRoot& last = out.back();
      sum += reals[i];
      ++last.multiplicity;
      last.value = sum / last.multiplicity;
    } else {
      sum = reals[i];
      out.push_back({reals[i], 1});
    }
  }
  return out;
}

bool tangent_at_point(const Conic& c1, const Conic& c2, Point2 q, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParams, "tangency tolerance must be positive");
  const Conic n1 = c1.canonical();
  const Conic n2 = c2.canonical();
  const Point2 g1 = n1.gradient(q);
  const Point2 g2 = n2.gradient(q);
  if (norm(g1) <= tol || norm(g2) <= tol) {
    throw Error(ErrorCode::DegenerateGradient, "a conic gradient vanishes at the query point");
  }
  if (std::abs(n1(q)) > tol || std::abs(n2(q)) > tol) return false;
  const double cross = g1.x1 * g2.x2 - g1.x2 * g2.x1;
  return std::abs(cross) / (norm(g1) * norm(g2)) < tol;
}

Conic minor_conic(const GDSMapping& m, std::size_t i, std::size_t k) {
  const Row2& ai = m.row(i);
  const Row2& ak = m.row(k);
  const Point2& pi = m.center(i);
  const Point2& pk = m.center(k);
  const double s = ai[0] * ak[1];
  const double t = ai[1] * ak[0];
  Conic c;
  c.c11 = s - t;
  c.c10 = -s * pk.x2 + t * pi.x2;
  c.c01 = -s * pi.x1 + t * pk.x1;
  c.c00 = s * pi.x1 * pk.x2 - t * pi.x2 * pk.x1;
  return c;
}

std::vector<MinorConic> minor_conics(const GDSMapping& m) {
  std::vector<MinorConic> out;
  for (std::size_t i = 0; i < m.ell(); ++i) {
    for (std::size_t k = i + 1; k < m.ell(); ++k) out.push_back({i, k, minor_conic(m, i, k)});
  }
  return out;
}

Conic component_conic(const GDSMapping& m, std::size_t i) {
  const Row2& a = m.row(i);
  const Point2& p = m.center(i);
  return {a[0], 0.0, a[1], -2.0 * a[0] * p.x1, -2.0 * a[1] * p.x2,
          a[0] * p.x1 * p.x1 + a[1] * p.x2 * p.x2};
}

}  // namespace umbrella
