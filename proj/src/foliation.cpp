#include "umbrella/foliation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "umbrella/singular_locus.hpp"

namespace umbrella {

bool Box::valid() const {
  return std::isfinite(x0) && std::isfinite(y0) && std::isfinite(x1) && std::isfinite(y1) &&
         x1 > x0 && y1 > y0;
}

bool Box::contains(Point2 q, double margin) const {
  return q.x1 >= x0 - margin && q.x1 <= x1 + margin && q.x2 >= y0 - margin && q.x2 <= y1 + margin;
}

std::vector<FoliationLevel> levels_through_point(const GDSMapping& m, Point2 q, double tol) {
  const std::vector<double> c = evaluate(m, q);
  std::vector<FoliationLevel> out;
  out.reserve(m.ell());
  for (std::size_t i = 0; i < m.ell(); ++i) {
    FoliationLevel lv;
    lv.index = i;
    lv.center = m.center(i);
    lv.level = c[i];
    lv.conic = component_conic(m, i);
    lv.conic.c00 -= c[i];
    lv.kind = classify_conic(lv.conic, tol);
    out.push_back(lv);
  }
  return out;
}

Box default_search_box(const GDSMapping& m) {
  Box box{m.center(0).x1, m.center(0).x2, m.center(0).x1, m.center(0).x2};
  for (const Point2& p : m.centers()) {
    box.x0 = std::min(box.x0, p.x1);
    box.x1 = std::max(box.x1, p.x1);
    box.y0 = std::min(box.y0, p.x2);
    box.y1 = std::max(box.y1, p.x2);
  }
  double side = std::max(box.x1 - box.x0, box.y1 - box.y0);
  if (side == 0.0) side = 1.0;
  const double margin = 3.0 * side;
  return {box.x0 - margin, box.y0 - margin, box.x1 + margin, box.y1 + margin};
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double cross(Point2 a, Point2 b) { return a.x1 * b.x2 - a.x2 * b.x1; }

// Level-curve gradients do not depend on the level, so the level-0 conics
// serve every point.
class Objective {
 public:
  explicit Objective(const GDSMapping& m) {
    for (std::size_t i = 0; i < m.ell(); ++i) conics_.push_back(component_conic(m, i));
    grads_.resize(conics_.size());
  }

  /// Evaluations outside the region return +inf (no residuals), which keeps
  /// descents from escaping to infinity where every gradient pair aligns.
  void restrict_to(const Box& region) { region_ = region; }

  double operator()(Point2 q, std::size_t skip = std::numeric_limits<std::size_t>::max()) {
    if (region_ && !region_->contains(q)) return kInf;
    double gmax = 0.0;
    for (std::size_t i = 0; i < conics_.size(); ++i) {
      grads_[i] = conics_[i].gradient(q);
      gmax = std::max(gmax, norm(grads_[i]));
    }
    double t = 0.0;
    for (std::size_t i = 0; i < conics_.size(); ++i) {
      if (i == skip) continue;
      const double ni = norm(grads_[i]);
      if (ni <= 1e-12 * gmax || ni == 0.0) return kInf;
      for (std::size_t k = i + 1; k < conics_.size(); ++k) {
        if (k == skip) continue;
        const double nk = norm(grads_[k]);
        if (nk <= 1e-12 * gmax || nk == 0.0) return kInf;
        t = std::max(t, std::abs(cross(grads_[i], grads_[k])) / (ni * nk));
      }
    }
    return t;
  }

  /// Signed normalised cross product of every gradient pair; empty where a
  /// gradient vanishes.
  std::vector<double> residuals(Point2 q) {
    std::vector<double> r;
    if (region_ && !region_->contains(q)) return r;
    for (std::size_t i = 0; i < conics_.size(); ++i) grads_[i] = conics_[i].gradient(q);
    for (std::size_t i = 0; i < conics_.size(); ++i) {
      const double ni = norm(grads_[i]);
      for (std::size_t k = i + 1; k < conics_.size(); ++k) {
        const double nk = norm(grads_[k]);
        if (ni == 0.0 || nk == 0.0) return {};
        r.push_back(cross(grads_[i], grads_[k]) / (ni * nk));
      }
    }
    return r;
  }

 private:
  std::vector<Conic> conics_;
  std::vector<Point2> grads_;
  std::optional<Box> region_;
};

struct Minimum {
  Point2 x;
  double value = kInf;
};

Minimum nelder_mead(Objective& f, Point2 start, double size, int max_iter) {
  std::array<Point2, 3> v{start, start + Point2{size, 0.0}, start + Point2{0.0, size}};
  std::array<double, 3> fv{f(v[0]), f(v[1]), f(v[2])};
  for (int it = 0; it < max_iter; ++it) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const Point2 best = v[idx[0]];
    const Point2 mid = v[idx[1]];
    const Point2 worst = v[idx[2]];
    const double spread = std::max(distance(best, mid), distance(best, worst));
    if (spread < 1e-15 * (1.0 + norm(best))) break;

    const Point2 centroid = 0.5 * (best + mid);
    const Point2 reflected = centroid + (centroid - worst);
    const double fr = f(reflected);
    if (fr < fv[idx[0]]) {
      const Point2 expanded = centroid + 2.0 * (centroid - worst);
      const double fe = f(expanded);
      if (fe < fr) {
        v[idx[2]] = expanded;
        fv[idx[2]] = fe;
      } else {
        v[idx[2]] = reflected;
        fv[idx[2]] = fr;
      }
      continue;
    }
    if (fr < fv[idx[1]]) {
      v[idx[2]] = reflected;
      fv[idx[2]] = fr;
      continue;
    }
    const Point2 contracted =
        fr < fv[idx[2]] ? centroid + 0.5 * (reflected - centroid) : centroid + 0.5 * (worst - centroid);
    const double fc = f(contracted);
    if (fc < std::min(fr, fv[idx[2]])) {
      v[idx[2]] = contracted;
      fv[idx[2]] = fc;
      continue;
    }
    for (int k : {idx[1], idx[2]}) {
      v[k] = best + 0.5 * (v[k] - best);
      fv[k] = f(v[k]);
    }
  }
  const auto best = std::min_element(fv.begin(), fv.end()) - fv.begin();
  return {v[static_cast<std::size_t>(best)], fv[static_cast<std::size_t>(best)]};
}

// Levenberg-Marquardt on the pair residuals; the simplex alone stalls in the
// thin valleys where two pairwise tangency curves cross at a shallow angle.
Minimum polish(Objective& f, Minimum start) {
  Point2 x = start.x;
  double lambda = 1e-3;
  auto sumsq = [](const std::vector<double>& r) {
    double s = 0.0;
    for (double v : r) s += v * v;
    return s;
  };
  std::vector<double> r = f.residuals(x);
  if (r.empty()) return start;
  double cost = sumsq(r);
  for (int it = 0; it < 100 && cost > 0.0; ++it) {
    const double h = 1e-7 * (1.0 + norm(x));
    const std::vector<double> rx1 = f.residuals(x + Point2{h, 0.0});
    const std::vector<double> rx0 = f.residuals(x - Point2{h, 0.0});
    const std::vector<double> ry1 = f.residuals(x + Point2{0.0, h});
    const std::vector<double> ry0 = f.residuals(x - Point2{0.0, h});
    if (rx1.empty() || rx0.empty() || ry1.empty() || ry0.empty()) break;
    double a11 = 0.0, a12 = 0.0, a22 = 0.0, g1 = 0.0, g2 = 0.0;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double j1 = (rx1[k] - rx0[k]) / (2.0 * h);
      const double j2 = (ry1[k] - ry0[k]) / (2.0 * h);
      a11 += j1 * j1;
      a12 += j1 * j2;
      a22 += j2 * j2;
      g1 += j1 * r[k];
      g2 += j2 * r[k];
    }
    bool improved = false;
    while (lambda < 1e12) {
      const double d11 = a11 + lambda * (a11 + 1e-30);
      const double d22 = a22 + lambda * (a22 + 1e-30);
      const double det = d11 * d22 - a12 * a12;
      if (det != 0.0 && std::isfinite(det)) {
        const Point2 step{-(d22 * g1 - a12 * g2) / det, -(d11 * g2 - a12 * g1) / det};
        const Point2 trial = x + step;
        const std::vector<double> rt = f.residuals(trial);
        if (!rt.empty() && sumsq(rt) < cost) {
          x = trial;
          r = rt;
          cost = sumsq(rt);
          lambda = std::max(lambda * 0.1, 1e-12);
          improved = true;
          if (norm(step) < 1e-15 * (1.0 + norm(x))) it = 100;
          break;
        }
      }
      lambda *= 10.0;
    }
    if (!improved) break;
  }
  const double value = f(x);
  return value < start.value ? Minimum{x, value} : start;
}

// Restarts shake the simplex loose when it collapses on a kink of the
// piecewise-smooth objective.
Minimum descend(Objective& f, Point2 seed, double size, double tol) {
  // Local Gauss-Newton from the seed first; the simplex can wander towards
  // infinity, where the level-curve gradients become parallel.
  const Minimum direct = polish(f, {seed, f(seed)});
  if (direct.value < tol && distance(direct.x, seed) < 4.0 * size) return direct;
  Minimum best{seed, f(seed)};
  double step = size;
  for (int restart = 0; restart < 6; ++restart) {
    const Minimum m = nelder_mead(f, best.x, step, 400);
    if (m.value <= best.value) best = m;
    step = std::max(step * 0.05, 1e-9 * (1.0 + norm(best.x)));
  }
  return polish(f, best);
}

bool lexicographic(const Point2& a, const Point2& b) {
  return a.x1 != b.x1 ? a.x1 < b.x1 : a.x2 < b.x2;
}

void add_unique(std::vector<Point2>& pts, Point2 q) {
  for (const Point2& p : pts) {
    if (distance(p, q) < 1e-6 * (1.0 + norm(q))) return;
  }
  pts.push_back(q);
}

}  // namespace

double tangency_objective(const GDSMapping& m, Point2 q) {
  Objective f(m);
  return f(q);
}

TangencyReport tangency_search(const GDSMapping& m, const Box& box, int grid_n, double tol) {
  if (grid_n < 16) throw Error(ErrorCode::InvalidParams, "tangency grid needs at least 16 points per side");
  if (!box.valid()) throw Error(ErrorCode::InvalidParams, "search box is degenerate");
  if (!(tol > 0.0)) throw Error(ErrorCode::InvalidParams, "tangency tolerance must be positive");

  Objective f(m);
  const auto n = static_cast<std::size_t>(grid_n);
  const double hx = (box.x1 - box.x0) / static_cast<double>(n - 1);
  const double hy = (box.y1 - box.y0) / static_cast<double>(n - 1);
  auto at = [&](std::size_t i, std::size_t j) {
    return Point2{box.x0 + hx * static_cast<double>(i), box.y0 + hy * static_cast<double>(j)};
  };
  std::vector<double> values(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) values[i * n + j] = f(at(i, j));
  }

  std::vector<Minimum> seeds;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = values[i * n + j];
      if (!std::isfinite(v)) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        for (int dj = -1; dj <= 1 && is_min; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto ii = static_cast<std::ptrdiff_t>(i) + di;
          const auto jj = static_cast<std::ptrdiff_t>(j) + dj;
          if (ii < 0 || jj < 0 || ii >= grid_n || jj >= grid_n) continue;
          if (values[static_cast<std::size_t>(ii) * n + static_cast<std::size_t>(jj)] < v) is_min = false;
        }
      }
      if (is_min) seeds.push_back({at(i, j), v});
    }
  }
  std::sort(seeds.begin(), seeds.end(), [](const Minimum& a, const Minimum& b) {
    return a.value != b.value ? a.value < b.value : lexicographic(a.x, b.x);
  });
  constexpr std::size_t kMaxSeeds = 64;
  if (seeds.size() > kMaxSeeds) seeds.resize(kMaxSeeds);

  // Cells where every residual against the first level curve changes sign
  // hold a crossing of the pairwise tangency curves. Sampled minima of T miss
  // these when the valley is thinner than a cell.
  const std::size_t pairs = m.ell() - 1;
  std::vector<double> signed_res(n * n * pairs, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const std::vector<double> r = f.residuals(at(i, j));
      if (r.empty()) continue;
      for (std::size_t k = 0; k < pairs; ++k) signed_res[(i * n + j) * pairs + k] = r[k];
    }
  }
  std::vector<Minimum> crossings;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      bool all_change = true;
      for (std::size_t k = 0; k < pairs && all_change; ++k) {
        double lo = kInf, hi = -kInf;
        for (std::size_t c : {i * n + j, (i + 1) * n + j, i * n + j + 1, (i + 1) * n + j + 1}) {
          const double v = signed_res[c * pairs + k];
          if (!std::isfinite(v)) {
            lo = 1.0;
            hi = -1.0;
            break;
          }
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
        all_change = lo <= 0.0 && hi >= 0.0;
      }
      if (!all_change) continue;
      const Point2 mid = at(i, j) + Point2{0.5 * hx, 0.5 * hy};
      crossings.push_back({mid, f(mid)});
    }
  }
  constexpr std::size_t kMaxCrossings = 4096;
  if (crossings.size() > kMaxCrossings) {
    std::sort(crossings.begin(), crossings.end(), [](const Minimum& a, const Minimum& b) {
      return a.value != b.value ? a.value < b.value : lexicographic(a.x, b.x);
    });
    crossings.resize(kMaxCrossings);
  }

  TangencyReport report;
  std::vector<Minimum> found;
  const double margin = 2.0 * std::max(hx, hy);
  f.restrict_to({box.x0 - 2.0 * margin, box.y0 - 2.0 * margin, box.x1 + 2.0 * margin, box.y1 + 2.0 * margin});
  std::vector<Minimum> results;
  for (const Minimum& seed : seeds) results.push_back(descend(f, seed.x, std::max(hx, hy), tol));
  for (const Minimum& seed : crossings) results.push_back(polish(f, seed));
  f.restrict_to(box);
  for (const Minimum& r : results) {
    if (!(r.value < tol) || !box.contains(r.x, margin)) continue;
    if (near_center(m, r.x)) {
      add_unique(report.excluded_points, r.x);
      continue;
    }
    const bool duplicate = std::any_of(found.begin(), found.end(), [&](const Minimum& g) {
      return distance(g.x, r.x) < 1e-6 * (1.0 + norm(r.x));
    });
    if (!duplicate) found.push_back(r);
  }

  // A centre whose remaining level curves are mutually tangent is a limiting
  // tangency through a point-level curve.
  if (m.ell() >= 3) {
    for (std::size_t i = 0; i < m.ell(); ++i) {
      const Point2 p = m.center(i);
      if (!box.contains(p)) continue;
      if (f(p, i) < tol) add_unique(report.excluded_points, p);
    }
  }

  std::sort(found.begin(), found.end(), [](const Minimum& a, const Minimum& b) { return lexicographic(a.x, b.x); });
  for (const Minimum& g : found) {
    report.points.push_back(g.x);
    report.objective.push_back(g.value);
  }
  std::sort(report.excluded_points.begin(), report.excluded_points.end(), lexicographic);
  report.excluded_regions = static_cast<int>(report.excluded_points.size());
  return report;
}

Box scaled_box(const Box& box, double factor) {
  const double cx = 0.5 * (box.x0 + box.x1);
  const double cy = 0.5 * (box.y0 + box.y1);
  const double hx = 0.5 * (box.x1 - box.x0) * factor;
  const double hy = 0.5 * (box.y1 - box.y0) * factor;
  return {cx - hx, cy - hy, cx + hx, cy + hy};
}

TangencyReport tangency_search_nested(const GDSMapping& m, const Box& box, std::span<const double> scales,
                                      int grid_n, double tol) {
  if (scales.empty()) throw Error(ErrorCode::InvalidParams, "nested search needs at least one scale");
  for (std::size_t s = 0; s < scales.size(); ++s) {
    if (!(scales[s] >= 1.0) || (s > 0 && !(scales[s] > scales[s - 1]))) {
      throw Error(ErrorCode::InvalidParams, "nested search scales must be increasing and at least 1");
    }
  }
  TangencyReport merged;
  std::vector<std::pair<Point2, double>> found;
  std::optional<Box> inner;
  for (const double factor : scales) {
    const Box b = scaled_box(box, factor);
    const TangencyReport r = tangency_search(m, b, grid_n, tol);
    for (std::size_t k = 0; k < r.points.size(); ++k) {
      // Points inside the previous box belong to its finer scan.
      if (inner && inner->contains(r.points[k])) continue;
      found.emplace_back(r.points[k], r.objective[k]);
    }
    for (Point2 q : r.excluded_points) add_unique(merged.excluded_points, q);
    inner = b;
  }
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return lexicographic(a.first, b.first); });
  for (const auto& [q, v] : found) {
    merged.points.push_back(q);
    merged.objective.push_back(v);
  }
  std::sort(merged.excluded_points.begin(), merged.excluded_points.end(), lexicographic);
  merged.excluded_regions = static_cast<int>(merged.excluded_points.size());
  return merged;
}

bool DegeneracyReport::central_point_clean() const {
  return coincident_centers.empty() &&
         std::none_of(sigma_flags.begin(), sigma_flags.end(), [](bool b) { return b; });
}

DegeneracyReport detect_degeneracy(const GDSMapping& m, double tol) {
  DegeneracyReport rep;
  rep.sigma_flags.resize(m.ell());
  for (std::size_t i = 0; i < m.ell(); ++i) {
    rep.sigma_flags[i] = rank_at(m, m.center(i), tol).rank <= 1;
    for (std::size_t k = i + 1; k < m.ell(); ++k) {
      const Point2 pi = m.center(i);
      if (distance(pi, m.center(k)) < kDegeneracyDistance * (1.0 + norm(pi))) {
        rep.coincident_centers.emplace_back(i, k);
      }
    }
  }
  rep.rank_deficient_A = m.rank() < 2;
  return rep;
}

}  // namespace umbrella
