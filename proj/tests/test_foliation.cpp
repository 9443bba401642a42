#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support.hpp"
#include "umbrella/foliation.hpp"
#include "umbrella/singular_locus.hpp"

using namespace umbrella;
using namespace umbrella::testing;

TEST_CASE("levels through the worked singular point: one ellipse, two circles") {
  const auto levels = levels_through_point(worked_example(), {2, -1});
  REQUIRE(levels.size() == 3);
  CHECK(levels[0].level == 6.0);
  CHECK(levels[1].level == 2.0);
  CHECK(levels[2].level == 8.0);
  CHECK(levels[0].kind == ConicKind::ellipse);
  CHECK(levels[1].kind == ConicKind::circle);
  CHECK(levels[2].kind == ConicKind::circle);
  // Level curves of the first two components are tangent there.
  CHECK(tangent_at_point(levels[0].conic, levels[1].conic, {2, -1}));
}

TEST_CASE("level through a centre is a point; Lorentzian levels are hyperbolic") {
  const GDSMapping f = worked_example();
  const auto at_center = levels_through_point(f, f.center(0));
  CHECK(at_center[0].level == 0.0);
  CHECK(at_center[0].kind == ConicKind::single_point);

  const GDSMapping l = make_special(MapForm::lorentzian, {{0, 0}, {1, 2}, {-1, 0.5}});
  for (const FoliationLevel& lv : levels_through_point(l, {0.3, -0.7})) {
    CHECK((lv.kind == ConicKind::hyperbola || lv.kind == ConicKind::rectangular_hyperbola ||
           lv.kind == ConicKind::intersecting_lines));
  }
  // Through a point on a light-cone line the level is a pair of lines.
  const auto cone = levels_through_point(l, {1, 1});
  CHECK(cone[0].kind == ConicKind::intersecting_lines);
}

TEST_CASE("property: level conics vanish at the point they pass through") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(-4, 4);
  for (int t = 0; t < 200; ++t) {
    const GDSMapping m = random_general(rng, 3 + t % 3);
    const Point2 q{u(rng), u(rng)};
    for (const FoliationLevel& lv : levels_through_point(m, q)) CHECK(std::abs(lv.conic.canonical()(q)) < 1e-12);
  }
}

TEST_CASE("tangency_search on the worked examples") {
  const TangencyReport r = tangency_search(worked_example(), {-5, -5, 5, 5}, 200);
  REQUIRE(r.points.size() == 1);
  CHECK(distance(r.points[0], {2, -1}) < 1e-6);
  CHECK(r.objective[0] < 1e-7);
  CHECK(r.excluded_regions == 0);

  CHECK(tangency_search(worked_example_l4(), {-5, -5, 5, 5}, 200).points.empty());
}

TEST_CASE("tangency_search excludes the point-level centre of a degenerate mapping") {
  const TangencyReport r = tangency_search(collinear_example(), {-5, -5, 5, 5}, 200);
  for (const Point2& q : r.points) CHECK(distance(q, {0, 0}) > 1e-6);
  CHECK(r.excluded_regions >= 1);
  CHECK(std::any_of(r.excluded_points.begin(), r.excluded_points.end(),
                    [](Point2 q) { return distance(q, {0, 0}) < 1e-9; }));
}

TEST_CASE("tangency_search argument checks") {
  CHECK_THROWS_AS(tangency_search(worked_example(), {-5, -5, 5, 5}, 8), Error);
  CHECK_THROWS_AS(tangency_search(worked_example(), {5, -5, -5, 5}, 100), Error);
}

TEST_CASE("default search box encloses the worked singular point") {
  const Box b = default_search_box(worked_example());
  CHECK(b.contains({2, -1}));
  CHECK(b.contains({0, 0}));
}

TEST_CASE("detect_degeneracy") {
  const DegeneracyReport c = detect_degeneracy(collinear_example());
  CHECK(c.sigma_flags[0]);
  CHECK_FALSE(c.central_point_clean());

  const DegeneracyReport g = detect_degeneracy(worked_example());
  CHECK(std::none_of(g.sigma_flags.begin(), g.sigma_flags.end(), [](bool b) { return b; }));
  CHECK(g.coincident_centers.empty());
  CHECK_FALSE(g.rank_deficient_A);
  CHECK(g.central_point_clean());

  const GDSMapping dup =
      make_special(MapForm::ellipse_circle, {{0.5, 0.5}, {0.5, 0.5}, {2, 1}}, EllipseCircleParams{1, 2});
  const DegeneracyReport d = detect_degeneracy(dup);
  REQUIRE(d.coincident_centers.size() == 1);
  CHECK(d.coincident_centers[0] == std::pair<std::size_t, std::size_t>{0, 1});

  CHECK(detect_degeneracy(make_special(MapForm::distance_squared, {{0, 0}, {1, 0}, {0, 1}})).rank_deficient_A);
}

TEST_CASE("property: sigma flags imply rank deficiency at the centre") {
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 100; ++t) {
    // Every other instance places p_3 on the line through p_1 and p_2.
    auto centers = random_centers(rng, 3);
    if (t % 2 == 0) centers[2] = centers[0] + u(rng) * (centers[1] - centers[0]);
    const GDSMapping m = make_special(MapForm::ellipse_circle, centers, EllipseCircleParams{1, 2});
    const DegeneracyReport r = detect_degeneracy(m);
    for (std::size_t i = 0; i < 3; ++i) {
      if (r.sigma_flags[i]) CHECK(rank_at(m, m.center(i)).rank <= 1);
    }
    if (t % 2 == 0) CHECK(r.sigma_flags[0]);
  }
}

TEST_CASE("property: tangency points are unique and stable under box doubling") {
  std::mt19937_64 rng(53);
  int clean = 0;
  for (int t = 0; t < 15; ++t) {
    const GDSMapping m = random_ellipse_circle(rng, 3);
    if (!detect_degeneracy(m).central_point_clean()) continue;
    const auto pts = solve_singular_points(m).points;
    Box box = default_search_box(m);
    if (pts.size() != 1 || !box.contains(pts[0].location)) continue;
    const TangencyReport a = tangency_search(m, box);
    const double cx = 0.5 * (box.x0 + box.x1), cy = 0.5 * (box.y0 + box.y1);
    const Box wide{2 * box.x0 - cx, 2 * box.y0 - cy, 2 * box.x1 - cx, 2 * box.y1 - cy};
    const TangencyReport b = tangency_search(m, wide, 400);
    CHECK(a.points.size() == 1);
    CHECK(b.points.size() == 1);
    ++clean;
  }
  CHECK(clean > 10);
}

TEST_CASE("scaled_box keeps the centre") {
  const Box b = scaled_box({-1, 0, 3, 2}, 10.0);
  CHECK(b.x0 == doctest::Approx(-19.0));
  CHECK(b.x1 == doctest::Approx(21.0));
  CHECK(b.y0 == doctest::Approx(-9.0));
  CHECK(b.y1 == doctest::Approx(11.0));
}

TEST_CASE("nested tangency search reaches a singular point far outside the default box") {
  // Nearly collinear centres: the singular point lies far from them.
  const GDSMapping m = make_special(MapForm::ellipse_circle,
                                     {{-0.234938, 0.570506}, {1.63638, -1.79502}, {0.251908, -1.78981}},
                                     EllipseCircleParams{1, 2});
  const auto pts = solve_singular_points(m).points;
  REQUIRE(pts.size() == 1);
  const Box box = default_search_box(m);
  REQUIRE_FALSE(box.contains(pts[0].location));
  CHECK(tangency_search(m, box).points.empty());
  const TangencyReport nested = tangency_search_nested(m, box);
  REQUIRE(nested.points.size() == 1);
  CHECK(distance(nested.points[0], pts[0].location) < 1e-5 * (1.0 + norm(pts[0].location)));
}

TEST_CASE("nested search argument checks") {
  const GDSMapping f = worked_example();
  const Box box{-5, -5, 5, 5};
  const double none[] = {1.0};
  const double decreasing[] = {10.0, 1.0};
  const double shrinking[] = {0.5, 2.0};
  CHECK(tangency_search_nested(f, box, none).points.size() == 1);
  CHECK_THROWS_AS(tangency_search_nested(f, box, std::span<const double>{}), Error);
  CHECK_THROWS_AS(tangency_search_nested(f, box, decreasing), Error);
  CHECK_THROWS_AS(tangency_search_nested(f, box, shrinking), Error);
}
