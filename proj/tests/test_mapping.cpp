#include <doctest.h>

#include <cmath>
#include <random>

#include "support.hpp"
#include "umbrella/conic.hpp"
#include "umbrella/mapping.hpp"

using namespace umbrella;
using umbrella::testing::worked_example;

TEST_CASE("make_mapping validates entries and dimensions") {
  const GDSMapping m = make_mapping({{1, 2}, {1, 1}, {1, 1}}, {{0, 0}, {1, 0}, {0, 1}});
  CHECK(m.ell() == 3);
  CHECK(m.rank() == 2);

  CHECK(make_mapping({{1, 1}, {2, 2}, {3, 3}}, {{0.3, 0.1}, {1.7, -0.4}, {0.2, 0.9}}).rank() == 1);

  try {
    make_mapping({{0, 1}, {1, 1}}, {{0, 0}, {1, 0}});
    FAIL("expected ZeroEntry");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ZeroEntry);
  }
  try {
    make_mapping({{1, 1}, {1, 1}, {1, 1}}, {{0, 0}, {1, 0}});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  CHECK_THROWS_AS(make_mapping({{1, 1}}, {{0, 0}}), Error);
  CHECK_THROWS_AS(make_mapping({{1, NAN}, {1, 1}}, {{0, 0}, {1, 0}}), Error);
}

TEST_CASE("make_special builds the prescribed coefficient matrices") {
  const GDSMapping f = worked_example();
  CHECK(f.row(0) == Row2{1, 2});
  CHECK(f.row(1) == Row2{1, 1});
  CHECK(f.row(2) == Row2{1, 1});
  CHECK(f.rank() == 2);
  REQUIRE(f.ellipse_circle_params());
  CHECK(f.ellipse_circle_params()->a == 1.0);

  const GDSMapping d = make_special(MapForm::distance_squared, {{0, 0}, {1, 0}, {0, 1}});
  for (std::size_t i = 0; i < 3; ++i) CHECK(d.row(i) == Row2{1, 1});
  CHECK(d.rank() == 1);

  const GDSMapping l = make_special(MapForm::lorentzian, {{0, 0}, {1, 0}});
  CHECK(l.row(1) == Row2{-1, 1});

  for (auto [a, b] : {std::pair{2.0, 1.0}, std::pair{1.0, 1.0}, std::pair{0.0, 1.0}, std::pair{-1.0, 2.0}}) {
    try {
      make_special(MapForm::ellipse_circle, {{0, 0}, {1, 0}, {0, 1}}, EllipseCircleParams{a, b});
      FAIL("expected InvalidParams");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidParams);
    }
  }
}

TEST_CASE("evaluate follows the component formula") {
  const auto v = evaluate(worked_example(), {2, -1});
  CHECK(v == std::vector<double>{6, 2, 8});

  const GDSMapping d = make_special(MapForm::distance_squared, {{0, 0}, {5, 5}, {-1, 2}});
  CHECK(evaluate(d, {3, 4})[0] == 25.0);
  CHECK_THROWS_AS(evaluate(d, {INFINITY, 0}), Error);
}

TEST_CASE("jacobian rows at the worked points") {
  const GDSMapping f = worked_example();
  const JacobianMatrix j = jacobian(f, {2, -1});
  CHECK(j.rows[0] == Row2{4, -4});
  CHECK(j.rows[1] == Row2{2, -2});
  CHECK(j.rows[2] == Row2{4, -4});

  const JacobianMatrix j0 = jacobian(f, {0, 0});
  CHECK(j0.rows[0] == Row2{0, 0});
  CHECK(j0.rows[1] == Row2{-2, 0});
  CHECK(j0.rows[2] == Row2{0, -2});
}

TEST_CASE("rank_at reports rank and kernel") {
  const GDSMapping f = worked_example();
  const RankInfo r = rank_at(f, {2, -1});
  CHECK(r.rank == 1);
  REQUIRE(r.kernel);
  CHECK(r.kernel->x1 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
  CHECK(r.kernel->x2 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

  const RankInfo r0 = rank_at(f, {0, 0});
  CHECK(r0.rank == 2);
  CHECK_FALSE(r0.kernel);

  const GDSMapping d = make_special(MapForm::distance_squared, {{0, 0}, {1, 0}, {0, 1}});
  CHECK(rank_at(d, {0.37, -1.2}).rank == 2);

  const std::vector<Row2> zero{{0, 0}, {0, 0}};
  CHECK(numerical_rank(zero).rank == 0);
  CHECK_THROWS_AS(rank_at(f, {0, 0}, 0.0), Error);
}

TEST_CASE("property: component i vanishes at its centre") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const GDSMapping m = umbrella::testing::random_general(rng, 2 + t % 5);
    for (std::size_t i = 0; i < m.ell(); ++i) CHECK(evaluate(m, m.center(i))[i] == 0.0);
  }
}

TEST_CASE("property: jacobian matches central finite differences") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  const double h = 1e-5;
  for (int t = 0; t < 200; ++t) {
    const GDSMapping m = umbrella::testing::random_general(rng, 3 + t % 3);
    const Point2 x{u(rng), u(rng)};
    const JacobianMatrix j = jacobian(m, x);
    const auto fp1 = evaluate(m, {x.x1 + h, x.x2});
    const auto fm1 = evaluate(m, {x.x1 - h, x.x2});
    const auto fp2 = evaluate(m, {x.x1, x.x2 + h});
    const auto fm2 = evaluate(m, {x.x1, x.x2 - h});
    for (std::size_t i = 0; i < m.ell(); ++i) {
      const double d1 = (fp1[i] - fm1[i]) / (2 * h);
      const double d2 = (fp2[i] - fm2[i]) / (2 * h);
      const double scale = std::max({std::abs(j.rows[i][0]), std::abs(j.rows[i][1]), 1.0});
      CHECK(std::abs(d1 - j.rows[i][0]) / scale < 1e-6);
      CHECK(std::abs(d2 - j.rows[i][1]) / scale < 1e-6);
    }
  }
}

TEST_CASE("property: rank < 2 iff all minors vanish") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 300; ++t) {
    const GDSMapping m = umbrella::testing::random_general(rng, 3);
    // Half the points are centres, where row i vanishes and rank drops only
    // if the remaining rows are parallel.
    const Point2 x = t % 2 ? Point2{u(rng), u(rng)} : m.center(static_cast<std::size_t>(t % 3));
    const RankInfo r = rank_at(m, x, 1e-9);
    const JacobianMatrix j = jacobian(m, x);
    double row_scale = 0.0;
    for (const Row2& row : j.rows) row_scale = std::max(row_scale, std::hypot(row[0], row[1]));
    bool all_vanish = true;
    for (const MinorConic& mc : minor_conics(m)) {
      if (std::abs(4.0 * mc.conic(x)) > 1e-9 * row_scale * row_scale) all_vanish = false;
    }
    CHECK((r.rank < 2) == all_vanish);
  }
  // And at genuine singular points of the worked example.
  CHECK(rank_at(worked_example(), {2, -1}).rank < 2);
}

TEST_CASE("property: row scaling leaves the rank-deficient set unchanged") {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> lam(0.3, 4.0);
  for (int t = 0; t < 50; ++t) {
    const GDSMapping m = umbrella::testing::random_general(rng, 3);
    std::vector<Row2> rows;
    std::vector<double> lambdas;
    for (std::size_t i = 0; i < 3; ++i) {
      const double l = (t + i) % 2 ? lam(rng) : -lam(rng);
      lambdas.push_back(l);
      rows.push_back({l * m.row(i)[0], l * m.row(i)[1]});
    }
    const GDSMapping scaled = make_mapping(rows, {m.centers().begin(), m.centers().end()});
    const auto a = minor_conics(m);
    const auto b = minor_conics(scaled);
    for (std::size_t k = 0; k < a.size(); ++k) {
      const double f = lambdas[a[k].i] * lambdas[a[k].k];
      const auto ca = a[k].conic.coefficients();
      const auto cb = b[k].conic.coefficients();
      for (std::size_t c = 0; c < 6; ++c) CHECK(cb[c] == doctest::Approx(f * ca[c]).epsilon(1e-12));
    }
  }
}
