#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "pmlab/barenblatt.hpp"
#include "pmlab/regularity.hpp"

using namespace pmlab;

namespace {

Trajectory constant_traj(double value, int cells = 64) {
  Grid g = Grid::make_1d(0.0, 1.0, cells);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.7 + 0.015 * k);
  return Trajectory::from_function(
      g, times, [value](const Point&, double) { return value; });
}

Trajectory ramp_traj(int cells = 200) {
  Grid g = Grid::make_1d(0.0, 1.0, cells);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.7 + 0.015 * k);
  return Trajectory::from_function(
      g, times, [](const Point& p, double) { return p[0]; });
}

DeGiorgiConstants test_constants(double nu0) {
  DeGiorgiConstants k;
  k.nu0 = nu0;
  k.n0 = 3;
  k.eta0 = 0.875;
  k.m = 2.0;
  k.m0 = 0.0;
  k.a = 0.5 * std::sqrt(0.5 * nu0) * std::pow(k.eta0, k.m);
  k.alpha = std::log(k.eta0) / std::log(k.a);
  k.R_max = 0.5;
  return k;
}

}  // namespace

TEST_CASE("oscillation of a constant field is zero") {
  Trajectory traj = constant_traj(0.3);
  auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.0, 0.2, 0.6, 2.0);
  auto rep = oscillation(traj, cyl);
  CHECK(rep.mu_minus == 0.3);
  CHECK(rep.mu_plus == 0.3);
  CHECK(rep.essosc == 0.0);
  CHECK(rep.sample_count > 0);
}

TEST_CASE("oscillation of the ramp matches the covered interval") {
  Trajectory traj = ramp_traj();
  const double h = traj.grid().h(0);
  auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.0, 0.25, 1.0, 2.0);
  auto rep = oscillation(traj, cyl);
  CHECK(std::abs(rep.essosc - 0.5) <= 2.0 * h);
}

TEST_CASE("oscillation across a Barenblatt free boundary sees mu_- = 0") {
  Grid g = Grid::make_1d(-3.0, 3.0, 512);
  std::vector<double> times;
  for (int k = 0; k <= 30; ++k) times.push_back(1.0 + 0.01 * k);
  Trajectory traj = Trajectory::from_function(
      g, times,
      [](const Point& p, double t) {
        return barenblatt_exact(2.0, 1.0, p, t, 1);
      });
  const double rb = barenblatt_support_radius(2.0, 1.0, 1.3, 1);
  auto cyl = Cylinder::intrinsic({rb, 0.0}, 1.3, 0.3, 0.8, 2.0);
  auto rep = oscillation(traj, cyl);
  CHECK(rep.mu_minus == 0.0);
  CHECK(rep.mu_plus > 0.0);
}

TEST_CASE("empty cylinder throws") {
  Trajectory traj = constant_traj(0.3);
  auto cyl = Cylinder::intrinsic({0.5, 0.0}, 0.1, 0.2, 0.6, 2.0);  // before t0
  CHECK_THROWS_AS(oscillation(traj, cyl), EmptyCylinder);
}

TEST_CASE("level_set_fraction basics and complementarity") {
  Trajectory c = constant_traj(0.3);
  auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.0, 0.2, 0.6, 2.0);
  CHECK(level_set_fraction(c, cyl, 0.5, LevelSense::Below) == 1.0);

  Trajectory r = ramp_traj();
  auto full = Cylinder::intrinsic({0.5, 0.0}, 1.0, 0.499, 1.0, 2.0);
  const double h = r.grid().h(0);
  CHECK(std::abs(level_set_fraction(r, full, 0.5, LevelSense::Below) - 0.5) <=
        2.0 * h);

  for (double k : {0.1, 0.33, 0.5, 0.77}) {
    const double below = level_set_fraction(r, full, k, LevelSense::Below);
    const double above = level_set_fraction(r, full, k, LevelSense::AtOrAbove);
    CHECK(below + above == 1.0);  // exact partition
  }
}

TEST_CASE("oscillation is monotone under cylinder inclusion") {
  Trajectory traj = ramp_traj();
  double prev = 0.0;
  for (double r : {0.05, 0.1, 0.2, 0.3, 0.45}) {
    auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.0, r, 1.0, 2.0);
    const double osc = oscillation(traj, cyl).essosc;
    CHECK(osc >= prev);
    prev = osc;
  }
}

TEST_CASE("check_cylinder_conditions margins") {
  SUBCASE("oscillation_large slack for omega=0.5, R=0.04, m=2") {
    Trajectory traj = constant_traj(0.1);
    auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.0, 0.04, 0.5, 2.0);
    auto rep = check_cylinder_conditions(traj, cyl, 0.1);
    CHECK(rep.oscillation_large.pass);
    CHECK(rep.oscillation_large.margin ==
          doctest::Approx(0.5 - 0.2).epsilon(1e-12));
    // constant 0.1 with omega = 0.5: oscillation 0 <= 0.5, inf 0.1 <= 0.125
    CHECK(rep.oscillation_bound.pass);
    CHECK(rep.oscillation_bound.margin == doctest::Approx(0.5));
    CHECK(rep.inf_small.pass);
    CHECK(rep.inf_small.margin == doctest::Approx(0.125 - 0.1));
  }

  SUBCASE("doubled cylinder exiting the domain fails containment") {
    Trajectory traj = constant_traj(0.1);
    auto cyl = Cylinder::intrinsic({0.05, 0.0}, 1.0, 0.1, 0.5, 2.0);
    auto rep = check_cylinder_conditions(traj, cyl, 0.1);
    CHECK_FALSE(rep.containment.pass);
    CHECK(rep.containment.margin < 0.0);
  }
}

TEST_CASE("mu_+ <= (5/4) omega whenever the oscillation/inf conditions hold") {
  Trajectory traj = ramp_traj();
  for (double r : {0.05, 0.1, 0.15}) {
    for (double om : {0.6, 0.8, 1.0}) {
      auto cyl = Cylinder::intrinsic({0.2, 0.0}, 1.0, r, om, 2.0);
      auto rep = check_cylinder_conditions(traj, cyl, 0.1);
      if (rep.oscillation_bound.pass && rep.inf_small.pass)
        CHECK(rep.osc.mu_plus <= 1.25 * om + 1e-12);
    }
  }
}

TEST_CASE("compute_degiorgi_constants reproduces the constant chain") {
  StructuralConstants sc;
  sc.m = 2.0;
  auto rt = ReactionTerm::zero();
  auto k = compute_degiorgi_constants(sc, rt, 1, 1.0, 3, 5, 0.25, 0.9);

  CHECK(k.nu0 == doctest::Approx(std::pow(2.0, -9)).epsilon(1e-15));
  CHECK(k.nu0 == doctest::Approx(0.001953125).epsilon(1e-15));
  CHECK(k.eta0 == doctest::Approx(7.0 / 8.0).epsilon(1e-15));
  CHECK(k.a == doctest::Approx(49.0 / 4096.0).epsilon(1e-14));
  const double alpha_indep = std::log(7.0 / 8.0) / std::log(49.0 / 4096.0);
  CHECK(k.alpha == doctest::Approx(alpha_indep).epsilon(1e-14));
  CHECK(k.alpha > 0.0);
  CHECK(k.alpha < 1.0);
}

TEST_CASE("constant chain rejects invalid inputs") {
  StructuralConstants sc;
  sc.m = 2.0;
  auto rt = ReactionTerm::zero();
  CHECK_THROWS_AS(compute_degiorgi_constants(sc, rt, 1, -1.0, 3, 5, 0.25, 0.9),
                  DomainError);
  CHECK_THROWS_AS(compute_degiorgi_constants(sc, rt, 1, 1.0, 1, 5, 0.25, 0.9),
                  DomainError);
  // nu0 outside (0,1): tiny C_struct explodes the constant.
  CHECK_THROWS_AS(compute_degiorgi_constants(sc, rt, 1, 1e-4, 3, 5, 0.25, 0.9),
                  DomainError);
  // theta above 4^{1-m} violates the classical-cylinder requirement.
  CHECK_THROWS_AS(compute_degiorgi_constants(sc, rt, 1, 1.0, 3, 5, 0.5, 0.9),
                  DomainError);
}

TEST_CASE("iterative scheme follows the stated geometric recursion") {
  auto dgc = test_constants(std::pow(2.0, -9));
  CHECK(dgc.a == doctest::Approx(49.0 / 4096.0).epsilon(1e-15));
  auto steps = generate_iterative_scheme(0.01, 0.5, dgc, 3);
  REQUIRE(steps.size() == 4);
  CHECK(steps[0].R == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(steps[1].R == doctest::Approx(1.1962890625e-4).epsilon(1e-12));
  CHECK(steps[2].R == doctest::Approx(1.431107521057129e-6).epsilon(1e-12));
  CHECK(steps[3].R == doctest::Approx(1.7120182747021318e-8).epsilon(1e-12));
  CHECK(steps[0].omega == doctest::Approx(0.5));
  CHECK(steps[1].omega == doctest::Approx(0.4375));
  CHECK(steps[2].omega == doctest::Approx(0.3828125));
  CHECK(steps[3].omega == doctest::Approx(0.3349609375));
  for (const auto& s : steps) CHECK(s.cond11_slack > 0.0);
}

TEST_CASE("n_max = 0 yields the singleton schedule") {
  auto dgc = test_constants(std::pow(2.0, -9));
  auto steps = generate_iterative_scheme(0.01, 0.5, dgc, 0);
  REQUIRE(steps.size() == 1);
  CHECK(steps[0].R == 0.01);
  CHECK(steps[0].omega == 0.5);
}

TEST_CASE("scheme preconditions") {
  auto dgc = test_constants(std::pow(2.0, -9));
  CHECK_THROWS_AS(generate_iterative_scheme(0.6, 1.0, dgc, 2),
                  PreconditionError);  // R0 > R_max
  CHECK_THROWS_AS(generate_iterative_scheme(0.25, 0.3, dgc, 2),
                  PreconditionError);  // omega0 < R0^{1/m} = 0.5
}

TEST_CASE("scheme consistency: (R_n/R_0)^alpha = eta0^n to 1e-12") {
  auto dgc = test_constants(std::pow(2.0, -9));
  auto steps = generate_iterative_scheme(0.01, 0.5, dgc, 6);
  for (const auto& s : steps) {
    const double lhs = std::pow(s.R / steps[0].R, dgc.alpha);
    const double rhs = std::pow(dgc.eta0, s.n);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, rhs));
  }
}

TEST_CASE("scheme cylinders nest through the nu0-shortened half cylinder") {
  auto dgc = test_constants(std::pow(2.0, -9));
  auto steps = generate_iterative_scheme(0.01, 0.5, dgc, 5);
  for (size_t i = 0; i + 1 < steps.size(); ++i) {
    const auto& cur = steps[i];
    const auto& nxt = steps[i + 1];
    CHECK(nxt.R <= 0.5 * cur.R);
    const double depth_next = nxt.depth;
    const double depth_shortened = 0.5 * dgc.nu0 *
                                   std::pow(cur.omega, 1.0 - dgc.m) *
                                   (0.5 * cur.R) * (0.5 * cur.R);
    const double depth_cur = cur.depth;
    CHECK(depth_next <= depth_shortened * (1.0 + 1e-12));
    CHECK(depth_shortened <= depth_cur * (1.0 + 1e-12));
  }
}

TEST_CASE("scheme switch index changes to the classical recursion") {
  auto dgc = test_constants(std::pow(2.0, -9));
  auto steps = generate_iterative_scheme(0.01, 0.5, dgc, 4, 2);
  CHECK(steps[1].R == doctest::Approx(dgc.a * 0.01));
  CHECK(steps[2].R == doctest::Approx(dgc.a * dgc.a * 0.01));
  CHECK(steps[3].R == doctest::Approx(0.25 * steps[2].R));  // after switch
  CHECK(steps[3].omega == doctest::Approx(dgc.eta * steps[2].omega));
  CHECK(steps[4].R == doctest::Approx(0.25 * steps[3].R));
}

TEST_CASE("dichotomy branch I: mostly-high field with a far dip") {
  Grid g = Grid::make_1d(0.0, 1.0, 128);
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(0.7 + 0.0075 * k);
  const double omega = 0.6;
  // Level 0.9*omega everywhere except a sliver near x = 0.65 (inside the full
  // cylinder, outside the half cylinder) pinning mu_- = 0.
  Trajectory traj = Trajectory::from_function(
      g, times, [omega](const Point& p, double) {
        return (std::abs(p[0] - 0.65) < 0.004) ? 0.0 : 0.9 * omega;
      });
  auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.0, 0.2, omega, 2.0);
  auto dgc = test_constants(0.05);
  auto rep = degiorgi_dichotomy_check(traj, cyl, dgc, 0.1);
  CHECK(rep.branch == DichotomyReport::Branch::I);
  CHECK(rep.hypothesis_fraction < dgc.nu0);
  CHECK(rep.violating_fraction == 0.0);
  CHECK(rep.conclusion_holds);
}

TEST_CASE("dichotomy branch II: low constant field") {
  Grid g = Grid::make_1d(0.0, 1.0, 128);
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(0.7 + 0.0075 * k);
  const double omega = 0.6;
  Trajectory traj = Trajectory::from_function(
      g, times, [omega](const Point&, double) { return 0.1 * omega; });
  auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.0, 0.2, omega, 2.0);
  auto dgc = test_constants(0.05);
  auto rep = degiorgi_dichotomy_check(traj, cyl, dgc, 0.1);
  CHECK(rep.branch == DichotomyReport::Branch::II);
  CHECK(rep.hypothesis_fraction >= dgc.nu0);
  CHECK(rep.violating_fraction == 0.0);
  CHECK(rep.conclusion_holds);
}

TEST_CASE("dichotomy preconditions are enforced") {
  Trajectory traj = constant_traj(0.1);
  auto dgc = test_constants(0.05);
  // R exceeding R_max.
  auto big = Cylinder::intrinsic({0.5, 0.0}, 1.0, 0.55, 0.9, 2.0);
  CHECK_THROWS_AS(degiorgi_dichotomy_check(traj, big, dgc, 0.1),
                  PreconditionError);
  // c8 violated near the spatial boundary.
  auto edge = Cylinder::intrinsic({0.05, 0.0}, 1.0, 0.1, 0.6, 2.0);
  CHECK_THROWS_AS(degiorgi_dichotomy_check(traj, edge, dgc, 0.1),
                  PreconditionError);
}

TEST_CASE("holder fit recovers a square-root modulus") {
  Grid g = Grid::make_1d(0.0, 1.0, 5000);
  // Anchor the profile and the fit at an actual cell center so the smallest
  // balls measure the modulus rather than the half-cell offset.
  const double x0 = g.center(g.cells[0] / 2)[0];
  std::vector<double> times = {0.9, 0.95, 1.0};
  Trajectory traj = Trajectory::from_function(
      g, times, [x0](const Point& p, double) {
        return std::min(std::sqrt(std::abs(p[0] - x0)), 0.9);
      });
  std::vector<double> radii;
  for (int k = 0; k < 8; ++k)
    radii.push_back(1e-3 * std::pow(100.0, k / 7.0));  // [1e-3, 1e-1]
  auto rep = fit_holder_exponent(traj, {x0, 0.0}, 1.0, radii,
                                 HolderFitMode::intrinsic(1.0, 2.0));
  CHECK(rep.alpha_hat >= 0.45);
  CHECK(rep.alpha_hat <= 0.55);
  CHECK_FALSE(rep.degenerate);
}

TEST_CASE("holder fit on a smooth profile clamps near one") {
  Grid g = Grid::make_1d(0.0, 1.0, 5000);
  std::vector<double> times = {0.9, 0.95, 1.0};
  Trajectory traj = Trajectory::from_function(
      g, times, [](const Point& p, double) {
        return 0.5 + 0.1 * std::sin(p[0]);
      });
  std::vector<double> radii = {0.003, 0.01, 0.03, 0.1};
  auto rep = fit_holder_exponent(traj, {0.5, 0.0}, 1.0, radii,
                                 HolderFitMode::intrinsic(1.0, 2.0));
  CHECK(rep.alpha_hat >= 0.95);
}

TEST_CASE("holder fit flags a constant field as flat") {
  Trajectory traj = constant_traj(0.3);
  std::vector<double> radii = {0.05, 0.1, 0.15, 0.2};
  auto rep = fit_holder_exponent(traj, {0.5, 0.0}, 1.0, radii,
                                 HolderFitMode::intrinsic(1.0, 2.0));
  CHECK(rep.degenerate);
  CHECK(rep.C_hat == 0.0);
}

TEST_CASE("holder seminorm of a constant field is zero") {
  Trajectory traj = constant_traj(0.42);
  SpaceTimeBox K{{0.3, 0.0}, {0.7, 0.0}, 0.85, 1.0};
  for (double alpha : {0.3, 0.7, 1.0})
    CHECK(holder_seminorm(traj, K, alpha, 2000) == 0.0);
}

TEST_CASE("holder seminorm of the ramp at alpha = 1 is the distance factor") {
  Trajectory traj = ramp_traj(400);
  SpaceTimeBox K{{0.25, 0.0}, {0.75, 0.0}, 0.85, 1.0};
  const double d = parabolic_distance(traj, K);
  CHECK(d == doctest::Approx(std::min(0.25, std::sqrt(0.15))));
  const double s = holder_seminorm(traj, K, 1.0, 20000);
  CHECK(std::abs(s - std::min(d, 1.0)) <= 2.0 * traj.grid().h(0) + 1e-9);
}

TEST_CASE("holder seminorm is monotone in alpha when K is tight") {
  // All pair distances <= d(K; Gamma): ratios (dpar/d) <= 1, so raising the
  // exponent shrinks the denominator and the seminorm cannot decrease.
  Grid g = Grid::make_1d(0.0, 1.0, 300);
  std::vector<double> times;
  for (int k = 0; k <= 10; ++k) times.push_back(0.5 + 0.05 * k);
  Trajectory traj = Trajectory::from_function(
      g, times, [](const Point& p, double t) {
        return 0.3 + 0.2 * std::sin(3.0 * p[0]) * std::exp(-t);
      });
  SpaceTimeBox K{{0.45, 0.0}, {0.55, 0.0}, 0.9, 1.0};
  double prev = 0.0;
  for (double alpha : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    const double s = holder_seminorm(traj, K, alpha, 5000);
    CHECK(s >= prev - 1e-12);
    prev = s;
  }
}

TEST_CASE("holder seminorm rejects boxes touching the parabolic boundary") {
  Trajectory traj = constant_traj(0.3);
  SpaceTimeBox K{{0.0, 0.0}, {0.5, 0.0}, 0.8, 1.0};  // touches lateral wall
  CHECK_THROWS_AS(holder_seminorm(traj, K, 0.5, 100), DomainError);
}

TEST_CASE("make_intrinsic_cylinder settles the oscillation conditions") {
  Trajectory traj = ramp_traj();
  auto cyl = make_intrinsic_cylinder(traj, {0.5, 0.0}, 1.0, 0.2, 2.0);
  REQUIRE(cyl.has_value());
  CHECK(cyl->omega >= std::pow(0.2, 0.5) - 1e-15);
  auto osc = oscillation(traj, *cyl);
  CHECK(osc.essosc <= cyl->omega + 1e-15);
  // Anchored before the data starts: no samples, no cylinder.
  CHECK_FALSE(
      make_intrinsic_cylinder(traj, {0.5, 0.0}, 0.1, 0.2, 2.0).has_value());
}

TEST_CASE("2d oscillation and level sets on a planar ramp") {
  Grid g = Grid::make_2d(0.0, 1.0, 96, 0.0, 1.0, 96);
  std::vector<double> times;
  for (int k = 0; k <= 10; ++k) times.push_back(0.8 + 0.02 * k);
  Trajectory traj = Trajectory::from_function(
      g, times, [](const Point& p, double) { return p[0]; });
  const double h = g.max_h();
  auto cyl = Cylinder::intrinsic({0.5, 0.5}, 1.0, 0.25, 1.0, 2.0);
  auto rep = oscillation(traj, cyl);
  // The ball spans x in (0.25, 0.75): oscillation 0.5 up to cell offsets.
  CHECK(std::abs(rep.essosc - 0.5) <= 2.0 * h);
  const double below = level_set_fraction(traj, cyl, 0.5, LevelSense::Below);
  CHECK(std::abs(below - 0.5) <= 2.0 * h);
  CHECK(below + level_set_fraction(traj, cyl, 0.5, LevelSense::AtOrAbove) ==
        1.0);
}

TEST_CASE("2d cylinder conditions and dichotomy on a low constant field") {
  Grid g = Grid::make_2d(0.0, 1.0, 64, 0.0, 1.0, 64);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.7 + 0.015 * k);
  const double omega = 0.6;
  Trajectory traj = Trajectory::from_function(
      g, times, [omega](const Point&, double) { return 0.1 * omega; });
  auto cyl = Cylinder::intrinsic({0.5, 0.5}, 1.0, 0.2, omega, 2.0);
  auto cond = check_cylinder_conditions(traj, cyl, 0.1);
  CHECK(cond.all_pass());
  auto dgc = test_constants(0.05);
  auto rep = degiorgi_dichotomy_check(traj, cyl, dgc, 0.1);
  CHECK(rep.branch == DichotomyReport::Branch::II);
  CHECK(rep.violating_fraction == 0.0);
  CHECK(rep.conclusion_holds);
}

TEST_CASE("2d holder fit recovers a radial square-root modulus") {
  Grid g = Grid::make_2d(0.0, 1.0, 512, 0.0, 1.0, 512);
  const Point x0 = {g.center(g.index(256, 256))[0],
                    g.center(g.index(256, 256))[1]};
  std::vector<double> times = {0.95, 1.0};
  Trajectory traj = Trajectory::from_function(
      g, times, [&](const Point& p, double) {
        const double r = std::hypot(p[0] - x0[0], p[1] - x0[1]);
        return std::min(std::sqrt(r), 0.9);
      });
  std::vector<double> radii;
  for (int k = 0; k < 6; ++k)
    radii.push_back(0.02 * std::pow(10.0, k / 5.0));  // [0.02, 0.2]
  auto rep = fit_holder_exponent(traj, x0, 1.0, radii,
                                 HolderFitMode::intrinsic(1.0, 2.0));
  CHECK(rep.alpha_hat >= 0.45);
  CHECK(rep.alpha_hat <= 0.55);
}

TEST_CASE("2d holder seminorm of a planar ramp") {
  Grid g = Grid::make_2d(0.0, 1.0, 64, 0.0, 1.0, 64);
  std::vector<double> times;
  for (int k = 0; k <= 8; ++k) times.push_back(0.7 + 0.0375 * k);
  Trajectory traj = Trajectory::from_function(
      g, times, [](const Point& p, double) { return p[0]; });
  SpaceTimeBox K{{0.3, 0.3}, {0.7, 0.7}, 0.9, 1.0};
  const double d = parabolic_distance(traj, K);
  CHECK(d == doctest::Approx(0.3));
  const double s = holder_seminorm(traj, K, 1.0, 20000);
  // sup |du|/|dx| = 1 along the x axis, so the seminorm approaches d.
  CHECK(s <= d + 1e-9);
  CHECK(s >= d - 4.0 * g.max_h());
}

TEST_CASE("nearest_snapshot_time snaps to stored times") {
  Trajectory traj = constant_traj(0.3);
  const double t = nearest_snapshot_time(traj, 0.847);
  bool found = false;
  for (const auto& s : traj.snapshots)
    if (s.t == t) found = true;
  CHECK(found);
  CHECK(std::abs(t - 0.847) <= 0.0076);
}
