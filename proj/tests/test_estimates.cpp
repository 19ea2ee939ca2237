#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pmlab/barenblatt.hpp"
#include "pmlab/estimates.hpp"

using namespace pmlab;

namespace {

Trajectory pme_barenblatt_traj(int cells, double m, double mass, double t0,
                               double t1, int snaps) {
  Grid g = Grid::make_1d(-3.0, 3.0, cells);
  std::vector<double> times;
  for (int k = 0; k <= snaps; ++k)
    times.push_back(t0 + (t1 - t0) * k / snaps);
  return Trajectory::from_function(
      g, times, [m, mass](const Point& p, double t) {
        return barenblatt_exact(m, mass, p, t, 1);
      });
}

StructuralConstants pme_constants(double m) {
  StructuralConstants sc;
  sc.m = m;
  sc.c1 = m;
  sc.c2 = m;
  sc.eps = 0.5;
  sc.mu = 0.05;
  return sc;
}

}  // namespace

TEST_CASE("cutoff is one on the plateau and zero on the parabolic boundary") {
  Grid g = Grid::make_1d(0.0, 1.0, 64);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.8 + 0.01 * k);
  Trajectory traj = Trajectory::from_function(
      g, times, [](const Point&, double) { return 0.3; });
  auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.0, 0.3, 0.8, 2.0);
  auto cut = make_cutoff(cyl, 0.5, traj);

  const double depth = cyl.depth();
  // Plateau: center, recent time.
  CHECK(cut.value({0.5, 0.0}, 1.0, 1) == 1.0);
  CHECK(cut.value({0.5 + 0.5 * 0.3 * 0.99, 0.0}, 1.0, 1) == 1.0);
  // Zero on the lateral boundary and at the bottom.
  CHECK(cut.value({0.5 + 0.3, 0.0}, 1.0, 1) == 0.0);
  CHECK(cut.value({0.5, 0.0}, 1.0 - depth, 1) == 0.0);
  // In between: strictly inside (0,1), with recorded sup-norms attained.
  CHECK(cut.value({0.5 + 0.25, 0.0}, 1.0, 1) > 0.0);
  CHECK(cut.value({0.5 + 0.25, 0.0}, 1.0, 1) < 1.0);
  CHECK(cut.sup_grad > 0.0);
  CHECK(cut.sup_lap > 0.0);
  CHECK(cut.sup_dt > 0.0);
  // The paper's scalings: |grad zeta| <~ 1/R, |zeta_t| <~ omega^{m-1}/R^2.
  CHECK(cut.sup_grad <= 8.0 / cyl.radius);
  CHECK(cut.sup_dt <= 8.0 * std::pow(cyl.omega, cyl.m - 1.0) /
                          (cyl.radius * cyl.radius));
}

TEST_CASE("lower energy estimate: constant field above k is vacuous") {
  Grid g = Grid::make_1d(0.0, 1.0, 64);
  std::vector<double> times;
  for (int k = 0; k <= 20; ++k) times.push_back(0.8 + 0.01 * k);
  Trajectory traj = Trajectory::from_function(
      g, times, [](const Point&, double) { return 0.6; });
  auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.0, 0.3, 0.8, 2.0);
  auto cut = make_cutoff(cyl, 0.5, traj);
  auto sc = pme_constants(2.0);
  auto rep = verify_lower_energy(traj, Nonlinearity::power_law(2.0), sc,
                                 ReactionTerm::zero(), cut, 0.3, 0.2);
  CHECK(rep.vacuous);
  CHECK(rep.lhs_total() == 0.0);
  CHECK(rep.rhs_total() == 0.0);
}

TEST_CASE("lower energy estimate: k = l degenerates to zero on both sides") {
  auto traj = pme_barenblatt_traj(256, 2.0, 1.0, 1.0, 1.2, 30);
  const double rb = barenblatt_support_radius(2.0, 1.0, 1.1, 1);
  auto cyl = Cylinder::intrinsic({rb, 0.0}, 1.2, 0.4, 0.8, 2.0);
  auto cut = make_cutoff(cyl, 0.5, traj);
  auto sc = pme_constants(2.0);
  auto rep = verify_lower_energy(traj, Nonlinearity::power_law(2.0), sc,
                                 ReactionTerm::zero(), cut, 0.1, 0.1);
  CHECK(rep.lhs_terms[0].second == 0.0);  // (u_(l) - l)_- vanishes
  for (auto& [name, v] : rep.rhs_terms) CHECK(v == 0.0);
  CHECK(!rep.note.empty());
}

TEST_CASE("lower energy estimate rejects k < l") {
  auto traj = pme_barenblatt_traj(128, 2.0, 1.0, 1.0, 1.1, 10);
  auto cyl = Cylinder::intrinsic({0.0, 0.0}, 1.1, 0.4, 0.8, 2.0);
  auto cut = make_cutoff(cyl, 0.5, traj);
  auto sc = pme_constants(2.0);
  CHECK_THROWS_AS(verify_lower_energy(traj, Nonlinearity::power_law(2.0), sc,
                                      ReactionTerm::zero(), cut, 0.1, 0.2),
                  DomainError);
}

TEST_CASE("upper energy estimate: k above the sup is vacuous") {
  auto traj = pme_barenblatt_traj(128, 2.0, 1.0, 1.0, 1.1, 10);
  auto cyl = Cylinder::intrinsic({0.0, 0.0}, 1.1, 0.4, 0.8, 2.0);
  auto cut = make_cutoff(cyl, 0.5, traj);
  auto sc = pme_constants(2.0);
  auto rep = verify_upper_energy(traj, Nonlinearity::power_law(2.0), sc,
                                 ReactionTerm::zero(), cut, 0.99);
  CHECK(rep.vacuous);
  CHECK(rep.lhs_total() == 0.0);
}

TEST_CASE("upper energy estimate on a constant field: ratio below one") {
  // u == c with k < c: the gradient terms vanish and the integrals reduce to
  // products of level-set volumes; the paper's constant absorbs the rest.
  Grid g = Grid::make_1d(0.0, 1.0, 128);
  std::vector<double> times;
  for (int q = 0; q <= 40; ++q) times.push_back(0.8 + 0.005 * q);
  Trajectory traj = Trajectory::from_function(
      g, times, [](const Point&, double) { return 0.5; });
  auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.0, 0.3, 0.8, 2.0);
  auto cut = make_cutoff(cyl, 0.5, traj);
  auto sc = pme_constants(2.0);
  auto rep = verify_upper_energy(traj, Nonlinearity::power_law(2.0), sc,
                                 ReactionTerm::zero(), cut, 0.25);
  CHECK_FALSE(rep.vacuous);
  CHECK(rep.lhs_terms[1].second == 0.0);  // no spatial variation
  CHECK(rep.ratio <= 1.0);
  CHECK(rep.ratio > 0.0);
}

TEST_CASE("energy estimates hold with a uniform constant on Barenblatt data") {
  auto traj = pme_barenblatt_traj(512, 2.0, 1.0, 1.0, 1.3, 60);
  const double rb = barenblatt_support_radius(2.0, 1.0, 1.25, 1);
  auto cyl = Cylinder::intrinsic({rb - 0.1, 0.0}, 1.28, 0.35, 0.7, 2.0);
  auto cut = make_cutoff(cyl, 0.5, traj);
  auto sc = pme_constants(2.0);
  auto nl = Nonlinearity::power_law(2.0);
  auto rt = ReactionTerm::zero();

  auto osc = oscillation(traj, cyl);
  const double w = osc.essosc;
  auto low = verify_lower_energy(traj, nl, sc, rt, cut,
                                 osc.mu_minus + 0.5 * w,
                                 osc.mu_minus + 0.25 * w + 1e-6);
  CHECK_FALSE(low.vacuous);
  CHECK(low.ratio > 0.0);
  // Battery-regression ceiling: the measured family maximum across centers,
  // radii and levels is ~0.4, so 5.0 flags an order-of-magnitude regression.
  CHECK(low.ratio < 5.0);
  CHECK(low.ratio_alt < 5.0);

  auto up = verify_upper_energy(traj, nl, sc, rt, cut,
                                osc.mu_plus - 0.5 * w);
  CHECK_FALSE(up.vacuous);
  CHECK(up.ratio > 0.0);
  CHECK(up.ratio < 5.0);
}

TEST_CASE("estimate ratios are invariant under relabeling the time unit") {
  auto base = pme_barenblatt_traj(256, 2.0, 1.0, 1.0, 1.3, 40);
  const double rb = barenblatt_support_radius(2.0, 1.0, 1.25, 1);
  const double lambda = 7.0;
  Trajectory scaled = base;
  for (auto& s : scaled.snapshots) s.t *= lambda;

  auto cyl = Cylinder::intrinsic({rb - 0.1, 0.0}, 1.28, 0.35, 0.7, 2.0);
  Cylinder cyl_scaled = cyl;
  cyl_scaled.center_t *= lambda;
  cyl_scaled.depth_factor = lambda;  // depth stretched with the time axis

  auto sc = pme_constants(2.0);
  auto nl = Nonlinearity::power_law(2.0);
  auto rt = ReactionTerm::zero();
  auto cut_a = make_cutoff(cyl, 0.5, base);
  auto cut_b = make_cutoff(cyl_scaled, 0.5, scaled);

  auto osc = oscillation(base, cyl);
  const double w = osc.essosc;
  auto ra = verify_lower_energy(base, nl, sc, rt, cut_a,
                                osc.mu_minus + 0.5 * w,
                                osc.mu_minus + 0.25 * w + 1e-6);
  auto rb2 = verify_lower_energy(scaled, nl, sc, rt, cut_b,
                                 osc.mu_minus + 0.5 * w,
                                 osc.mu_minus + 0.25 * w + 1e-6);
  CHECK(std::abs(ra.ratio - rb2.ratio) <= 1e-10 * std::max(1.0, ra.ratio));
  auto ua = verify_upper_energy(base, nl, sc, rt, cut_a, osc.mu_plus - 0.5 * w);
  auto ub = verify_upper_energy(scaled, nl, sc, rt, cut_b,
                                osc.mu_plus - 0.5 * w);
  CHECK(std::abs(ua.ratio - ub.ratio) <= 1e-10 * std::max(1.0, ua.ratio));
}

TEST_CASE("log estimate: slices below both levels are vacuous") {
  Grid g = Grid::make_1d(0.0, 1.0, 64);
  std::vector<double> times;
  for (int q = 0; q <= 20; ++q) times.push_back(0.8 + 0.01 * q);
  Trajectory traj = Trajectory::from_function(
      g, times, [](const Point& p, double) { return 0.1 + 0.05 * p[0]; });
  auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.0, 0.3, 0.9, 2.0);
  auto cut = make_cutoff(cyl, 0.5, traj, /*space_only=*/true);
  auto sc = pme_constants(2.0);
  auto rep = verify_log_estimate(traj, Nonlinearity::power_law(2.0), sc,
                                 ReactionTerm::zero(), cut, 2, 5, 0.9, 0.95);
  CHECK(rep.lhs_terms[0].second == 0.0);
  CHECK(rep.rhs_terms[0].second == 0.0);
}

TEST_CASE("log estimate: l = k+1 zeroes the left-hand coefficient") {
  auto traj = pme_barenblatt_traj(256, 2.0, 1.0, 1.0, 1.2, 30);
  auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.15, 0.3, 0.8, 2.0);
  auto cut = make_cutoff(cyl, 0.5, traj, true);
  auto sc = pme_constants(2.0);
  auto rep = verify_log_estimate(traj, Nonlinearity::power_law(2.0), sc,
                                 ReactionTerm::zero(), cut, 1, 2, 1.1, 1.15);
  CHECK(rep.lhs_terms[0].second == 0.0);
  CHECK(!rep.note.empty());
}

TEST_CASE("log estimate input validation") {
  auto traj = pme_barenblatt_traj(128, 2.0, 1.0, 1.0, 1.1, 10);
  auto cyl = Cylinder::intrinsic({0.5, 0.0}, 1.05, 0.3, 0.8, 2.0);
  auto cut = make_cutoff(cyl, 0.5, traj, true);
  auto cut_spacetime = make_cutoff(cyl, 0.5, traj, false);
  auto sc = pme_constants(2.0);
  auto nl = Nonlinearity::power_law(2.0);
  auto rt = ReactionTerm::zero();
  CHECK_THROWS_AS(verify_log_estimate(traj, nl, sc, rt, cut, 3, 2, 1.0, 1.05),
                  DomainError);
  CHECK_THROWS_AS(verify_log_estimate(traj, nl, sc, rt, cut, 1, 3, 1.05, 1.0),
                  DomainError);
  CHECK_THROWS_AS(
      verify_log_estimate(traj, nl, sc, rt, cut_spacetime, 1, 3, 1.0, 1.05),
      DomainError);
}

TEST_CASE("v2 embedding: homogeneity and sane values") {
  Grid g = Grid::make_1d(0.0, 1.0, 80);
  std::vector<double> times;
  for (int q = 0; q <= 16; ++q) times.push_back(0.1 * q / 16.0);
  auto bump = [](const Point& p, double t) {
    const double x = p[0];
    const double sx = std::max(0.0, 1.0 - std::pow((x - 0.5) / 0.3, 2));
    const double st = std::max(0.0, 1.0 - std::pow((t - 0.05) / 0.05, 2));
    return sx * sx * st;
  };
  Trajectory w = Trajectory::from_function(g, times, bump);
  const double r1 = v2_embedding_ratio(w);
  CHECK(r1 > 0.0);

  Trajectory w5 = w;
  for (auto& s : w5.snapshots)
    for (auto& v : s.field.values) v *= 5.0;
  const double r5 = v2_embedding_ratio(w5);
  CHECK(std::abs(r5 - r1) <= 1e-12 * std::max(1.0, r1));
}

TEST_CASE("v2 embedding: empirical constant over a bump family") {
  // Shrinking supports and random bump shapes keep the ratio bounded by a
  // family maximum; the measure factor makes the ratio scale-aware.
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> center(0.35, 0.65);
  std::uniform_real_distribution<double> width(0.05, 0.25);
  Grid g = Grid::make_1d(0.0, 1.0, 160);
  double family_max = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double cx = center(rng), wx = width(rng);
    const double wt = width(rng) * 0.2;
    std::vector<double> times;
    for (int q = 0; q <= 12; ++q) times.push_back(0.1 * q / 12.0);
    Trajectory w = Trajectory::from_function(
        g, times, [cx, wx, wt](const Point& p, double t) {
          const double sx =
              std::max(0.0, 1.0 - std::pow((p[0] - cx) / wx, 2));
          const double st =
              std::max(0.0, 1.0 - std::pow((t - 0.05) / (0.04 + wt), 2));
          return sx * sx * st;
        });
    family_max = std::max(family_max, v2_embedding_ratio(w));
  }
  CHECK(family_max > 0.0);
  CHECK(family_max < 2.0);  // regression ceiling for the battery
}

TEST_CASE("v2 embedding matches the closed form for a tensor bump") {
  // w = f(x) g(t) with f = (1-s^2)^2 on [c-a, c+a] and g = (1-tau^2) on
  // [tc-b, tc+b]. Exact integrals:
  //   int f^2 = a 256/315,  int f'^2 = 256/(105 a),  int g^2 = b 16/15,
  //   sup g = 1,  |supp| = 4ab.
  const double a = 0.3, b = 0.04, cx = 0.5, tc = 0.05;
  Grid g = Grid::make_1d(0.0, 1.0, 2000);
  std::vector<double> times;
  for (int q = 0; q <= 400; ++q) times.push_back(0.1 * q / 400.0);
  Trajectory w = Trajectory::from_function(
      g, times, [&](const Point& p, double t) {
        const double s = (p[0] - cx) / a;
        const double tau = (t - tc) / b;
        if (std::abs(s) >= 1.0 || std::abs(tau) >= 1.0) return 0.0;
        return (1.0 - s * s) * (1.0 - s * s) * (1.0 - tau * tau);
      });
  const double l2 = std::sqrt((a * 256.0 / 315.0) * (b * 16.0 / 15.0));
  const double support = 4.0 * a * b;
  const double v2 = std::sqrt(a * 256.0 / 315.0) +
                    std::sqrt((b * 16.0 / 15.0) * 256.0 / (105.0 * a));
  const double exact = l2 / (std::pow(support, 1.0 / 3.0) * v2);
  const double measured = v2_embedding_ratio(w);
  CHECK(measured == doctest::Approx(exact).epsilon(0.05));
}

TEST_CASE("v2 embedding stays bounded over a 2d bump family") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> center(0.35, 0.65);
  std::uniform_real_distribution<double> width(0.08, 0.25);
  Grid g = Grid::make_2d(0.0, 1.0, 48, 0.0, 1.0, 48);
  double family_max = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const double cx = center(rng), cy = center(rng);
    const double wx = width(rng), wy = width(rng);
    std::vector<double> times;
    for (int q = 0; q <= 10; ++q) times.push_back(0.08 * q / 10.0);
    Trajectory w = Trajectory::from_function(
        g, times, [&](const Point& p, double t) {
          const double sx = (p[0] - cx) / wx;
          const double sy = (p[1] - cy) / wy;
          const double st = (t - 0.04) / 0.035;
          if (sx * sx + sy * sy >= 1.0 || std::abs(st) >= 1.0) return 0.0;
          const double r2 = sx * sx + sy * sy;
          return (1.0 - r2) * (1.0 - r2) * (1.0 - st * st);
        });
    family_max = std::max(family_max, v2_embedding_ratio(w));
  }
  CHECK(family_max > 0.0);
  CHECK(family_max < 2.0);
}

TEST_CASE("v2 embedding rejects zero fields and nonzero boundaries") {
  Grid g = Grid::make_1d(0.0, 1.0, 32);
  std::vector<double> times = {0.0, 0.1, 0.2};
  Trajectory z = Trajectory::from_function(
      g, times, [](const Point&, double) { return 0.0; });
  CHECK_THROWS_AS(v2_embedding_ratio(z), ZeroField);
  Trajectory nz = Trajectory::from_function(
      g, times, [](const Point&, double) { return 1.0; });
  CHECK_THROWS_AS(v2_embedding_ratio(nz), DomainError);
}

TEST_CASE("poincare ratio: hand-integrated ramp gives exactly one") {
  Grid g = Grid::make_1d(-1.0, 1.0, 256);
  Field w(g);
  for (int i = 0; i < w.size(); ++i) w[i] = g.center(i)[0];
  const double r = poincare_ratio(w, {0.0, 0.0}, 1.0, 0.0, 0.5);
  CHECK(r == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("poincare ratio: constant below k gives zero") {
  Grid g = Grid::make_1d(-1.0, 1.0, 64);
  Field w(g, -0.5);
  CHECK(poincare_ratio(w, {0.0, 0.0}, 1.0, 0.0, 0.5) == 0.0);
}

TEST_CASE("poincare ratio: translation invariance") {
  Grid g = Grid::make_1d(-1.0, 1.0, 128);
  Field w(g);
  for (int i = 0; i < w.size(); ++i)
    w[i] = std::sin(3.0 * g.center(i)[0]) * 0.4;
  const double r0 = poincare_ratio(w, {0.0, 0.0}, 1.0, -0.1, 0.2);
  Field shifted = w;
  for (auto& v : shifted.values) v += 0.37;
  const double r1 = poincare_ratio(shifted, {0.0, 0.0}, 1.0, -0.1 + 0.37,
                                   0.2 + 0.37);
  CHECK(r0 == doctest::Approx(r1).epsilon(1e-12));
}

TEST_CASE("poincare ratio: degenerate denominator throws") {
  Grid g = Grid::make_1d(-1.0, 1.0, 64);
  Field w(g, 0.9);
  CHECK_THROWS_AS(poincare_ratio(w, {0.0, 0.0}, 1.0, 0.0, 0.5),
                  DegenerateDenominator);
}

TEST_CASE("poincare ratio stays below the empirical constant on random fields") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> amp(0.1, 1.0);
  std::uniform_real_distribution<double> freq(0.5, 6.0);
  std::uniform_real_distribution<double> phase(0.0, 6.28);
  double family_max = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    Grid g = Grid::make_1d(-1.0, 1.0, 128);
    Field w(g);
    const double a = amp(rng), f = freq(rng), ph = phase(rng);
    for (int i = 0; i < w.size(); ++i)
      w[i] = a * std::sin(f * g.center(i)[0] + ph);
    const double k = -0.2 * a, l = 0.3 * a;
    try {
      family_max = std::max(family_max,
                            poincare_ratio(w, {0.0, 0.0}, 1.0, k, l));
    } catch (const DegenerateDenominator&) {
    }
  }
  CHECK(family_max > 0.0);
  CHECK(family_max < 8.0);  // empirical C(1) ceiling, regression-tested
}

TEST_CASE("poincare ratio in 2d stays below the empirical constant") {
  std::mt19937 rng(29);
  std::uniform_real_distribution<double> amp(0.1, 1.0), freq(0.5, 4.0),
      phase(0.0, 6.28);
  Grid g = Grid::make_2d(-1.0, 1.0, 48, -1.0, 1.0, 48);
  double family_max = 0.0;
  int evaluated = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Field w(g);
    const double a = amp(rng);
    const double fx = freq(rng), fy = freq(rng), ph = phase(rng);
    for (int i = 0; i < w.size(); ++i) {
      const Point p = g.center(i);
      w[i] = a * std::sin(fx * p[0] + fy * p[1] + ph);
    }
    try {
      family_max = std::max(family_max, poincare_ratio(w, {0.0, 0.0}, 1.0,
                                                       -0.2 * a, 0.3 * a));
      ++evaluated;
    } catch (const DegenerateDenominator&) {
    }
  }
  CHECK(evaluated >= 400);
  CHECK(family_max > 0.0);
  CHECK(family_max < 8.0);  // empirical C(2) ceiling, regression-tested
}

TEST_CASE("fast geometric bound: the stated exact case") {
  // C=1, b=2, a=1/2: theta = 2^{-4} = 1/16 and y1 = (1/16)^{3/2} = 1/64
  // meets the bound with equality at n = 1.
  auto res = fast_geometric_bound(1.0, 2.0, 0.5, 1.0 / 16.0, 8);
  CHECK(res.theta == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK(res.hypothesis_met);
  CHECK(res.sequence[1] == doctest::Approx(1.0 / 64.0).epsilon(1e-15));
  CHECK(res.bounds[1] == doctest::Approx(1.0 / 64.0).epsilon(1e-15));
  CHECK(res.bound_holds);
}

TEST_CASE("fast geometric bound: zero start stays zero") {
  auto res = fast_geometric_bound(2.0, 3.0, 0.25, 0.0, 6);
  for (double y : res.sequence) CHECK(y == 0.0);
  CHECK(res.bound_holds);
}

TEST_CASE("fast geometric bound: violated hypothesis is reported, not claimed") {
  auto res = fast_geometric_bound(1.0, 2.0, 0.5, 2.0 / 16.0, 6);
  CHECK_FALSE(res.hypothesis_met);
  CHECK(res.sequence.size() == 7);
}

TEST_CASE("fast geometric bound holds for 1000 random admissible tuples") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> Cd(0.1, 10.0);
  std::uniform_real_distribution<double> bd(1.1, 8.0);
  std::uniform_real_distribution<double> ad(0.1, 0.9);
  std::uniform_real_distribution<double> frac(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const double C = Cd(rng), b = bd(rng), a = ad(rng);
    const double theta = std::pow(C, -1.0 / a) * std::pow(b, -1.0 / (a * a));
    const double y0 = frac(rng) * theta;
    auto res = fast_geometric_bound(C, b, a, y0, 12);
    CHECK(res.hypothesis_met);
    CHECK(res.bound_holds);
  }
}
