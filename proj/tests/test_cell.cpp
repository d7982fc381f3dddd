#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "hs1d/cell.hpp"

using namespace hs1d;

namespace {

FieldModel constant_model(double a, double b, double f, double g = 0) {
  FieldModel m;
  m.kind = FieldKind::Constant;
  m.params = ConstantParams{a, b, f, g};
  m.bounds = {a, a, b, b, f, f, g};
  m.g_mode = g > 0 ? GMode::StrictlyPositive : GMode::IdenticallyZero;
  m.g_min = g;
  return m;
}

FieldModel cb_model(std::vector<double> la, std::vector<double> lb, std::vector<double> lf,
                    std::vector<double> lg = {}, double cell = 1.0) {
  FieldModel m;
  m.kind = FieldKind::Checkerboard;
  CheckerboardParams p;
  p.cell_width = cell;
  p.levels_a = la;
  p.levels_b = lb;
  p.levels_f = lf;
  p.levels_g = lg;
  m.params = p;
  auto mm = [](const std::vector<double>& v) {
    double lo = v[0], hi = v[0];
    for (double x : v) { lo = std::min(lo, x); hi = std::max(hi, x); }
    return std::pair{lo, hi};
  };
  auto [alo, ahi] = mm(la);
  auto [blo, bhi] = mm(lb);
  auto [flo, fhi] = mm(lf);
  m.bounds = {alo, ahi, blo, bhi, flo, fhi, 0.0};
  if (!lg.empty()) {
    auto [glo, ghi] = mm(lg);
    m.bounds.g_max = ghi;
    m.g_mode = GMode::StrictlyPositive;
    m.g_min = glo;
  } else {
    m.g_mode = GMode::IdenticallyZero;
  }
  return m;
}

// two-level local speed {1,3}: a = 1, b in {1,3}, g = 0
FieldModel speed13_model() { return cb_model({1.0}, {1.0, 3.0}, {2.0}); }

}  // namespace

TEST_CASE("harmonic mean: constant, checkerboard, periodic closed forms") {
  auto wc = sample_realization(constant_model(2, 1, 1), 1);
  CHECK(harmonic_mean_a(wc, 0.0, 64, 1e-6) == doctest::Approx(2.0).epsilon(1e-12));

  auto wcb = sample_realization(cb_model({1.0, 2.0}, {1.0}, {1.0}), 7);
  CHECK(harmonic_mean_a(wcb, 0.0, 256, 2e-3) == doctest::Approx(4.0 / 3.0).epsilon(2e-2));

  FieldModel per;
  per.kind = FieldKind::Periodic;
  PeriodicParams pp;
  pp.a = {1.0, 0.5, 1.0, 0.0};
  pp.b = {1.0, 0.0, 1.0, 0.0};
  pp.f = {1.0, 0.0, 1.0, 0.0};
  per.params = pp;
  per.bounds = {1.0 / 1.5, 2.0, 1.0, 1.0, 1.0, 1.0, 0.0};
  per.g_mode = GMode::IdenticallyZero;
  auto wp = sample_realization(per, 1);
  CHECK(harmonic_mean_a(wp, 0.0, 64, 1e-9) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("frozen ODE: constant speed and stationary front") {
  auto w = sample_realization(constant_model(2, 3, 1), 1);
  auto cell = make_frozen(w, 0.5);
  CHECK(cell.a_bar == doctest::Approx(2.0));
  auto traj = solve_frozen_ode(cell, 1.0, 2.0, 1e-3);  // mu = 1, speed = 3
  CHECK(traj.s.back() == doctest::Approx(0.5 + 3.0 * 2.0).epsilon(1e-12));

  auto traj0 = solve_frozen_ode(cell, 0.0, 2.0, 1e-3);
  CHECK(traj0.s.back() == 0.5);
}

TEST_CASE("frozen ODE long-run average speed: harmonic mean of two-level speeds") {
  auto w = sample_realization(speed13_model(), 11);
  auto cell = make_frozen(w, 0.0);
  CHECK(cell.a_bar == doctest::Approx(1.0));
  const double T = 1e4;
  auto traj = solve_frozen_ode(cell, 1.0, T, 0.005);
  CHECK(traj.s.back() / T == doctest::Approx(1.5).epsilon(0.01));
}

TEST_CASE("arrival time: constant speed, additivity, shift covariance") {
  auto wc = sample_realization(constant_model(2, 3, 1), 1);
  auto cellc = make_frozen(wc, 0.0);
  CHECK(arrival_time(cellc, 1.0, 6.0, 1e-11) == doctest::Approx(2.0).epsilon(1e-12));

  auto w = sample_realization(cb_model({1.0, 2.0}, {0.5, 1.5}, {1.0}), 5);
  auto cell = make_frozen(w, 0.25);
  const double q = 0.8, tol = 1e-11;
  const double T2 = arrival_time(cell, q, 2.0, tol);
  const double T1 = arrival_time(cell, q, 1.0, tol);
  auto cell_sh = make_frozen(w.shifted(1.0), 0.25);
  const double T1s = arrival_time(cell_sh, q, 1.0, tol);
  CHECK(std::abs(T2 - T1 - T1s) <= 1e-9);

  // Eq.-style covariance: arrival from x0+z with omega == arrival from x0
  // with the shifted realization
  for (double z : {0.4, 2.7, -1.3}) {
    auto ca = make_frozen(w, 0.25 + z);
    auto cb = make_frozen(w.shifted(z), 0.25);
    CHECK(std::abs(arrival_time(ca, q, 3.0, tol) - arrival_time(cb, q, 3.0, tol)) <= 1e-9);
  }
}

TEST_CASE("arrival per unit distance converges to the Birkhoff mean of 1/f") {
  auto w = sample_realization(speed13_model(), 21);
  auto cell = make_frozen(w, 0.0);
  const double n = 1000.0;
  const double T = arrival_time(cell, 1.0, n, 1e-10);
  CHECK(T / n == doctest::Approx(2.0 / 3.0).epsilon(0.01));  // E[1/b] = (1 + 1/3)/2
}

TEST_CASE("stalled front is reported when q = 0 and g = 0") {
  auto w = sample_realization(speed13_model(), 3);
  auto cell = make_frozen(w, 0.0);
  CHECK_THROWS_AS((void)arrival_time(cell, 0.0, 1.0, 1e-9), Error);
}

TEST_CASE("rescaling identity is bit-exact") {
  auto w = sample_realization(speed13_model(), 9);
  auto cell = make_frozen(w, 0.5);
  auto traj = solve_frozen_ode(cell, 1.0, 10.0, 0.01);
  const double eps = 0.125;
  auto scaled = rescale_trajectory(traj, eps, cell.x0);
  for (std::size_t i = 0; i < traj.t.size(); i += 97) {
    CHECK(scaled.s[i] == eps * (traj.s[i] - cell.x0) + cell.x0);
    CHECK(scaled.t[i] == eps * traj.t[i]);
  }
}

TEST_CASE("estimate_vbar: constant model is exact, two-level speed within 1%") {
  auto sched = default_schedule(16384.0);
  auto rc = estimate_vbar(constant_model(2, 3, 1), 0.0, 1.0, sched, 2, 1);
  CHECK(rc.v_bar == doctest::Approx(3.0).epsilon(1e-10));
  CHECK(rc.ci_halfwidth <= 1e-10);

  auto r = estimate_vbar(speed13_model(), 0.0, 1.0, sched, 8, 100);
  CHECK(r.v_bar == doctest::Approx(1.5).epsilon(0.01));

  // bounds: v in [q c_min, q C_max + g_max]
  auto sb = speed_bounds(speed13_model(), r.a_bar);
  CHECK(r.v_bar >= sb.lower(1.0) - 1e-12);
  CHECK(r.v_bar <= sb.upper(1.0) + 1e-12);
}

TEST_CASE("estimate_vbar: linear scaling in q when g = 0") {
  auto sched = default_schedule(16384.0);
  auto r1 = estimate_vbar(speed13_model(), 0.0, 1.0, sched, 4, 50);
  auto r2 = estimate_vbar(speed13_model(), 0.0, 2.0, sched, 4, 50);
  CHECK(r2.v_bar == doctest::Approx(2.0 * r1.v_bar).epsilon(0.01));
}

TEST_CASE("estimate_vbar reports non-convergence for a hopeless schedule") {
  const std::vector<double> bad = {1.0, 2.0};
  CHECK_THROWS_AS((void)estimate_vbar(speed13_model(), 0.0, 1.0, bad, 2, 5), Error);
}

TEST_CASE("vbar oracle closed forms") {
  auto rc = vbar_oracle(constant_model(2, 3, 1), 0.0, 1.0, 2000, 77);
  CHECK(rc.value == doctest::Approx(3.0).epsilon(1e-12));

  auto r13 = vbar_oracle(speed13_model(), 0.0, 1.0, 40000, 78);
  CHECK(std::abs(r13.value - 1.5) <= std::max(3.0 * r13.std_error, 1e-3 * 1.5));

  // g = 0.5 on top of two-level q b in {1,3}: harmonic mean of {1.5, 3.5} = 2.1
  auto mg = cb_model({1.0}, {1.0, 3.0}, {2.0}, {0.5});
  auto rg = vbar_oracle(mg, 0.0, 1.0, 60000, 79);
  CHECK(std::abs(rg.value - 2.1) <= 3.0 * rg.std_error + 1e-3);
}

TEST_CASE("estimate_vbar agrees with the oracle within max(1%, 3 SE)") {
  auto sched = default_schedule();  // up to 2^16
  for (auto model : {speed13_model(), cb_model({1.0, 2.0}, {0.5, 1.5}, {2.0}, {0.3, 0.7})}) {
    auto est = estimate_vbar(model, 0.0, 1.0, sched, 8, 500);
    auto orc = vbar_oracle(model, 0.0, 1.0, 60000, 501);
    const double tol = std::max(0.01 * std::abs(orc.value), 3.0 * orc.std_error);
    CHECK(std::abs(est.v_bar - orc.value) <= tol);
  }
}

TEST_CASE("estimate_vbar with g = 0.5 two-level speed matches 2.1") {
  auto mg = cb_model({1.0}, {1.0, 3.0}, {2.0}, {0.5});
  auto sched = default_schedule(16384.0);
  auto r = estimate_vbar(mg, 0.0, 1.0, sched, 8, 900);
  CHECK(r.v_bar == doctest::Approx(2.1).epsilon(0.01));
}

TEST_CASE("effective coefficients: analytic values with MC diagnostics within 0.5%") {
  auto m = cb_model({1.0, 2.0}, {0.5}, {1.0, 3.0});
  const std::vector<double> xg = {0.0};
  EffCoeffDiag diag;
  auto curves = effective_coeffs(m, xg, 8, 16384.0, 3000, &diag);
  CHECK(curves.a_bar[0] == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK(curves.f_bar[0] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(diag.analytic_a);
  CHECK(diag.analytic_f);
  CHECK(1.0 / diag.mc_inv_a[0] == doctest::Approx(4.0 / 3.0).epsilon(0.005));
  CHECK(diag.mc_f[0] == doctest::Approx(2.0).epsilon(0.005));

  auto cc = effective_coeffs(constant_model(1, 1, 2), xg, 1, 64.0, 1);
  CHECK(cc.a_bar[0] == doctest::Approx(1.0));
  CHECK(cc.f_bar[0] == doctest::Approx(2.0));
}

TEST_CASE("pool-adjacent-violators produces the nondecreasing projection") {
  std::vector<double> v = {1.0, 3.0, 2.0, 4.0, 3.5, 3.5, 10.0};
  pav_nondecreasing(v);
  for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] >= v[i - 1]);
  CHECK(v[1] == doctest::Approx(2.5));  // {3,2} pooled
  CHECK(v[2] == doctest::Approx(2.5));

  std::vector<double> sorted = {1, 2, 3};
  pav_nondecreasing(sorted);
  CHECK(sorted == std::vector<double>{1, 2, 3});
}

TEST_CASE("velocity table: constant model is linear in q and lookup interpolates exactly") {
  auto m = constant_model(1.0, 0.5, 2.0);  // a = 1 so v(q) = q * abar * b / a = q/2
  const std::vector<double> xg = {0.0};
  const std::vector<double> qg = {0.5, 1.0, 2.0, 4.0};
  TableOptions opt;
  opt.n_seeds = 2;
  opt.n_schedule = {64.0, 256.0};
  opt.eff_window = 64.0;
  auto t = build_vel_table(m, xg, qg, opt);
  for (std::size_t j = 0; j < qg.size(); ++j) {
    CHECK(t.v_plus[0][j] == doctest::Approx(0.5 * qg[j]).epsilon(1e-10));
    CHECK(t.v_minus[0][j] == doctest::Approx(0.5 * qg[j]).epsilon(1e-10));
  }
  CHECK(t.diag.max_monotonicity_violation == 0.0);
  CHECK(t.diag.entries_projected == 0);

  CHECK(velocity_lookup(t, 0.0, -2.0) == doctest::Approx(1.0).epsilon(1e-10));  // spec example
  CHECK(velocity_lookup(t, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-10));   // grid node
  CHECK(velocity_lookup(t, 0.0, -1.5) == doctest::Approx(0.75).epsilon(1e-10)); // midpoint
  CHECK(velocity_lookup(t, 0.0, 0.25) == doctest::Approx(0.125).epsilon(1e-10)); // below grid
  CHECK(velocity_lookup(t, 0.0, 0.0) == 0.0);
  CHECK_THROWS_AS((void)velocity_lookup(t, 0.0, 5.0), Error);
}

TEST_CASE("velocity table on a random model: monotone rows, scaling cone, reflection symmetry") {
  auto m = cb_model({1.0, 2.0}, {0.5, 1.5}, {2.0});
  const std::vector<double> xg = {0.0};
  const std::vector<double> qg = {0.5, 0.75, 1.0, 1.5, 2.0};
  TableOptions opt;
  opt.n_seeds = 6;
  opt.n_schedule = default_schedule(16384.0);
  opt.eff_window = 4096.0;
  opt.seed_base = 42;
  auto t = build_vel_table(m, xg, qg, opt);

  for (const auto& row : {t.v_plus[0], t.v_minus[0]}) {
    for (std::size_t j = 0; j + 1 < row.size(); ++j) {
      CHECK(row[j] <= row[j + 1] + 1e-15);
      CHECK(row[j + 1] <= row[j] * (qg[j + 1] / qg[j]) * (1 + 1e-15));
    }
  }
  CHECK(t.diag.max_monotonicity_violation <= 0.02);
  CHECK(t.diag.max_scaling_violation <= 0.02);

  // reflection-symmetric law: the branches agree within a few parts in 1e3
  for (std::size_t j = 0; j < qg.size(); ++j) {
    CHECK(t.v_plus[0][j] == doctest::Approx(t.v_minus[0][j]).epsilon(0.01));
  }
}

TEST_CASE("x-independent model gives x-independent table rows") {
  auto m = cb_model({1.0, 2.0}, {1.0}, {2.0});
  const std::vector<double> xg = {-1.0, 1.0};
  const std::vector<double> qg = {1.0, 2.0};
  TableOptions opt;
  opt.n_seeds = 4;
  opt.n_schedule = default_schedule(4096.0);
  opt.eff_window = 1024.0;
  auto t = build_vel_table(m, xg, qg, opt);
  // rows sample different stretches of the same field: equal within the
  // ergodic confidence width, not exactly
  for (std::size_t j = 0; j < qg.size(); ++j) {
    CHECK(t.v_plus[0][j] == doctest::Approx(t.v_plus[1][j]).epsilon(0.02));
  }
  // interior x interpolates between the rows
  const double v = velocity_lookup(t, 0.3, -1.0);
  CHECK(v >= std::min(t.v_plus[0][0], t.v_plus[1][0]) - 1e-15);
  CHECK(v <= std::max(t.v_plus[0][0], t.v_plus[1][0]) + 1e-15);
  CHECK_THROWS_AS((void)velocity_lookup(t, 3.0, -1.0), Error);
}
