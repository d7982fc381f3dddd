#include "hs1d/cell.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hs1d/rng.hpp"

namespace hs1d {

namespace {

double smooth_spacing(const FieldModel& m) {
  if (m.piecewise_constant() || m.fast_scale() == 0.0)
    return std::numeric_limits<double>::infinity();
  return m.fast_scale() / 16.0;
}

constexpr double kAbarWindowCeiling = 1048576.0;  // 2^20

}  // namespace

double harmonic_mean_a(const FieldRealization& omega, double x0, double window0, double tol) {
  (void)x0;  // bundled kinds are x-independent; kept for the frozen contract
  const double spacing = smooth_spacing(omega.model());
  auto integrate = [&](double M) {
    std::vector<double> bpts;
    omega.append_breakpoints(-M, 0.0, 1.0, bpts);
    FillFn fn = [&omega](const double* xs, std::size_t n, double* out) {
      omega.fill(xs, n, 1.0, out, nullptr, nullptr, nullptr);
      for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / out[i];
    };
    return build_cumulative(fn, -M, 0.0, 1e-12, spacing, bpts).total();
  };
  double M = std::max(window0, 1.0);
  double abar = M / integrate(M);
  while (true) {
    M *= 2;
    if (M > kAbarWindowCeiling)
      fail(Errc::NoConvergence, "harmonic_mean_a: window ceiling 2^20 reached");
    const double next = M / integrate(M);
    if (std::abs(next - abar) <= tol * std::abs(next)) return next;
    abar = next;
  }
}

FrozenCell make_frozen(const FieldRealization& omega, double x0, const CellOptions& opt) {
  FrozenCell c{omega, omega, false, x0, 1.0};
  if (opt.prefer_analytic_abar) {
    if (auto inv = analytic_mean_inv_a(omega.model())) {
      c.a_bar = 1.0 / *inv;
      return c;
    }
  }
  c.a_bar = harmonic_mean_a(omega, x0, opt.abar_window0, opt.abar_tol);
  return c;
}

namespace {

// cumulative integral of 1/f over [x0, x0 + n_max]; schedule points are
// inserted as nodes so arrival times are nodal reads, not interpolations.
CumulativeIntegral arrival_cumulative(const FrozenCell& cell, double q, double n_max,
                                      std::span<const double> ns, double tol) {
  if (!(q >= 0)) fail(Errc::OutOfDomain, "arrival: q must be >= 0 after reflection");
  const double l = cell.x0, r = cell.x0 + n_max;
  std::vector<double> bpts;
  cell.omega.append_breakpoints(l, r, 1.0, bpts);
  for (double n : ns) {
    const double p = cell.x0 + n;
    if (p > l && p < r) bpts.push_back(p);
  }
  const double a_bar = cell.a_bar;
  const FieldRealization& wab = cell.omega;
  const FieldRealization& wg = cell.omega_g;
  const bool separate_g = cell.separate_g;
  bool stalled = false;
  FillFn fn = [&, q, a_bar](const double* xs, std::size_t n, double* out) {
    std::vector<double> a(n), b(n), g(n);
    wab.fill(xs, n, 1.0, a.data(), b.data(), nullptr, separate_g ? nullptr : g.data());
    if (separate_g) wg.fill(xs, n, 1.0, nullptr, nullptr, nullptr, g.data());
    for (std::size_t i = 0; i < n; ++i) {
      const double f = q * a_bar * b[i] / a[i] + g[i];
      if (!(f > 0)) stalled = true;
      out[i] = 1.0 / f;
    }
  };
  auto cum = build_cumulative(fn, l, r, tol, smooth_spacing(wab.model()), bpts);
  if (stalled) fail(Errc::StalledFront, "arrival_time: nonpositive local speed sampled");
  return cum;
}

}  // namespace

std::vector<double> arrival_times(const FrozenCell& cell, double q, std::span<const double> ns,
                                  double tol) {
  double n_max = 0;
  for (double n : ns) n_max = std::max(n_max, n);
  if (!(n_max > 0)) fail(Errc::OutOfDomain, "arrival_times: distances must be positive");
  auto cum = arrival_cumulative(cell, q, n_max, ns, tol);
  std::vector<double> out;
  out.reserve(ns.size());
  for (double n : ns) out.push_back(cum.interp(cell.x0 + n));
  return out;
}

double arrival_time(const FrozenCell& cell, double q, double n, double tol) {
  const double ns[1] = {n};
  return arrival_times(cell, q, ns, tol)[0];
}

OdeTrajectory solve_frozen_ode(const FrozenCell& cell, double q, double T, double dt) {
  auto f = [&](double s) {
    const Coeffs ab = cell.omega.eval(cell.x0, s);
    const double g = cell.separate_g ? cell.omega_g.eval_g(cell.x0, s) : ab.g;
    return q * cell.a_bar * ab.b / ab.a + g;
  };
  OdeTrajectory traj;
  const auto steps = static_cast<std::size_t>(std::ceil(T / dt));
  traj.t.reserve(steps + 1);
  traj.s.reserve(steps + 1);
  double t = 0, s = cell.x0;
  traj.t.push_back(t);
  traj.s.push_back(s);
  for (std::size_t k = 0; k < steps; ++k) {
    const double h = std::min(dt, T - t);
    const double k1 = f(s);
    const double k2 = f(s + 0.5 * h * k1);
    const double k3 = f(s + 0.5 * h * k2);
    const double k4 = f(s + h * k3);
    s += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    t += h;
    traj.t.push_back(t);
    traj.s.push_back(s);
  }
  return traj;
}

OdeTrajectory rescale_trajectory(const OdeTrajectory& traj, double eps, double x0) {
  OdeTrajectory out;
  out.t.reserve(traj.t.size());
  out.s.reserve(traj.s.size());
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    out.t.push_back(eps * traj.t[i]);
    out.s.push_back(eps * (traj.s[i] - x0) + x0);
  }
  return out;
}

std::vector<double> default_schedule(double n_max) {
  std::vector<double> s;
  for (double n = 64; n < n_max; n *= 4) s.push_back(n);
  s.push_back(n_max);
  return s;
}

namespace {

CellResult estimate_vbar_impl(const FieldModel& model, double x0, double q_signed,
                              std::span<const double> n_schedule, int n_seeds,
                              std::uint64_t seed_base, const CellOptions& opt) {
  require_valid(model);
  if (n_schedule.empty() || n_seeds < 1)
    fail(Errc::OutOfDomain, "estimate_vbar: empty schedule or no seeds");
  const double q = std::abs(q_signed);

  CellResult res;
  res.x0 = x0;
  res.q = q_signed;
  res.n_seeds = n_seeds;
  res.schedule.assign(n_schedule.begin(), n_schedule.end());
  res.window = n_schedule.back();
  res.v_by_schedule.assign(n_schedule.size(), 0.0);

  double abar_acc = 0;
  for (int k = 0; k < n_seeds; ++k) {
    FieldRealization base(model, seed_base + static_cast<std::uint64_t>(k));
    FrozenCell frozen = make_frozen(q_signed < 0 ? base.reflected() : base, x0, opt);
    if (q_signed < 0 && !opt.reflect_g) {
      frozen.omega_g = base;  // literal Eq.-(3.11) reading: G unreflected
      frozen.separate_g = true;
    }
    abar_acc += frozen.a_bar;

    const auto T = arrival_times(frozen, q, n_schedule, opt.arrival_tol);
    for (std::size_t j = 0; j < T.size(); ++j)
      res.v_by_schedule[j] += (n_schedule[j] / T[j]) / n_seeds;
    res.v_by_seed.push_back(n_schedule.back() / T.back());
  }
  res.a_bar = abar_acc / n_seeds;
  res.v_bar = res.v_by_schedule.back();

  double spread = 0;
  for (double v : res.v_by_seed) spread = std::max(spread, std::abs(v - res.v_bar));
  double sched_gap = 0;
  if (res.v_by_schedule.size() >= 2) {
    sched_gap = std::abs(res.v_by_schedule.back() - res.v_by_schedule[res.v_by_schedule.size() - 2]);
  }
  res.ci_halfwidth = std::max(spread, sched_gap);
  res.converged = sched_gap <= 5.0 * opt.vbar_tol * std::abs(res.v_bar);
  return res;
}

}  // namespace

CellResult estimate_vbar(const FieldModel& model, double x0, double q_signed,
                         std::span<const double> n_schedule, int n_seeds,
                         std::uint64_t seed_base, const CellOptions& opt) {
  CellResult res = estimate_vbar_impl(model, x0, q_signed, n_schedule, n_seeds, seed_base, opt);
  if (!res.converged)
    fail(Errc::NoConvergence, "estimate_vbar: last two schedule entries differ beyond 5*tol");
  return res;
}

OracleResult vbar_oracle(const FieldModel& model, double x0, double q, int n_mc,
                         std::uint64_t seed, const CellOptions& opt) {
  require_valid(model);
  double a_bar = 1.0;
  if (auto inv = analytic_mean_inv_a(model)) {
    a_bar = 1.0 / *inv;
  } else {
    a_bar = harmonic_mean_a(FieldRealization(model, seed), x0, opt.abar_window0, opt.abar_tol);
  }
  const double span = std::max(model.fast_scale(), 1.0);
  double sum = 0, sum2 = 0;
  for (int j = 0; j < n_mc; ++j) {
    const std::uint64_t sj = rng::mix64(seed + rng::kGolden * static_cast<std::uint64_t>(j + 1));
    FieldRealization w(model, sj);
    const double y = rng::u01(rng::mix64(sj ^ 0x5bf0d3a1c0ffee11ull)) * span;
    const Coeffs c = w.eval(x0, y);
    const double inv_f = 1.0 / (q * a_bar * c.b / c.a + c.g);
    sum += inv_f;
    sum2 += inv_f * inv_f;
  }
  const double mean = sum / n_mc;
  const double var = std::max(0.0, sum2 / n_mc - mean * mean);
  OracleResult out;
  out.value = 1.0 / mean;
  out.std_error = (out.value * out.value) * std::sqrt(var / n_mc);
  out.n_samples = n_mc;
  return out;
}

SpeedBounds speed_bounds(const FieldModel& model, double a_bar) {
  SpeedBounds sb;
  sb.c_min = a_bar * model.bounds.b_min / model.bounds.a_max;
  sb.c_max = a_bar * model.bounds.b_max / model.bounds.a_min;
  sb.g_max = model.g_mode == GMode::IdenticallyZero ? 0.0 : model.bounds.g_max;
  return sb;
}

void pav_nondecreasing(std::vector<double>& v) {
  const std::size_t n = v.size();
  std::vector<double> level(n), weight(n);
  std::vector<std::size_t> count(n);
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    level[m] = v[i];
    weight[m] = 1;
    count[m] = 1;
    ++m;
    while (m >= 2 && level[m - 2] > level[m - 1]) {
      const double w = weight[m - 2] + weight[m - 1];
      level[m - 2] = (level[m - 2] * weight[m - 2] + level[m - 1] * weight[m - 1]) / w;
      weight[m - 2] = w;
      count[m - 2] += count[m - 1];
      --m;
    }
  }
  std::size_t i = 0;
  for (std::size_t blk = 0; blk < m; ++blk)
    for (std::size_t k = 0; k < count[blk]; ++k) v[i++] = level[blk];
}

CoeffCurves effective_coeffs(const FieldModel& model, std::span<const double> x_grid, int n_seeds,
                             double window, std::uint64_t seed_base, EffCoeffDiag* diag) {
  require_valid(model);
  if (x_grid.empty() || n_seeds < 1)
    fail(Errc::OutOfDomain, "effective_coeffs: empty grid or no seeds");
  const auto an_inv_a = analytic_mean_inv_a(model);
  const auto an_f = analytic_mean_f(model);
  const double spacing = smooth_spacing(model);

  CoeffCurves curves;
  curves.x.assign(x_grid.begin(), x_grid.end());
  if (diag != nullptr) {
    diag->analytic_a = an_inv_a.has_value();
    diag->analytic_f = an_f.has_value();
    diag->mc_inv_a.clear();
    diag->mc_f.clear();
  }

  for (double x : x_grid) {
    double acc_inv_a = 0, acc_f = 0;
    for (int k = 0; k < n_seeds; ++k) {
      FieldRealization w(model, seed_base + static_cast<std::uint64_t>(k));
      std::vector<double> bpts;
      w.append_breakpoints(-window, 0.0, 1.0, bpts);
      FillFn fn_inv_a = [&w](const double* xs, std::size_t n, double* out) {
        w.fill(xs, n, 1.0, out, nullptr, nullptr, nullptr);
        for (std::size_t i = 0; i < n; ++i) out[i] = 1.0 / out[i];
      };
      FillFn fn_f = [&w](const double* xs, std::size_t n, double* out) {
        w.fill(xs, n, 1.0, nullptr, nullptr, out, nullptr);
      };
      acc_inv_a += build_cumulative(fn_inv_a, -window, 0.0, 1e-10, spacing, bpts).total() / window;
      acc_f += build_cumulative(fn_f, -window, 0.0, 1e-10, spacing, bpts).total() / window;
    }
    const double mc_inv_a = acc_inv_a / n_seeds;
    const double mc_f = acc_f / n_seeds;
    if (diag != nullptr) {
      diag->mc_inv_a.push_back(mc_inv_a);
      diag->mc_f.push_back(mc_f);
    }
    curves.a_bar.push_back(1.0 / (an_inv_a ? *an_inv_a : mc_inv_a));
    curves.f_bar.push_back(an_f ? *an_f : mc_f);
  }
  return curves;
}

namespace {

struct RowViolation {
  double monotonicity = 0;
  double scaling = 0;
  int projected = 0;
};

RowViolation project_row(std::vector<double>& row, const std::vector<double>& q_grid, double v0) {
  RowViolation viol;
  for (std::size_t j = 0; j + 1 < row.size(); ++j) {
    if (row[j] > row[j + 1])
      viol.monotonicity = std::max(viol.monotonicity, (row[j] - row[j + 1]) / row[j + 1]);
    const double ratio = q_grid[j + 1] / q_grid[j];
    if (row[j + 1] > row[j] * ratio)
      viol.scaling = std::max(viol.scaling, row[j + 1] / (row[j] * ratio) - 1.0);
  }
  std::vector<double> before = row;
  if (row.front() < v0) row.front() = v0;
  pav_nondecreasing(row);
  for (std::size_t j = 1; j < row.size(); ++j) {
    const double hi = row[j - 1] * (q_grid[j] / q_grid[j - 1]);
    if (row[j] > hi) row[j] = hi;
  }
  for (std::size_t j = 0; j < row.size(); ++j)
    if (row[j] != before[j]) ++viol.projected;
  return viol;
}

}  // namespace

EffVelTable build_vel_table(const FieldModel& model, std::span<const double> x_grid,
                            std::span<const double> q_grid, const TableOptions& opt) {
  require_valid(model);
  if (x_grid.empty() || q_grid.empty())
    fail(Errc::OutOfDomain, "build_vel_table: empty grids");
  for (double q : q_grid)
    if (!(q > 0)) fail(Errc::OutOfDomain, "build_vel_table: q grid must be positive");

  EffVelTable t;
  t.x_grid.assign(x_grid.begin(), x_grid.end());
  t.q_grid.assign(q_grid.begin(), q_grid.end());
  const std::vector<double> schedule =
      opt.n_schedule.empty() ? default_schedule() : opt.n_schedule;

  // q = 0 anchor: harmonic mean of g (0 when g == 0)
  double v0 = 0;
  if (model.g_mode == GMode::StrictlyPositive) {
    if (auto inv_g = analytic_mean_inv_g(model)) {
      v0 = 1.0 / *inv_g;
    } else {
      const int nmc = opt.oracle_mc > 0 ? opt.oracle_mc : 20000;
      v0 = vbar_oracle(model, x_grid[0], 0.0, nmc, opt.seed_base ^ 0x9000u, opt.cell).value;
    }
  }
  t.v0.assign(x_grid.size(), v0);

  for (std::size_t i = 0; i < x_grid.size(); ++i) {
    std::vector<double> plus_row, minus_row;
    for (double qv : q_grid) {
      for (double sign : {+1.0, -1.0}) {
        CellResult r = estimate_vbar_impl(model, x_grid[i], sign * qv, schedule, opt.n_seeds,
                                          opt.seed_base, opt.cell);
        if (!r.converged) {
          t.diag.errors.push_back("x=" + std::to_string(x_grid[i]) +
                                  " q=" + std::to_string(sign * qv) +
                                  ": schedule not converged (gap " +
                                  std::to_string(r.ci_halfwidth) + ")");
        }
        (sign > 0 ? plus_row : minus_row).push_back(r.v_bar);
      }
    }
    const RowViolation vp = project_row(plus_row, t.q_grid, v0);
    const RowViolation vm = project_row(minus_row, t.q_grid, v0);
    t.diag.max_monotonicity_violation =
        std::max({t.diag.max_monotonicity_violation, vp.monotonicity, vm.monotonicity});
    t.diag.max_scaling_violation =
        std::max({t.diag.max_scaling_violation, vp.scaling, vm.scaling});
    t.diag.entries_projected += vp.projected + vm.projected;
    t.v_plus.push_back(std::move(plus_row));
    t.v_minus.push_back(std::move(minus_row));
  }

  const int eff_seeds = opt.eff_seeds > 0 ? opt.eff_seeds : opt.n_seeds;
  t.curves = effective_coeffs(model, x_grid, eff_seeds, opt.eff_window, opt.seed_base);
  return t;
}

namespace {

double lookup_row(const std::vector<double>& q_grid, const std::vector<double>& row, double v0,
                  double q, const char* what) {
  if (q <= q_grid.front()) {
    // linear through the q = 0 anchor
    return v0 + (row.front() - v0) * (q / q_grid.front());
  }
  if (q > q_grid.back() * (1.0 + 1e-12)) {
    fail(Errc::OutOfTable, std::string(what) + ": |slope| " + std::to_string(q) +
                               " exceeds table maximum " + std::to_string(q_grid.back()));
  }
  const double qc = std::min(q, q_grid.back());
  const auto it = std::upper_bound(q_grid.begin(), q_grid.end(), qc);
  const std::size_t j = std::min<std::size_t>(q_grid.size() - 1,
                                              static_cast<std::size_t>(it - q_grid.begin()));
  const double t = (qc - q_grid[j - 1]) / (q_grid[j] - q_grid[j - 1]);
  return row[j - 1] + t * (row[j] - row[j - 1]);
}

}  // namespace

double velocity_lookup(const EffVelTable& t, double x, double grad_signed) {
  const double q = std::abs(grad_signed);
  const auto& branch = grad_signed <= 0 ? t.v_plus : t.v_minus;
  if (t.x_grid.size() == 1) return lookup_row(t.q_grid, branch[0], t.v0[0], q, "velocity_lookup");
  if (x < t.x_grid.front() || x > t.x_grid.back()) {
    fail(Errc::OutOfTable, "velocity_lookup: x = " + std::to_string(x) + " outside table hull [" +
                               std::to_string(t.x_grid.front()) + ", " +
                               std::to_string(t.x_grid.back()) + "]");
  }
  const auto it = std::upper_bound(t.x_grid.begin(), t.x_grid.end(), x);
  const std::size_t i =
      std::min<std::size_t>(t.x_grid.size() - 1, std::max<std::ptrdiff_t>(1, it - t.x_grid.begin()));
  const double s = (x - t.x_grid[i - 1]) / (t.x_grid[i] - t.x_grid[i - 1]);
  const double lo = lookup_row(t.q_grid, branch[i - 1], t.v0[i - 1], q, "velocity_lookup");
  const double hi = lookup_row(t.q_grid, branch[i], t.v0[i], q, "velocity_lookup");
  return lo + s * (hi - lo);
}

}  // namespace hs1d
