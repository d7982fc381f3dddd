#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hs1d/coeff_field.hpp"
#include "hs1d/quadrature.hpp"

namespace hs1d {

// Homogenized quantities of the frozen-coefficient cell problem
//   dS/dt = q * b(S) * mu(S) + g(S),   mu = a_bar / a,
// whose long-run average speed defines the effective boundary velocity
// V(x0, q) = 1 / lim T(n)/n. Arrival times are computed by spatial
// quadrature of 1/f (exact reformulation: the speed f is positive), so the
// only error left is the averaging-window truncation.

struct CellOptions {
  double abar_tol = 1e-6;     // relative tol of the window-doubling a_bar estimator
  double abar_window0 = 64;   // initial window (fast-coordinate units)
  double vbar_tol = 1e-3;     // relative schedule-convergence tol for v_bar
  double arrival_tol = 1e-8;  // per-unit-length quadrature tol for 1/f
  bool reflect_g = true;      // reflect G with A, B on the -q branch
  bool prefer_analytic_abar = true;
};

// Windowed harmonic mean a_bar = M / int_{-M}^{0} 1/a(y) dy with window
// doubling until the relative change drops below tol. NoConvergence past
// M = 2^20. (Genuinely random fields stabilize like M^{-1/2}: pass a tol
// matched to the use; analytically tractable models converge immediately.)
double harmonic_mean_a(const FieldRealization& omega, double x0, double window0, double tol);

struct FrozenCell {
  FieldRealization omega;    // a, b source (reflected for the -q branch)
  FieldRealization omega_g;  // g source (differs only when reflect_g=false)
  bool separate_g = false;   // true: read g from omega_g instead of omega
  double x0 = 0;
  double a_bar = 1;
};

FrozenCell make_frozen(const FieldRealization& omega, double x0, const CellOptions& opt = {});

// T(n) = int_{x0}^{x0+n} dS / f(S); additive along the path by construction.
// StalledFront if f <= 0 is sampled.
double arrival_time(const FrozenCell& cell, double q, double n, double tol = 1e-8);
std::vector<double> arrival_times(const FrozenCell& cell, double q, std::span<const double> ns,
                                  double tol = 1e-8);

struct OdeTrajectory {
  std::vector<double> t, s;
};

// RK4 on the frozen ODE; mostly a cross-check against the quadrature route.
OdeTrajectory solve_frozen_ode(const FrozenCell& cell, double q, double T, double dt);

// S_{q,eps}(t) = eps (S(eps^{-1} t) - x0) + x0.
OdeTrajectory rescale_trajectory(const OdeTrajectory& traj, double eps, double x0);

struct CellResult {
  double x0 = 0, q = 0;  // q signed
  double a_bar = 1, v_bar = 0;
  double window = 0;  // largest schedule entry used
  double ci_halfwidth = 0;
  bool converged = true;
  int n_seeds = 0;
  std::vector<double> schedule;
  std::vector<double> v_by_schedule;  // seed-mean at each schedule entry
  std::vector<double> v_by_seed;      // per-seed value at the largest entry
};

std::vector<double> default_schedule(double n_max = 65536.0);

CellResult estimate_vbar(const FieldModel& model, double x0, double q_signed,
                         std::span<const double> n_schedule, int n_seeds,
                         std::uint64_t seed_base, const CellOptions& opt = {});

// Independent Birkhoff-average oracle: V = 1 / E[1/f] with f sampled from the
// single-point marginal. Test/diagnostic route only; the production pipeline
// never calls it.
struct OracleResult {
  double value = 0;
  double std_error = 0;
  int n_samples = 0;
};
OracleResult vbar_oracle(const FieldModel& model, double x0, double q, int n_mc,
                         std::uint64_t seed, const CellOptions& opt = {});

// Conservative local-speed bracket from declared model bounds.
struct SpeedBounds {
  double c_min = 0, c_max = 0, g_max = 0;
  double lower(double q) const { return q * c_min; }
  double upper(double q) const { return q * c_max + g_max; }
};
SpeedBounds speed_bounds(const FieldModel& model, double a_bar);

struct EffVelTable {
  std::vector<double> x_grid;
  std::vector<double> q_grid;
  std::vector<std::vector<double>> v_plus;   // [x][q], slope < 0 endpoints
  std::vector<std::vector<double>> v_minus;  // [x][q], slope > 0 endpoints
  std::vector<double> v0;                    // q=0 anchor per x (harmonic mean of g)
  CoeffCurves curves;                        // a_bar(x), f_bar(x)

  struct Diagnostics {
    double max_monotonicity_violation = 0;  // relative, pre-projection
    double max_scaling_violation = 0;       // relative, pre-projection
    int entries_projected = 0;
    std::vector<std::string> errors;  // per-cell non-convergence notes
  } diag;
};

struct TableOptions {
  CellOptions cell;
  std::vector<double> n_schedule;  // empty -> default_schedule()
  int n_seeds = 8;
  std::uint64_t seed_base = 1;
  double eff_window = 16384;
  int eff_seeds = 8;
  int oracle_mc = 0;  // when > 0, v0 falls back to MC with this many samples
};

EffVelTable build_vel_table(const FieldModel& model, std::span<const double> x_grid,
                            std::span<const double> q_grid, const TableOptions& opt = {});

// Normal boundary speed for a signed pressure slope. Right endpoints carry
// negative slopes and advance through the medium as-is (v_plus); left
// endpoints carry positive slopes and see the reflected medium (v_minus).
// Below the q grid: linear through the q=0 anchor. Above: OutOfTable.
double velocity_lookup(const EffVelTable& t, double x, double grad_signed);

struct EffCoeffDiag {
  std::vector<double> mc_inv_a, mc_f;  // per x-grid point, seed means
  bool analytic_a = false, analytic_f = false;
};

// 1/Abar(x) = E[1/A(x,0,.)], Fbar(x) = E[F(x,0,.)]: analytic closed forms
// where available, spatial-window Monte Carlo otherwise (and always as a
// diagnostic).
CoeffCurves effective_coeffs(const FieldModel& model, std::span<const double> x_grid, int n_seeds,
                             double window, std::uint64_t seed_base,
                             EffCoeffDiag* diag = nullptr);

// Pool-adjacent-violators projection onto nondecreasing sequences.
void pav_nondecreasing(std::vector<double>& v);

}  // namespace hs1d
