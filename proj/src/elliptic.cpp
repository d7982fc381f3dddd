#include "hs1d/elliptic.hpp"

#include <algorithm>
#include <cmath>

namespace hs1d {

namespace {

PressureProfile assemble(QuadCache cache, double a, double b) {
  PressureProfile p;
  p.l = cache.l;
  p.r = cache.r;
  p.bc_a = a;
  p.bc_b = b;
  p.flux_const = (b - a + cache.I_FoverA.back()) / cache.I_invA.back();
  p.grad_left = p.flux_const / cache.a_l;
  p.grad_right = (p.flux_const - cache.I_F.back()) / cache.a_r;
  p.pvals.resize(cache.x.size());
  for (std::size_t i = 0; i < cache.x.size(); ++i)
    p.pvals[i] = a + p.flux_const * cache.I_invA[i] - cache.I_FoverA[i];
  p.pvals.front() = a;
  // b is reproduced up to rounding of the C formula
  if (std::abs(p.pvals.back() - b) > cache.tol_eff)
    fail(Errc::TolNotReached, "solve_dirichlet: right boundary value not reproduced");
  p.pvals.back() = b;
  p.cache = std::move(cache);
  return p;
}

}  // namespace

PressureProfile solve_dirichlet(const CoefficientField& cf, double l, double r, double a, double b,
                                double tol) {
  if (!(a >= 0.0 && b >= 0.0)) fail(Errc::OutOfDomain, "solve_dirichlet: requires a, b >= 0");
  return assemble(build_cache(cf, l, r, tol), a, b);
}

PressureProfile solve_zero_dirichlet(const CoefficientField& cf, double l, double r, double tol) {
  PressureProfile p = assemble(build_cache(cf, l, r, tol), 0.0, 0.0);
  // With F > 0 the zero-data solution is positive inside and the gradients
  // point outward; a violation signals a broken quadrature, not bad input.
  if (p.cache.I_F.back() > 0.0) {
    if (!(p.grad_left > 0.0) || !(p.grad_right < 0.0))
      fail(Errc::TolNotReached, "solve_zero_dirichlet: boundary gradients have wrong sign");
  }
  return p;
}

PressureProfile solve_dirichlet(const FieldRealization& omega, double eps, double l, double r,
                                double a, double b, double tol) {
  ScaledField cf(omega, eps);
  return solve_dirichlet(cf, l, r, a, b, tol);
}

PressureProfile solve_zero_dirichlet(const FieldRealization& omega, double eps, double l, double r,
                                     double tol) {
  ScaledField cf(omega, eps);
  return solve_zero_dirichlet(cf, l, r, tol);
}

PressureProfile solve_dirichlet_frozen(const FieldRealization& omega, double x0, double l,
                                       double r, double a, double b, double tol) {
  FrozenField cf(omega, x0);
  return solve_dirichlet(cf, l, r, a, b, tol);
}

double boundary_gradient(const PressureProfile& p, Side side) {
  return side == Side::Left ? p.grad_left : p.grad_right;
}

double PressureProfile::pressure(double x) const {
  const double slack = 1e-12 * std::max(1.0, r - l);
  if (x < l - slack || x > r + slack)
    fail(Errc::OutOfDomain, "eval_pressure: x outside the profile interval");
  x = std::clamp(x, l, r);
  if (x == l) return bc_a;
  if (x == r) return bc_b;
  const auto it = std::upper_bound(cache.x.begin(), cache.x.end(), x);
  const std::size_t j = static_cast<std::size_t>(it - cache.x.begin());
  const double t = (x - cache.x[j - 1]) / (cache.x[j] - cache.x[j - 1]);
  const double v = pvals[j - 1] + t * (pvals[j] - pvals[j - 1]);
  // interpolation can dip a hair below zero right at the contact points
  return (v < 0.0 && v > -cache.tol_eff) ? 0.0 : v;
}

}  // namespace hs1d
