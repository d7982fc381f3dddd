#pragma once

#include <vector>

#include "hs1d/quadrature.hpp"

namespace hs1d {

enum class Side { Left, Right };

// Exact 1D elliptic solution -(A p_x)_x = F on [l, r] with Dirichlet data
// (a, b), in quadrature form:
//   p(x) = a + C * I_invA(x) - I_FoverA(x),
//   C    = (b - a + I_FoverA(r)) / I_invA(r),
//   p_x  = (C - I_F(x)) / A(x)          (flux identity: A p_x + I_F = C).
// Boundary gradients come from the flux identity, never finite differences.
struct PressureProfile {
  double l = 0, r = 0;
  double bc_a = 0, bc_b = 0;
  double flux_const = 0;
  double grad_left = 0, grad_right = 0;
  QuadCache cache;
  std::vector<double> pvals;  // pressure at cache nodes

  double pressure(double x) const;  // OutOfDomain outside [l, r]
};

PressureProfile solve_dirichlet(const CoefficientField& cf, double l, double r, double a, double b,
                                double tol);
PressureProfile solve_zero_dirichlet(const CoefficientField& cf, double l, double r, double tol);

// Spec surfaces over realizations (scaled and frozen coefficient modes).
PressureProfile solve_dirichlet(const FieldRealization& omega, double eps, double l, double r,
                                double a, double b, double tol);
PressureProfile solve_zero_dirichlet(const FieldRealization& omega, double eps, double l, double r,
                                     double tol);
PressureProfile solve_dirichlet_frozen(const FieldRealization& omega, double x0, double l,
                                       double r, double a, double b, double tol);

double boundary_gradient(const PressureProfile& p, Side side);

inline double eval_pressure(const PressureProfile& p, double x) { return p.pressure(x); }

inline constexpr double kDefaultQuadTol = 1e-10;

}  // namespace hs1d
