#pragma once

#include <functional>
#include <vector>

#include "hs1d/coeff_field.hpp"
#include "hs1d/common.hpp"

namespace hs1d {

// Cached antiderivatives of the elliptic solve on [l, r]:
//   I_invA(x) = int_l^x 1/A,  I_F(x) = int_l^x F,
//   I_FoverA(x) = int_l^x (int_l^y F) / A(y) dy.
// Composite midpoint per subinterval on a uniform grid merged with the
// field's jump positions, doubled until the endpoint values move by less
// than tol_eff (a posteriori check). Exact for jump-aligned piecewise
// constant fields.
struct QuadCache {
  double l = 0, r = 0;
  double tol_eff = 0;
  std::vector<double> x;  // nodes, x.front() == l, x.back() == r
  std::vector<double> I_invA, I_F, I_FoverA;
  double a_l = 0, a_r = 0;  // A at the endpoints (flux-identity gradients)
  int refinements = 0;

  double interp(const std::vector<double>& I, double xq) const;
};

inline constexpr std::size_t kQuadNodeCeiling = std::size_t{1} << 24;

// tol is per unit length; tol_eff = tol * max(1, r - l).
QuadCache build_cache(const CoefficientField& cf, double l, double r, double tol);

// Spec surfaces: scaled (fast coordinate x/eps) and frozen (coefficients
// pinned at slow x0, solver coordinate is the fast variable).
QuadCache build_cache(const FieldRealization& omega, double eps, double l, double r, double tol);
QuadCache build_cache_frozen(const FieldRealization& omega, double x0, double l, double r,
                             double tol);

// Generic cumulative midpoint integral of a batch-evaluated integrand; the
// same doubling skeleton as build_cache. Returns nodes and cumulative values.
struct CumulativeIntegral {
  std::vector<double> x;
  std::vector<double> I;
  double tol_eff = 0;
  int refinements = 0;

  double total() const { return I.back(); }
  double interp(double xq) const;
};

using FillFn = std::function<void(const double* xs, std::size_t n, double* out)>;

CumulativeIntegral build_cumulative(const FillFn& integrand, double l, double r, double tol,
                                    double max_spacing,
                                    const std::vector<double>& breakpoints);

}  // namespace hs1d
