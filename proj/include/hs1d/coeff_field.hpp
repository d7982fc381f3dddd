#pragma once

#include <cstddef>
#include <vector>

#include "hs1d/fields.hpp"

namespace hs1d {

// Interior elliptic coefficients (A, F) as functions of the solver
// coordinate. Three sources: the eps-scaled realization A(x, x/eps), the
// frozen-at-x0 realization a(y) = A(x0, y), and deterministic effective
// curves (Abar, Fbar).
class CoefficientField {
 public:
  virtual ~CoefficientField() = default;

  virtual void fill_af(const double* xs, std::size_t n, double* a, double* f) const = 0;

  // Jump positions in (lo, hi), if any; quadrature grids align to them.
  virtual void append_breakpoints(double lo, double hi, std::vector<double>& out) const {
    (void)lo; (void)hi; (void)out;
  }

  // Maximum grid spacing needed to resolve fast oscillation; +inf when the
  // field is smooth at the solver scale or jump-aligned grids already resolve
  // it exactly.
  virtual double max_spacing() const;

  double a_at(double x) const {
    double a, f;
    fill_af(&x, 1, &a, &f);
    return a;
  }
  double f_at(double x) const {
    double a, f;
    fill_af(&x, 1, &a, &f);
    return f;
  }
};

// A(x, x/eps): the microscopic interior problem.
class ScaledField final : public CoefficientField {
 public:
  ScaledField(const FieldRealization& omega, double eps);
  void fill_af(const double* xs, std::size_t n, double* a, double* f) const override;
  void append_breakpoints(double lo, double hi, std::vector<double>& out) const override;
  double max_spacing() const override;
  double eps() const { return eps_; }

 private:
  const FieldRealization* omega_;
  double eps_, inv_eps_;
};

// a(y) = A(x0, y): coefficients frozen at slow position x0, fast coordinate
// as the solver coordinate.
class FrozenField final : public CoefficientField {
 public:
  FrozenField(const FieldRealization& omega, double x0);
  void fill_af(const double* xs, std::size_t n, double* a, double* f) const override;
  void append_breakpoints(double lo, double hi, std::vector<double>& out) const override;
  double max_spacing() const override;
  double x0() const { return x0_; }

 private:
  const FieldRealization* omega_;
  double x0_;
};

// Piecewise-linear coefficient curves sampled on an x grid; a single node
// means constant-in-x.
struct CoeffCurves {
  std::vector<double> x;
  std::vector<double> a_bar;
  std::vector<double> f_bar;

  double a_at(double xq) const;
  double f_at(double xq) const;
};

class EffectiveField final : public CoefficientField {
 public:
  explicit EffectiveField(CoeffCurves curves);
  void fill_af(const double* xs, std::size_t n, double* a, double* f) const override;
  void append_breakpoints(double lo, double hi, std::vector<double>& out) const override;
  const CoeffCurves& curves() const { return curves_; }

 private:
  CoeffCurves curves_;
};

}  // namespace hs1d
