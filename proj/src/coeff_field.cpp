#include "hs1d/coeff_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace hs1d {

double CoefficientField::max_spacing() const { return std::numeric_limits<double>::infinity(); }

ScaledField::ScaledField(const FieldRealization& omega, double eps)
    : omega_(&omega), eps_(eps), inv_eps_(1.0 / eps) {}

void ScaledField::fill_af(const double* xs, std::size_t n, double* a, double* f) const {
  omega_->fill(xs, n, inv_eps_, a, nullptr, f, nullptr);
}

void ScaledField::append_breakpoints(double lo, double hi, std::vector<double>& out) const {
  omega_->append_breakpoints(lo, hi, inv_eps_, out);
}

double ScaledField::max_spacing() const {
  // Jump-aligned grids resolve piecewise-constant fields exactly; smooth fast
  // structure needs spacing <= eps * (structure scale) / 16.
  const FieldModel& m = omega_->model();
  if (m.piecewise_constant() || m.fast_scale() == 0.0)
    return std::numeric_limits<double>::infinity();
  return eps_ * m.fast_scale() / 16.0;
}

FrozenField::FrozenField(const FieldRealization& omega, double x0) : omega_(&omega), x0_(x0) {}

void FrozenField::fill_af(const double* xs, std::size_t n, double* a, double* f) const {
  omega_->fill(xs, n, 1.0, a, nullptr, f, nullptr);
}

void FrozenField::append_breakpoints(double lo, double hi, std::vector<double>& out) const {
  omega_->append_breakpoints(lo, hi, 1.0, out);
}

double FrozenField::max_spacing() const {
  const FieldModel& m = omega_->model();
  if (m.piecewise_constant() || m.fast_scale() == 0.0)
    return std::numeric_limits<double>::infinity();
  return m.fast_scale() / 16.0;
}

namespace {

double pl_interp(const std::vector<double>& xs, const std::vector<double>& vs, double xq) {
  if (xs.size() == 1) return vs[0];
  if (xq <= xs.front()) return vs.front();
  if (xq >= xs.back()) return vs.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), xq);
  const std::size_t j = static_cast<std::size_t>(it - xs.begin());
  const double t = (xq - xs[j - 1]) / (xs[j] - xs[j - 1]);
  return vs[j - 1] + t * (vs[j] - vs[j - 1]);
}

}  // namespace

double CoeffCurves::a_at(double xq) const { return pl_interp(x, a_bar, xq); }
double CoeffCurves::f_at(double xq) const { return pl_interp(x, f_bar, xq); }

EffectiveField::EffectiveField(CoeffCurves curves) : curves_(std::move(curves)) {}

void EffectiveField::fill_af(const double* xs, std::size_t n, double* a, double* f) const {
  for (std::size_t i = 0; i < n; ++i) {
    if (a != nullptr) a[i] = curves_.a_at(xs[i]);
    if (f != nullptr) f[i] = curves_.f_at(xs[i]);
  }
}

void EffectiveField::append_breakpoints(double lo, double hi, std::vector<double>& out) const {
  for (double xg : curves_.x) {
    if (xg > lo && xg < hi) out.push_back(xg);
  }
}

}  // namespace hs1d
