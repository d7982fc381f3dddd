#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "hs1d/common.hpp"

namespace hs1d {

// Stationary ergodic coefficient quadruple (A, B, F, G) in the fast variable.
// A, F drive the interior elliptic problem; B, G the boundary velocity law
// speed = B|p_x| + G. All bundled kinds have x-independent fast structure;
// the slow coordinate is carried through the evaluation API regardless.

enum class FieldKind { Constant, Periodic, Checkerboard, SmoothBumps };
enum class GMode { StrictlyPositive, IdenticallyZero };

struct FieldBounds {
  double a_min = 0, a_max = 0;
  double b_min = 0, b_max = 0;
  double f_min = 0, f_max = 0;
  double g_max = 0;
};

struct ConstantParams {
  double a = 1, b = 1, f = 1, g = 0;
};

// value(y) = base / (1 + amp * sin(2*pi*(y + phase)/period)), |amp| < 1.
// The reciprocal form makes the harmonic mean of A exactly `base`.
struct PeriodicComponent {
  double base = 1, amp = 0, period = 1, phase = 0;
};
struct PeriodicParams {
  PeriodicComponent a, b, f, g;
};

// iid levels on a lattice of width cell_width, uniform level choice per cell,
// plus a seed-derived uniform global shift in [0, cell_width).
struct CheckerboardParams {
  double cell_width = 1;
  std::vector<double> levels_a, levels_b, levels_f, levels_g;
};

// value(y) = base + amp_k * ((1-s^2)^2 at s=(y-center_k)/bump_width), with
// amp_k ~ U[0, amp] per cell and bump_width <= cell_width/2 so bumps do not
// overlap. The G component stores the square root field; G = s(y)^2 keeps
// sqrt(G) Lipschitz by construction.
struct BumpsComponent {
  double base = 1, amp = 0;
};
struct SmoothBumpsParams {
  double cell_width = 1, bump_width = 0.5;
  BumpsComponent a, b, f, g;
};

struct FieldModel {
  FieldKind kind = FieldKind::Constant;
  std::variant<ConstantParams, PeriodicParams, CheckerboardParams, SmoothBumpsParams> params =
      ConstantParams{};
  FieldBounds bounds;
  GMode g_mode = GMode::IdenticallyZero;
  double g_min = 0;  // required > 0 when StrictlyPositive

  // Characteristic length of the fast structure (cell width / period); 0 when
  // there is none (constant fields).
  double fast_scale() const;
  // True when the fields are piecewise constant in y (jump-aligned quadrature
  // grids apply).
  bool piecewise_constant() const;
};

struct Coeffs {
  double a = 0, b = 0, f = 0, g = 0;
};

// One realization omega: immutable, reentrant, pure in
// (model, seed, shift_offset, direction, x, y). shift() implements the
// translation group tau_z; reflected() implements y -> -y (used for the
// -q branch of the effective velocity).
class FieldRealization {
 public:
  FieldRealization(FieldModel model, std::uint64_t seed);

  Coeffs eval(double x, double y) const;
  double eval_a(double x, double y) const;
  double eval_b(double x, double y) const;
  double eval_f(double x, double y) const;
  double eval_g(double x, double y) const;

  // Batch evaluation at y_i = xs[i]*scale + shift_offset-adjusted offset;
  // dispatches to the SIMD kernels for lattice kinds. Null outputs are
  // skipped. All outputs bit-match the per-point eval_* path.
  void fill(const double* xs, std::size_t n, double scale, double* a, double* b, double* f,
            double* g) const;

  FieldRealization shifted(double z) const;
  FieldRealization reflected() const;

  // Positions (in the same coordinate as eval's y, given the affine map
  // y -> dir*y + offset) where the fields may jump or kink; used to align
  // quadrature grids. Appends all lattice boundaries intersecting [lo, hi].
  void append_breakpoints(double lo, double hi, double scale, std::vector<double>& out) const;

  const FieldModel& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }
  double shift_offset() const { return offset_; }
  double direction() const { return dir_; }
  double lattice_shift() const { return lattice_shift_; }

 private:
  FieldModel model_;
  std::uint64_t seed_;
  double offset_ = 0;   // accumulated tau_z displacement (in field coordinates)
  double dir_ = 1.0;    // +1, or -1 after reflection
  double lattice_shift_ = 0;
  std::uint64_t comp_seed_[4] = {0, 0, 0, 0};  // A, B, F, G
};

// Closed-form single-point expectations, available for analytically tractable
// kinds; nullopt for SmoothBumps (estimated numerically).
std::optional<double> analytic_mean_inv_a(const FieldModel& m);  // E[1/A]
std::optional<double> analytic_mean_f(const FieldModel& m);      // E[F]
std::optional<double> analytic_mean_inv_g(const FieldModel& m);  // E[1/G], strictly positive G

// Assumption report: positivity/boundedness of A, B, F against the declared
// bounds, the G dichotomy, and a finite-difference Lipschitz estimate for
// sqrt(G). Failures are entries, not exceptions; checkerboard regularity is a
// warning ("outside literal" Hoelder/Lipschitz assumptions), not a failure.
struct ValidationEntry {
  std::string name;
  bool passed = true;
  bool warning = false;
  double value = 0;
  std::string message;
};
struct ValidationReport {
  std::vector<ValidationEntry> entries;
  bool all_passed() const;
};

ValidationReport validate_model(const FieldModel& model, std::uint64_t probe_seed = 12345);

// Throws InvalidModel when hard constraints are violated (what validate_model
// reports as failures).
void require_valid(const FieldModel& model);

FieldRealization sample_realization(const FieldModel& model, std::uint64_t seed);

}  // namespace hs1d
