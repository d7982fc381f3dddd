#pragma once

#include <span>
#include <string>
#include <vector>

#include "hs1d/elliptic.hpp"
#include "hs1d/support.hpp"

namespace hs1d {

// Adaptive step: dt = min(cell_extent/(steps_per_cell*max_speed), frac_T*T),
// clamped to [dt_min, max_frac_T*T], so an endpoint traverses one fast cell
// in >= steps_per_cell steps. Models without fast structure skip the cell
// term.
struct DtPolicy {
  double steps_per_cell = 10.0;
  double frac_T = 1e-3;
  double dt_min = 1e-12;
  double max_frac_T = 1e-2;
  double collapse_frac = 1e-14;  // StepCollapse below collapse_frac * T
};

struct MergeEvent {
  double time = 0;
  std::vector<int> indices;  // input interval indices that coalesced
};

struct FrontState {
  double time = 0;
  SupportSet support;
  std::vector<PressureProfile> profiles;  // zero-Dirichlet, one per interval
};

struct IntervalRecord {
  double l = 0, r = 0;
  double grad_left = 0, grad_right = 0;
  double speed_left = 0, speed_right = 0;
};

struct Trajectory {
  std::vector<double> sample_times;
  std::vector<FrontState> states;                    // per sample time
  std::vector<std::vector<IntervalRecord>> records;  // per sample time
  std::vector<bool> merge_flagged;                   // sample within one dt of a merge
  std::vector<MergeEvent> events;

  void write_csv(const std::string& path) const;
  void write_merges_jsonl(const std::string& path) const;
};

// Front dynamics: interior coefficients for the quasi-static solve plus the
// outward normal speed at an endpoint with the given signed pressure
// gradient. Micro: speed = B(x, x/eps)|p_x| + G(x, x/eps). Effective: table
// lookup.
class FrontModel {
 public:
  virtual ~FrontModel() = default;
  virtual const CoefficientField& interior() const = 0;
  virtual double boundary_speed(double x, double grad_signed) const = 0;
  // x-extent of one fast-structure cell (eps * fast_scale); +inf when none.
  virtual double fast_cell_extent() const = 0;
};

class MicroFrontModel final : public FrontModel {
 public:
  MicroFrontModel(const FieldRealization& omega, double eps);
  const CoefficientField& interior() const override { return field_; }
  double boundary_speed(double x, double grad_signed) const override;
  double fast_cell_extent() const override;
  double eps() const { return eps_; }

 private:
  const FieldRealization* omega_;
  double eps_;
  ScaledField field_;
};

FrontState make_front_state(const FrontModel& model, double time, const SupportSet& support,
                            double quad_tol);

double endpoint_speed(const FrontModel& model, const FrontState& state, std::size_t interval,
                      Side side);
// Spec surface over a realization.
double endpoint_speed(const FieldRealization& omega, double eps, const FrontState& state,
                      std::size_t interval, Side side);

// One RK2 (midpoint) step; falls back to forward Euler on steps whose half
// stage already requires a merge. Merge events are appended with their time.
FrontState step(const FrontModel& model, const FrontState& state, double dt, double quad_tol,
                std::vector<MergeEvent>* events = nullptr);
FrontState step(const FieldRealization& omega, double eps, const FrontState& state, double dt,
                double quad_tol, std::vector<MergeEvent>* events = nullptr);

Trajectory simulate(const FrontModel& model, const SupportSet& omega0, double T,
                    std::span<const double> sample_times, const DtPolicy& policy,
                    double quad_tol);
Trajectory simulate(const FieldRealization& omega, double eps, const SupportSet& omega0, double T,
                    std::span<const double> sample_times, const DtPolicy& policy = {},
                    double quad_tol = kDefaultQuadTol);

}  // namespace hs1d
