#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "hs1d/cell.hpp"
#include "hs1d/microsim.hpp"

namespace hs1d {

// Homogenized front tracking: interior solves use (Abar, Fbar) curves, the
// boundary advances with the tabulated effective velocity.
struct EffectiveProblem {
  EffVelTable table;
  SupportSet omega0;
  double T = 1;
};

class EffectiveFrontModel final : public FrontModel {
 public:
  explicit EffectiveFrontModel(const EffVelTable& table);
  const CoefficientField& interior() const override { return field_; }
  double boundary_speed(double x, double grad_signed) const override;
  double fast_cell_extent() const override;

 private:
  const EffVelTable* table_;
  EffectiveField field_;
};

Trajectory simulate_effective(const EffectiveProblem& prob, std::span<const double> sample_times,
                              const DtPolicy& policy = {}, double quad_tol = kDefaultQuadTol);

struct CrossScaleCase {
  double eps = 0;
  std::uint64_t seed = 0;
  std::vector<double> support_dist;   // per sample time
  std::vector<double> pressure_dist;  // sup-norm on the support intersection
  std::vector<bool> flagged;          // sample adjacent to a merge on either side
  double max_support_dist = 0;        // over unflagged samples
};

struct CrossScaleReport {
  std::vector<double> sample_times;
  std::vector<double> eps_list;
  std::vector<CrossScaleCase> cases;        // eps-major, seed-minor order
  std::vector<double> mean_support_dist;    // per eps, mean over seeds of max_support_dist
  std::vector<double> min_support_dist;     // per eps
  std::vector<double> max_support_dist;     // per eps
  std::vector<double> mean_pressure_dist;   // per eps, final unflagged sample
  Trajectory macro;
};

// Runs macrosim once and microsim per (eps, seed); distances of supports
// (Hausdorff) and pressures (sup over the support intersection) at each
// sample time. Samples within one step of a merge are flagged and excluded
// from the per-case maximum.
CrossScaleReport cross_scale_compare(const FieldModel& model, std::span<const double> eps_list,
                                     const SupportSet& omega0, double T,
                                     std::span<const double> sample_times,
                                     std::span<const std::uint64_t> seeds,
                                     const EffVelTable& table, const DtPolicy& policy = {},
                                     double quad_tol = kDefaultQuadTol, int jobs = 0);

// sup |p1 - p2| sampled over the intersection of the supports.
double pressure_distance(const FrontState& s1, const FrontState& s2, int probes_per_interval = 256);

// Bounded worker pool over [0, n); results must be written by index.
void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace hs1d
