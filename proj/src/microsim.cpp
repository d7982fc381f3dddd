#include "hs1d/microsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace hs1d {

MicroFrontModel::MicroFrontModel(const FieldRealization& omega, double eps)
    : omega_(&omega), eps_(eps), field_(omega, eps) {}

double MicroFrontModel::boundary_speed(double x, double grad_signed) const {
  const double y = x / eps_;
  const double b = omega_->eval_b(x, y);
  const double g = omega_->eval_g(x, y);
  return b * std::abs(grad_signed) + g;
}

double MicroFrontModel::fast_cell_extent() const {
  const double s = omega_->model().fast_scale();
  return s > 0 ? eps_ * s : std::numeric_limits<double>::infinity();
}

FrontState make_front_state(const FrontModel& model, double time, const SupportSet& support,
                            double quad_tol) {
  FrontState st;
  st.time = time;
  st.support = support;
  st.profiles.reserve(support.size());
  for (const auto& iv : support.intervals())
    st.profiles.push_back(solve_zero_dirichlet(model.interior(), iv.l, iv.r, quad_tol));
  return st;
}

double endpoint_speed(const FrontModel& model, const FrontState& state, std::size_t interval,
                      Side side) {
  const auto& iv = state.support.intervals().at(interval);
  const auto& p = state.profiles.at(interval);
  return side == Side::Left ? model.boundary_speed(iv.l, p.grad_left)
                            : model.boundary_speed(iv.r, p.grad_right);
}

double endpoint_speed(const FieldRealization& omega, double eps, const FrontState& state,
                      std::size_t interval, Side side) {
  MicroFrontModel m(omega, eps);
  return endpoint_speed(m, state, interval, side);
}

namespace {

struct Speeds {
  std::vector<double> left, right;
  double max() const {
    double v = 0;
    for (double s : left) v = std::max(v, s);
    for (double s : right) v = std::max(v, s);
    return v;
  }
};

Speeds endpoint_speeds(const FrontModel& model, const FrontState& state) {
  Speeds sp;
  const auto& ivs = state.support.intervals();
  sp.left.resize(ivs.size());
  sp.right.resize(ivs.size());
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    sp.left[i] = model.boundary_speed(ivs[i].l, state.profiles[i].grad_left);
    sp.right[i] = model.boundary_speed(ivs[i].r, state.profiles[i].grad_right);
  }
  return sp;
}

std::vector<Interval> moved(const std::vector<Interval>& ivs, const Speeds& sp, double dt) {
  std::vector<Interval> out(ivs.size());
  for (std::size_t i = 0; i < ivs.size(); ++i)
    out[i] = {ivs[i].l - dt * sp.left[i], ivs[i].r + dt * sp.right[i]};
  return out;
}

bool needs_merge(const std::vector<Interval>& ivs) {
  for (std::size_t i = 0; i + 1 < ivs.size(); ++i)
    if (ivs[i + 1].l - ivs[i].r <= SupportSet::kMergeGap) return true;
  return false;
}

FrontState finish_step(const FrontModel& model, double t_new,
                       const std::vector<Interval>& moved_ivs, double quad_tol,
                       std::vector<MergeEvent>* events) {
  auto outcome = merge_with_groups(moved_ivs);
  if (events != nullptr) {
    for (auto& grp : outcome.groups) events->push_back({t_new, std::move(grp)});
  }
  return make_front_state(model, t_new, outcome.set, quad_tol);
}

FrontState step_with_speeds(const FrontModel& model, const FrontState& state, const Speeds& sp,
                            double dt, double quad_tol, std::vector<MergeEvent>* events) {
  const auto& ivs = state.support.intervals();
  const auto half = moved(ivs, sp, 0.5 * dt);
  if (needs_merge(half)) {
    // merge inside the step: take the Euler move and merge at t + dt
    return finish_step(model, state.time + dt, moved(ivs, sp, dt), quad_tol, events);
  }
  FrontState half_state = make_front_state(model, state.time + 0.5 * dt, SupportSet(half), quad_tol);
  const Speeds sp_half = endpoint_speeds(model, half_state);
  return finish_step(model, state.time + dt, moved(ivs, sp_half, dt), quad_tol, events);
}

}  // namespace

FrontState step(const FrontModel& model, const FrontState& state, double dt, double quad_tol,
                std::vector<MergeEvent>* events) {
  if (!(dt >= 0)) fail(Errc::OutOfDomain, "step: dt must be nonnegative");
  if (dt == 0) return state;
  return step_with_speeds(model, state, endpoint_speeds(model, state), dt, quad_tol, events);
}

FrontState step(const FieldRealization& omega, double eps, const FrontState& state, double dt,
                double quad_tol, std::vector<MergeEvent>* events) {
  MicroFrontModel m(omega, eps);
  return step(m, state, dt, quad_tol, events);
}

namespace {

std::vector<IntervalRecord> record_state(const FrontModel& model, const FrontState& st) {
  std::vector<IntervalRecord> recs;
  recs.reserve(st.support.size());
  const auto& ivs = st.support.intervals();
  for (std::size_t i = 0; i < ivs.size(); ++i) {
    IntervalRecord r;
    r.l = ivs[i].l;
    r.r = ivs[i].r;
    r.grad_left = st.profiles[i].grad_left;
    r.grad_right = st.profiles[i].grad_right;
    r.speed_left = model.boundary_speed(ivs[i].l, r.grad_left);
    r.speed_right = model.boundary_speed(ivs[i].r, r.grad_right);
    recs.push_back(r);
  }
  return recs;
}

}  // namespace

Trajectory simulate(const FrontModel& model, const SupportSet& omega0, double T,
                    std::span<const double> sample_times, const DtPolicy& policy,
                    double quad_tol) {
  if (!(T >= 0)) fail(Errc::OutOfDomain, "simulate: requires T >= 0");
  if (omega0.empty()) fail(Errc::EmptySupport, "simulate: empty initial support");
  if (T == 0) {
    Trajectory traj;
    FrontState state = make_front_state(model, 0.0, omega0, quad_tol);
    for (double ts : sample_times) {
      if (ts != 0.0) continue;
      traj.sample_times.push_back(0.0);
      traj.records.push_back(record_state(model, state));
      traj.merge_flagged.push_back(false);
      traj.states.push_back(state);
    }
    return traj;
  }

  Trajectory traj;
  FrontState state = make_front_state(model, 0.0, omega0, quad_tol);
  std::size_t next_sample = 0;
  double last_dt = 0;

  auto maybe_record = [&](double dt_used) {
    while (next_sample < sample_times.size() &&
           std::abs(state.time - sample_times[next_sample]) <= 1e-12 * std::max(T, 1.0)) {
      traj.sample_times.push_back(sample_times[next_sample]);
      traj.records.push_back(record_state(model, state));
      const bool near_merge =
          !traj.events.empty() &&
          std::abs(traj.events.back().time - state.time) <= std::max(dt_used, last_dt) + 1e-15;
      traj.merge_flagged.push_back(near_merge);
      traj.states.push_back(state);
      ++next_sample;
    }
  };
  maybe_record(0.0);

  const double t_end_tol = 1e-12 * std::max(T, 1.0);
  while (state.time < T - t_end_tol) {
    const Speeds sp = endpoint_speeds(model, state);
    const double vmax = sp.max();
    double dt = policy.frac_T * T;
    const double cell = model.fast_cell_extent();
    if (std::isfinite(cell) && vmax > 0)
      dt = std::min(dt, cell / (policy.steps_per_cell * vmax));
    dt = std::clamp(dt, policy.dt_min, policy.max_frac_T * T);
    if (dt < policy.collapse_frac * T)
      fail(Errc::StepCollapse, "simulate: time step underflow");

    double target = T;
    if (next_sample < sample_times.size()) target = std::min(target, sample_times[next_sample]);
    bool hit_target = false;
    if (state.time + dt >= target - t_end_tol) {
      dt = target - state.time;
      hit_target = true;
    }
    state = step_with_speeds(model, state, sp, dt, quad_tol, &traj.events);
    if (hit_target) state.time = target;
    last_dt = dt;
    maybe_record(dt);
  }
  return traj;
}

Trajectory simulate(const FieldRealization& omega, double eps, const SupportSet& omega0, double T,
                    std::span<const double> sample_times, const DtPolicy& policy,
                    double quad_tol) {
  MicroFrontModel m(omega, eps);
  return simulate(m, omega0, T, sample_times, policy, quad_tol);
}

void Trajectory::write_csv(const std::string& path) const {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (fp == nullptr) fail(Errc::ConfigError, "cannot open " + path + " for writing");
  std::fprintf(fp,
               "time,interval_index,left,right,grad_left,grad_right,speed_left,speed_right\n");
  for (std::size_t s = 0; s < sample_times.size(); ++s) {
    for (std::size_t i = 0; i < records[s].size(); ++i) {
      const auto& r = records[s][i];
      std::fprintf(fp, "%.17g,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", sample_times[s], i, r.l,
                   r.r, r.grad_left, r.grad_right, r.speed_left, r.speed_right);
    }
  }
  std::fclose(fp);
}

void Trajectory::write_merges_jsonl(const std::string& path) const {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (fp == nullptr) fail(Errc::ConfigError, "cannot open " + path + " for writing");
  for (const auto& e : events) {
    std::fprintf(fp, "{\"time\":%.17g,\"indices\":[", e.time);
    for (std::size_t i = 0; i < e.indices.size(); ++i)
      std::fprintf(fp, i == 0 ? "%d" : ",%d", e.indices[i]);
    std::fprintf(fp, "]}\n");
  }
  std::fclose(fp);
}

}  // namespace hs1d
