#include "hs1d/macrosim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

namespace hs1d {

EffectiveFrontModel::EffectiveFrontModel(const EffVelTable& table)
    : table_(&table), field_(table.curves) {
  for (double a : table.curves.a_bar)
    if (!(a > 0)) fail(Errc::OutOfDomain, "effective problem: Abar must be strictly positive");
  for (double f : table.curves.f_bar)
    if (!(f > 0)) fail(Errc::OutOfDomain, "effective problem: Fbar must be strictly positive");
}

double EffectiveFrontModel::boundary_speed(double x, double grad_signed) const {
  return velocity_lookup(*table_, x, grad_signed);
}

double EffectiveFrontModel::fast_cell_extent() const {
  return std::numeric_limits<double>::infinity();
}

namespace {

double table_max_speed(const EffVelTable& t) {
  double v = 0;
  for (const auto& row : t.v_plus)
    for (double x : row) v = std::max(v, x);
  for (const auto& row : t.v_minus)
    for (double x : row) v = std::max(v, x);
  return v;
}

}  // namespace

Trajectory simulate_effective(const EffectiveProblem& prob, std::span<const double> sample_times,
                              const DtPolicy& policy, double quad_tol) {
  EffectiveFrontModel model(prob.table);
  if (prob.table.x_grid.size() > 1) {
    // conservative reach bound against the table hull
    const double reach = table_max_speed(prob.table) * prob.T;
    if (prob.omega0.hull_min() - reach < prob.table.x_grid.front() ||
        prob.omega0.hull_max() + reach > prob.table.x_grid.back()) {
      fail(Errc::OutOfTable,
           "simulate_effective: initial support plus speed*T reach exceeds the table hull");
    }
  }
  return simulate(model, prob.omega0, prob.T, sample_times, policy, quad_tol);
}

namespace {

std::vector<Interval> intersect(const SupportSet& a, const SupportSet& b) {
  std::vector<Interval> out;
  for (const auto& ia : a.intervals()) {
    for (const auto& ib : b.intervals()) {
      const double l = std::max(ia.l, ib.l);
      const double r = std::min(ia.r, ib.r);
      if (r > l) out.push_back({l, r});
    }
  }
  return out;
}

}  // namespace

double pressure_distance(const FrontState& s1, const FrontState& s2, int probes_per_interval) {
  double sup = 0;
  for (const auto& iv : intersect(s1.support, s2.support)) {
    for (int k = 0; k <= probes_per_interval; ++k) {
      const double x = iv.l + (iv.r - iv.l) * k / probes_per_interval;
      double p1 = 0, p2 = 0;
      for (std::size_t i = 0; i < s1.support.size(); ++i) {
        const auto& si = s1.support.intervals()[i];
        if (x >= si.l && x <= si.r) { p1 = s1.profiles[i].pressure(x); break; }
      }
      for (std::size_t i = 0; i < s2.support.size(); ++i) {
        const auto& si = s2.support.intervals()[i];
        if (x >= si.l && x <= si.r) { p2 = s2.profiles[i].pressure(x); break; }
      }
      sup = std::max(sup, std::abs(p1 - p2));
    }
  }
  return sup;
}

void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  unsigned workers = jobs > 0 ? static_cast<unsigned>(jobs) : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex err_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

CrossScaleReport cross_scale_compare(const FieldModel& model, std::span<const double> eps_list,
                                     const SupportSet& omega0, double T,
                                     std::span<const double> sample_times,
                                     std::span<const std::uint64_t> seeds,
                                     const EffVelTable& table, const DtPolicy& policy,
                                     double quad_tol, int jobs) {
  require_valid(model);
  CrossScaleReport rep;
  rep.sample_times.assign(sample_times.begin(), sample_times.end());
  rep.eps_list.assign(eps_list.begin(), eps_list.end());

  EffectiveProblem prob{table, omega0, T};
  rep.macro = simulate_effective(prob, sample_times, policy, quad_tol);

  const std::size_t n_cases = eps_list.size() * seeds.size();
  rep.cases.resize(n_cases);
  parallel_for(n_cases, jobs, [&](std::size_t idx) {
    const std::size_t ie = idx / seeds.size();
    const std::size_t is = idx % seeds.size();
    CrossScaleCase& c = rep.cases[idx];
    c.eps = eps_list[ie];
    c.seed = seeds[is];
    FieldRealization omega(model, c.seed);
    auto micro = simulate(omega, c.eps, omega0, T, sample_times, policy, quad_tol);
    c.support_dist.resize(sample_times.size());
    c.pressure_dist.resize(sample_times.size());
    c.flagged.resize(sample_times.size());
    double worst = 0;
    bool any_unflagged = false;
    for (std::size_t k = 0; k < sample_times.size(); ++k) {
      c.support_dist[k] = hausdorff_distance(micro.states[k].support, rep.macro.states[k].support);
      c.pressure_dist[k] = pressure_distance(micro.states[k], rep.macro.states[k]);
      c.flagged[k] = micro.merge_flagged[k] || rep.macro.merge_flagged[k];
      if (!c.flagged[k]) {
        worst = std::max(worst, c.support_dist[k]);
        any_unflagged = true;
      }
    }
    if (!any_unflagged) {
      for (double d : c.support_dist) worst = std::max(worst, d);
    }
    c.max_support_dist = worst;
  });

  for (std::size_t ie = 0; ie < eps_list.size(); ++ie) {
    double acc = 0, lo = 1e300, hi = 0, accp = 0;
    for (std::size_t is = 0; is < seeds.size(); ++is) {
      const auto& c = rep.cases[ie * seeds.size() + is];
      acc += c.max_support_dist;
      lo = std::min(lo, c.max_support_dist);
      hi = std::max(hi, c.max_support_dist);
      accp += c.pressure_dist.back();
    }
    const auto ns = static_cast<double>(seeds.size());
    rep.mean_support_dist.push_back(acc / ns);
    rep.min_support_dist.push_back(lo);
    rep.max_support_dist.push_back(hi);
    rep.mean_pressure_dist.push_back(accp / ns);
  }
  return rep;
}

}  // namespace hs1d
