#include <atomic>
#include <chrono>
#include <cmath>

#include "hs1d/harness.hpp"

namespace hs1d {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

[[noreturn]] void cfg_fail(const std::string& what) { fail(Errc::ConfigError, what); }

std::vector<std::uint64_t> case_seeds(const ExperimentConfig& cfg) {
  std::vector<std::uint64_t> s;
  s.reserve(cfg.seeds.size());
  for (auto e : cfg.seeds) s.push_back(cfg.model_seed + e);
  return s;
}

CellOptions cell_options(const ExperimentConfig& cfg) {
  CellOptions opt;
  opt.abar_tol = cfg.tol.abar_rel;
  opt.vbar_tol = cfg.tol.vbar_rel;
  opt.arrival_tol = cfg.tol.arrival_tol;
  opt.reflect_g = cfg.cell.reflect_g;
  return opt;
}

TableOptions table_options(const ExperimentConfig& cfg) {
  TableOptions t;
  t.cell = cell_options(cfg);
  t.n_schedule = default_schedule(cfg.cell.n_max);
  t.n_seeds = cfg.cell.n_seeds;
  t.seed_base = cfg.model_seed;
  t.eff_window = cfg.cell.window;
  t.eff_seeds = cfg.cell.n_seeds;
  t.oracle_mc = cfg.cell.oracle_mc;
  return t;
}

EffVelTable make_or_load_table(const ExperimentConfig& cfg) {
  if (!cfg.table_path.empty()) return table_from_json(load_json_file(cfg.table_path));
  if (cfg.cell.q_grid.empty())
    cfg_fail(cfg.kind + ": cell.q_grid is required to build the velocity table");
  return build_vel_table(cfg.model, cfg.cell.x_grid, cfg.cell.q_grid, table_options(cfg));
}

// Monotone decrease across the eps ladder, permitting one adjacent inversion
// if it stays within the seed spread at the later eps.
bool decreasing_with_one_spread_inversion(const std::vector<double>& mean,
                                          const std::vector<double>& spread, json& detail) {
  int inversions = 0;
  bool ok = true;
  for (std::size_t i = 1; i < mean.size(); ++i) {
    if (mean[i] < mean[i - 1]) continue;
    ++inversions;
    if (inversions > 1 || mean[i] - mean[i - 1] > spread[i]) ok = false;
  }
  detail["inversions"] = inversions;
  return ok;
}

std::string csv_header(const char* cols) { return std::string(cols) + "\n"; }

}  // namespace

MetricsReport run_interior_homog(const ExperimentConfig& cfg) {
  if (cfg.eps_list.empty()) cfg_fail("interior_homog: eps_list required");
  MetricsReport rep;
  rep.experiment = "interior_homog";

  const auto t0 = Clock::now();
  const std::vector<double> xg = {0.0};
  auto curves = effective_coeffs(cfg.model, xg, cfg.cell.n_seeds, cfg.cell.window, cfg.model_seed);
  EffectiveField eff(curves);
  auto ubar = solve_dirichlet(eff, cfg.domain.l, cfg.domain.r, cfg.bc_a, cfg.bc_b,
                              cfg.tol.quad_tol);
  const double t_eff = seconds_since(t0);

  const auto seeds = case_seeds(cfg);
  const std::size_t ne = cfg.eps_list.size(), ns = seeds.size();
  std::vector<double> errs(ne * ns, 0.0);
  std::vector<double> case_time(ne * ns, 0.0);
  parallel_for(ne * ns, cfg.jobs, [&](std::size_t idx) {
    const auto tc = Clock::now();
    const double eps = cfg.eps_list[idx / ns];
    FieldRealization w(cfg.model, seeds[idx % ns]);
    auto u = solve_dirichlet(w, eps, cfg.domain.l, cfg.domain.r, cfg.bc_a, cfg.bc_b,
                             cfg.tol.quad_tol);
    double sup = 0;
    const int probes = 512;
    for (int k = 0; k <= probes; ++k) {
      const double x = cfg.domain.l + (cfg.domain.r - cfg.domain.l) * k / probes;
      sup = std::max(sup, std::abs(u.pressure(x) - ubar.pressure(x)));
    }
    errs[idx] = sup;
    case_time[idx] = seconds_since(tc);
  });

  std::string csv = csv_header("eps,seed,sup_error");
  std::vector<double> mean(ne, 0), lo(ne, 1e300), hi(ne, 0);
  for (std::size_t ie = 0; ie < ne; ++ie) {
    double rt = 0;
    for (std::size_t is = 0; is < ns; ++is) {
      const double e = errs[ie * ns + is];
      mean[ie] += e / static_cast<double>(ns);
      lo[ie] = std::min(lo[ie], e);
      hi[ie] = std::max(hi[ie], e);
      rt += case_time[ie * ns + is];
      csv += fmt_double(cfg.eps_list[ie]) + "," + std::to_string(cfg.seeds[is]) + "," +
             fmt_double(e) + "\n";
    }
    CaseRecord c;
    c.name = "eps_" + fmt_double(cfg.eps_list[ie]);
    c.inputs = {{"eps", cfg.eps_list[ie]}, {"n_seeds", ns}};
    c.metrics = {{"mean_sup_error", mean[ie]}, {"min", lo[ie]}, {"max", hi[ie]}};
    c.threshold = {{"final_error", cfg.tol.final_error}};
    c.runtime_s = rt;
    rep.cases.push_back(std::move(c));
  }

  std::vector<double> spread(ne);
  for (std::size_t ie = 0; ie < ne; ++ie) spread[ie] = hi[ie] - lo[ie];
  json mono_detail;
  const bool mono = decreasing_with_one_spread_inversion(mean, spread, mono_detail);
  const bool final_ok = mean.back() < cfg.tol.final_error;
  rep.cases.front().runtime_s += t_eff;

  CaseRecord verdict;
  verdict.name = "homogenization";
  verdict.inputs = {{"eps_list", cfg.eps_list}};
  verdict.metrics = {{"mean_errors", mean},
                     {"final_mean_error", mean.back()},
                     {"monotone", mono_detail}};
  verdict.threshold = {{"final_error", cfg.tol.final_error}, {"monotone_decrease", true}};
  verdict.passed = mono && final_ok;
  rep.cases.push_back(verdict);
  rep.passed = verdict.passed;
  rep.summary = {{"abar", curves.a_bar[0]}, {"fbar", curves.f_bar[0]}};

  ensure_dir(cfg.out_dir);
  write_text_file(cfg.out_dir + "/errors.csv", csv);
  std::string two = csv_header("eps,mean_sup_error");
  for (std::size_t ie = 0; ie < ne; ++ie)
    two += fmt_double(cfg.eps_list[ie]) + "," + fmt_double(mean[ie]) + "\n";
  write_text_file(cfg.out_dir + "/eps_vs_error.csv", two);
  return rep;
}

MetricsReport run_comparison(const ExperimentConfig& cfg) {
  if (cfg.omega0.empty() || cfg.omega0_inner.empty())
    cfg_fail("comparison: omega0 and omega0_inner required");
  if (cfg.eps_list.empty() || cfg.sample_times.empty())
    cfg_fail("comparison: eps_list and sample_times required");
  const SupportSet outer0{cfg.omega0};
  const SupportSet inner0{cfg.omega0_inner};
  if (!compactly_inside(inner0, outer0))
    cfg_fail("comparison: omega0_inner must be compactly inside omega0");

  MetricsReport rep;
  rep.experiment = "comparison";
  const auto seeds = case_seeds(cfg);
  const std::size_t ne = cfg.eps_list.size(), ns = seeds.size(), nt = cfg.sample_times.size();

  struct Row {
    double gap = 1e300;
    int violations = 0;
    double runtime = 0;
    std::vector<double> gaps;  // per sample time
  };
  std::vector<Row> rows(ne * ns);
  parallel_for(ne * ns, cfg.jobs, [&](std::size_t idx) {
    const auto tc = Clock::now();
    const double eps = cfg.eps_list[idx / ns];
    FieldRealization w(cfg.model, seeds[idx % ns]);
    auto ti = simulate(w, eps, inner0, cfg.T, cfg.sample_times, DtPolicy{}, cfg.tol.quad_tol);
    auto to = simulate(w, eps, outer0, cfg.T, cfg.sample_times, DtPolicy{}, cfg.tol.quad_tol);
    Row& row = rows[idx];
    for (std::size_t k = 0; k < nt; ++k) {
      double gap = 1e300;
      for (const auto& iv : ti.states[k].support.intervals()) {
        double best = -1e300;
        for (const auto& ov : to.states[k].support.intervals())
          best = std::max(best, std::min(iv.l - ov.l, ov.r - iv.r));
        gap = std::min(gap, best);
      }
      row.gaps.push_back(gap);
      row.gap = std::min(row.gap, gap);
      if (!(gap > 0)) ++row.violations;
    }
    row.runtime = seconds_since(tc);
  });

  std::string csv = csv_header("eps,seed,time,gap");
  int total_violations = 0;
  double min_gap = 1e300;
  for (std::size_t ie = 0; ie < ne; ++ie) {
    int viol = 0;
    double gap = 1e300, rt = 0;
    for (std::size_t is = 0; is < ns; ++is) {
      const Row& row = rows[ie * ns + is];
      viol += row.violations;
      gap = std::min(gap, row.gap);
      rt += row.runtime;
      for (std::size_t k = 0; k < nt; ++k)
        csv += fmt_double(cfg.eps_list[ie]) + "," + std::to_string(cfg.seeds[is]) + "," +
               fmt_double(cfg.sample_times[k]) + "," + fmt_double(row.gaps[k]) + "\n";
    }
    CaseRecord c;
    c.name = "eps_" + fmt_double(cfg.eps_list[ie]);
    c.inputs = {{"eps", cfg.eps_list[ie]}, {"n_seeds", ns}};
    c.metrics = {{"violations", viol}, {"min_gap", gap}};
    c.threshold = {{"violations", 0}};
    c.passed = viol == 0;
    c.runtime_s = rt;
    rep.cases.push_back(std::move(c));
    total_violations += viol;
    min_gap = std::min(min_gap, gap);
  }
  rep.passed = total_violations == 0;
  rep.summary = {{"total_violations", total_violations}, {"min_gap", min_gap}};
  ensure_dir(cfg.out_dir);
  write_text_file(cfg.out_dir + "/nesting.csv", csv);
  return rep;
}

namespace {

FieldModel scale_b(FieldModel m, double factor) {
  switch (m.kind) {
    case FieldKind::Constant:
      std::get<ConstantParams>(m.params).b *= factor;
      break;
    case FieldKind::Periodic:
      std::get<PeriodicParams>(m.params).b.base *= factor;
      break;
    case FieldKind::Checkerboard:
      for (double& v : std::get<CheckerboardParams>(m.params).levels_b) v *= factor;
      break;
    case FieldKind::SmoothBumps: {
      auto& p = std::get<SmoothBumpsParams>(m.params);
      p.b.base *= factor;
      p.b.amp *= factor;
      break;
    }
  }
  m.bounds.b_min *= factor;
  m.bounds.b_max *= factor;
  return m;
}

}  // namespace

MetricsReport run_cell_suite(const ExperimentConfig& cfg) {
  if (cfg.cell.q_grid.empty()) cfg_fail("cell: cell.q_grid required");
  MetricsReport rep;
  rep.experiment = "cell";

  const auto t0 = Clock::now();
  EffVelTable table = build_vel_table(cfg.model, cfg.cell.x_grid, cfg.cell.q_grid,
                                      table_options(cfg));
  const double t_table = seconds_since(t0);
  ensure_dir(cfg.out_dir);
  write_text_file(cfg.out_dir + "/table.json", table_to_json(table).dump(2) + "\n");

  const auto& qg = table.q_grid;
  // bounds bracket per entry
  bool bounds_ok = true;
  double worst_margin = 1e300;
  for (std::size_t i = 0; i < table.x_grid.size(); ++i) {
    const auto sb = speed_bounds(cfg.model, table.curves.a_bar[i]);
    for (std::size_t j = 0; j < qg.size(); ++j) {
      for (const auto* row : {&table.v_plus[i], &table.v_minus[i]}) {
        const double v = (*row)[j];
        const double m = std::min(v - sb.lower(qg[j]), sb.upper(qg[j]) - v);
        worst_margin = std::min(worst_margin, m);
        if (m < -1e-9 * std::abs(v)) bounds_ok = false;
      }
    }
  }
  {
    CaseRecord c;
    c.name = "speed_bounds";
    c.inputs = {{"q_grid", qg}};
    c.metrics = {{"worst_margin", worst_margin}};
    c.threshold = {{"bracket", "q*c_min <= v <= q*C_max + g_max"}};
    c.passed = bounds_ok;
    c.runtime_s = t_table;
    rep.cases.push_back(std::move(c));
  }

  // monotonicity and scaling: zero violations after projection, small before
  bool post_ok = true;
  for (std::size_t i = 0; i < table.x_grid.size(); ++i) {
    for (const auto* row : {&table.v_plus[i], &table.v_minus[i]}) {
      for (std::size_t j = 0; j + 1 < qg.size(); ++j) {
        if ((*row)[j] > (*row)[j + 1] * (1 + 1e-14)) post_ok = false;
        if ((*row)[j + 1] > (*row)[j] * (qg[j + 1] / qg[j]) * (1 + 1e-14)) post_ok = false;
      }
    }
  }
  {
    CaseRecord c;
    c.name = "monotonicity_and_scaling";
    c.metrics = {{"pre_monotonicity_violation", table.diag.max_monotonicity_violation},
                 {"pre_scaling_violation", table.diag.max_scaling_violation},
                 {"entries_projected", table.diag.entries_projected},
                 {"post_violations", post_ok ? 0 : 1}};
    c.threshold = {{"post_violations", 0}, {"pre_violation_max", cfg.tol.scaling_pre}};
    c.passed = post_ok && table.diag.max_monotonicity_violation <= cfg.tol.scaling_pre &&
               table.diag.max_scaling_violation <= cfg.tol.scaling_pre;
    rep.cases.push_back(std::move(c));
  }

  // oracle agreement at the first x node
  std::string csv = csv_header("x,q,branch,v_bar,oracle,oracle_se");
  bool oracle_ok = true;
  double worst_rel = 0;
  {
    const auto tc = Clock::now();
    for (std::size_t j = 0; j < qg.size(); ++j) {
      const auto orc = vbar_oracle(cfg.model, table.x_grid[0], qg[j], cfg.cell.oracle_mc,
                                   cfg.model_seed ^ 0xC0FFEEull, cell_options(cfg));
      for (const char* branch : {"plus", "minus"}) {
        const double v = branch[0] == 'p' ? table.v_plus[0][j] : table.v_minus[0][j];
        const double dev = std::abs(v - orc.value);
        const double tol = std::max(cfg.tol.oracle_rel * std::abs(orc.value),
                                    3.0 * orc.std_error);
        worst_rel = std::max(worst_rel, dev / std::abs(orc.value));
        if (dev > tol) oracle_ok = false;
        csv += fmt_double(table.x_grid[0]) + "," + fmt_double(qg[j]) + "," + branch + "," +
               fmt_double(v) + "," + fmt_double(orc.value) + "," + fmt_double(orc.std_error) +
               "\n";
      }
    }
    CaseRecord c;
    c.name = "oracle_agreement";
    c.inputs = {{"n_mc", cfg.cell.oracle_mc}};
    c.metrics = {{"worst_rel_deviation", worst_rel}};
    c.threshold = {{"rel", cfg.tol.oracle_rel}, {"or", "3 standard errors"}};
    c.passed = oracle_ok;
    c.runtime_s = seconds_since(tc);
    rep.cases.push_back(std::move(c));
  }

  // continuity probe: reported, not asserted
  {
    const auto tc = Clock::now();
    const double factor = 1.05;
    const double delta = (factor - 1.0) * cfg.model.bounds.b_max;
    const double qprobe = qg[qg.size() / 2];
    auto sched = default_schedule(std::min(cfg.cell.n_max, 16384.0));
    auto base = estimate_vbar(cfg.model, table.x_grid[0], qprobe, sched,
                              std::min(cfg.cell.n_seeds, 4), cfg.model_seed, cell_options(cfg));
    auto pert = estimate_vbar(scale_b(cfg.model, factor), table.x_grid[0], qprobe, sched,
                              std::min(cfg.cell.n_seeds, 4), cfg.model_seed, cell_options(cfg));
    const double c_emp = std::abs(pert.v_bar - base.v_bar) / (delta * (1.0 + qprobe));
    CaseRecord c;
    c.name = "continuity_probe";
    c.inputs = {{"q", qprobe}, {"delta_sup_norm", delta}};
    c.metrics = {{"v_base", base.v_bar}, {"v_perturbed", pert.v_bar}, {"C_empirical", c_emp}};
    c.threshold = {{"asserted", false}};
    c.runtime_s = seconds_since(tc);
    rep.cases.push_back(std::move(c));
  }

  {
    CaseRecord c;
    c.name = "per_cell_convergence";
    c.metrics = {{"errors", table.diag.errors}};
    c.threshold = {{"errors", "none"}};
    c.passed = table.diag.errors.empty();
    rep.cases.push_back(std::move(c));
  }

  rep.passed = true;
  for (const auto& c : rep.cases) rep.passed = rep.passed && c.passed;
  rep.summary = {{"a_bar", table.curves.a_bar},
                 {"f_bar", table.curves.f_bar},
                 {"v0", table.v0}};
  write_text_file(cfg.out_dir + "/cell_results.csv", csv);
  return rep;
}

MetricsReport run_full_sweep(const ExperimentConfig& cfg) {
  if (cfg.eps_list.empty() || cfg.omega0.empty() || cfg.sample_times.empty())
    cfg_fail("full_sweep: eps_list, omega0, sample_times required");
  MetricsReport rep;
  rep.experiment = "full_sweep";

  const auto t0 = Clock::now();
  EffVelTable table = make_or_load_table(cfg);
  const double t_table = seconds_since(t0);
  ensure_dir(cfg.out_dir);
  write_text_file(cfg.out_dir + "/table.json", table_to_json(table).dump(2) + "\n");

  const auto seeds = case_seeds(cfg);
  const auto t1 = Clock::now();
  auto rep_cs = cross_scale_compare(cfg.model, cfg.eps_list, SupportSet(cfg.omega0), cfg.T,
                                    cfg.sample_times, seeds, table, DtPolicy{}, cfg.tol.quad_tol,
                                    cfg.jobs);
  const double t_runs = seconds_since(t1);

  std::string csv = csv_header("eps,seed,time,support_dist,pressure_dist,flagged");
  for (const auto& c : rep_cs.cases) {
    for (std::size_t k = 0; k < rep_cs.sample_times.size(); ++k) {
      csv += fmt_double(c.eps) + "," + std::to_string(c.seed - cfg.model_seed) + "," +
             fmt_double(rep_cs.sample_times[k]) + "," + fmt_double(c.support_dist[k]) + "," +
             fmt_double(c.pressure_dist[k]) + "," + (c.flagged[k] ? "1" : "0") + "\n";
    }
  }
  write_text_file(cfg.out_dir + "/distances.csv", csv);
  std::string two = csv_header("eps,mean_support_dist");
  for (std::size_t ie = 0; ie < cfg.eps_list.size(); ++ie)
    two += fmt_double(cfg.eps_list[ie]) + "," + fmt_double(rep_cs.mean_support_dist[ie]) + "\n";
  write_text_file(cfg.out_dir + "/eps_vs_distance.csv", two);

  for (std::size_t ie = 0; ie < cfg.eps_list.size(); ++ie) {
    CaseRecord c;
    c.name = "eps_" + fmt_double(cfg.eps_list[ie]);
    c.inputs = {{"eps", cfg.eps_list[ie]}, {"n_seeds", seeds.size()}};
    c.metrics = {{"mean_support_dist", rep_cs.mean_support_dist[ie]},
                 {"min", rep_cs.min_support_dist[ie]},
                 {"max", rep_cs.max_support_dist[ie]},
                 {"mean_final_pressure_dist", rep_cs.mean_pressure_dist[ie]}};
    c.threshold = {{"final_distance", cfg.tol.final_distance}};
    c.runtime_s = ie == 0 ? t_table + t_runs : 0.0;
    rep.cases.push_back(std::move(c));
  }

  std::vector<double> spread(cfg.eps_list.size());
  for (std::size_t ie = 0; ie < cfg.eps_list.size(); ++ie)
    spread[ie] = rep_cs.max_support_dist[ie] - rep_cs.min_support_dist[ie];
  json mono_detail;
  const bool mono = decreasing_with_one_spread_inversion(rep_cs.mean_support_dist, spread,
                                                         mono_detail);
  const bool final_ok = rep_cs.mean_support_dist.back() < cfg.tol.final_distance;

  CaseRecord verdict;
  verdict.name = "homogenization_sweep";
  verdict.inputs = {{"eps_list", cfg.eps_list}, {"T", cfg.T}};
  verdict.metrics = {{"mean_support_dist", rep_cs.mean_support_dist},
                     {"final_mean_distance", rep_cs.mean_support_dist.back()},
                     {"monotone", mono_detail}};
  verdict.threshold = {{"final_distance", cfg.tol.final_distance}, {"monotone_decrease", true}};
  verdict.passed = mono && final_ok;
  rep.cases.push_back(verdict);
  rep.passed = verdict.passed;
  rep.summary = {{"sample_times", rep_cs.sample_times}};
  return rep;
}

MetricsReport run_simulate(const ExperimentConfig& cfg) {
  if (cfg.eps_list.size() != 1) cfg_fail("simulate: eps_list must contain exactly one value");
  if (cfg.omega0.empty() || cfg.sample_times.empty())
    cfg_fail("simulate: omega0 and sample_times required");
  MetricsReport rep;
  rep.experiment = "simulate";
  ensure_dir(cfg.out_dir);
  const auto seeds = case_seeds(cfg);
  std::vector<CaseRecord> cases(seeds.size());
  parallel_for(seeds.size(), cfg.jobs, [&](std::size_t is) {
    const auto tc = Clock::now();
    FieldRealization w(cfg.model, seeds[is]);
    auto traj = simulate(w, cfg.eps_list[0], SupportSet(cfg.omega0), cfg.T, cfg.sample_times,
                         DtPolicy{}, cfg.tol.quad_tol);
    const std::string tag = "seed" + std::to_string(cfg.seeds[is]);
    traj.write_csv(cfg.out_dir + "/trajectory_" + tag + ".csv");
    traj.write_merges_jsonl(cfg.out_dir + "/merges_" + tag + ".jsonl");
    CaseRecord c;
    c.name = tag;
    c.inputs = {{"eps", cfg.eps_list[0]}, {"seed", cfg.seeds[is]}};
    c.metrics = {{"final_intervals", traj.states.back().support.size()},
                 {"merge_events", traj.events.size()},
                 {"final_hull",
                  json::array({traj.states.back().support.hull_min(),
                               traj.states.back().support.hull_max()})}};
    c.runtime_s = seconds_since(tc);
    cases[is] = std::move(c);
  });
  for (auto& c : cases) rep.cases.push_back(std::move(c));
  rep.passed = true;
  return rep;
}

MetricsReport run_table(const ExperimentConfig& cfg) {
  MetricsReport rep;
  rep.experiment = "table";
  const auto t0 = Clock::now();
  EffVelTable table = make_or_load_table(cfg);
  ensure_dir(cfg.out_dir);
  write_text_file(cfg.out_dir + "/table.json", table_to_json(table).dump(2) + "\n");
  CaseRecord c;
  c.name = "build";
  c.metrics = {{"x_nodes", table.x_grid.size()},
               {"q_nodes", table.q_grid.size()},
               {"entries_projected", table.diag.entries_projected},
               {"errors", table.diag.errors}};
  c.passed = table.diag.errors.empty();
  c.runtime_s = seconds_since(t0);
  rep.cases.push_back(std::move(c));
  rep.passed = rep.cases.front().passed;
  return rep;
}

MetricsReport run_effective(const ExperimentConfig& cfg) {
  if (cfg.omega0.empty() || cfg.sample_times.empty())
    cfg_fail("effective: omega0 and sample_times required");
  MetricsReport rep;
  rep.experiment = "effective";
  const auto t0 = Clock::now();
  EffVelTable table = make_or_load_table(cfg);
  EffectiveProblem prob{std::move(table), SupportSet(cfg.omega0), cfg.T};
  auto traj = simulate_effective(prob, cfg.sample_times, DtPolicy{}, cfg.tol.quad_tol);
  ensure_dir(cfg.out_dir);
  traj.write_csv(cfg.out_dir + "/effective_trajectory.csv");
  traj.write_merges_jsonl(cfg.out_dir + "/effective_merges.jsonl");
  if (cfg.table_path.empty())
    write_text_file(cfg.out_dir + "/table.json", table_to_json(prob.table).dump(2) + "\n");
  CaseRecord c;
  c.name = "effective_run";
  c.metrics = {{"final_intervals", traj.states.back().support.size()},
               {"final_hull", json::array({traj.states.back().support.hull_min(),
                                           traj.states.back().support.hull_max()})}};
  c.runtime_s = seconds_since(t0);
  rep.cases.push_back(std::move(c));
  rep.passed = true;
  return rep;
}

}  // namespace hs1d
