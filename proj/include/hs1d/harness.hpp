#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "hs1d/macrosim.hpp"

namespace hs1d {

using json = nlohmann::ordered_json;

struct Tolerances {
  double quad_tol = 1e-10;
  double vbar_rel = 1e-3;
  double abar_rel = 1e-6;
  double arrival_tol = 1e-8;
  double final_distance = 0.05;  // full sweep, smallest eps
  double final_error = 0.02;     // interior homogenization, smallest eps
  double oracle_rel = 0.01;      // cell suite vs oracle
  double scaling_pre = 0.02;     // pre-projection violation budget
};

struct CellConfig {
  std::vector<double> x_grid = {0.0};
  std::vector<double> q_grid;
  double n_max = 65536;
  int n_seeds = 8;
  bool reflect_g = true;
  double window = 16384;
  int oracle_mc = 40000;
};

struct ExperimentConfig {
  int schema = 1;
  std::string kind;  // simulate | cell | table | effective | interior_homog | comparison | full_sweep
  FieldModel model;
  std::uint64_t model_seed = 0;
  std::vector<double> eps_list;
  std::vector<Interval> omega0;
  std::vector<Interval> omega0_inner;  // comparison experiments
  double T = 1.0;
  std::vector<double> sample_times;
  std::vector<std::uint64_t> seeds = {0};  // case seed = model_seed + entry
  Interval domain{0.0, 1.0};               // interior_homog
  double bc_a = 0.0, bc_b = 1.0;
  Tolerances tol;
  CellConfig cell;
  std::string out_dir = "out";
  std::string table_path;  // effective: load instead of build when set
  int jobs = 0;
};

// Strict parsing: unknown keys anywhere are ConfigError; so are malformed
// values (messages carry the JSON path / parse position).
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config(const json& doc, const std::string& source_name);
json load_json_file(const std::string& path);

// --set key=value override on the raw document (dotted path, value parsed as
// JSON when possible, else kept as string). Unknown paths are errors.
void apply_override(json& doc, const std::string& assignment);

FieldModel model_from_json(const json& j);
json model_to_json(const FieldModel& m);

json table_to_json(const EffVelTable& t);
EffVelTable table_from_json(const json& j);

struct CaseRecord {
  std::string name;
  json inputs;
  json metrics;
  json threshold;
  bool passed = true;
  double runtime_s = 0;
};

struct MetricsReport {
  std::string experiment;
  bool passed = true;
  std::vector<CaseRecord> cases;
  json summary;

  json to_json(const ExperimentConfig& cfg) const;  // runtimes go in `environment`
  void write(const ExperimentConfig& cfg, const std::string& filename) const;
};

MetricsReport run_interior_homog(const ExperimentConfig& cfg);
MetricsReport run_comparison(const ExperimentConfig& cfg);
MetricsReport run_cell_suite(const ExperimentConfig& cfg);  // writes table.json too
MetricsReport run_full_sweep(const ExperimentConfig& cfg);

// Thin file-producing flows behind the remaining CLI subcommands.
MetricsReport run_simulate(const ExperimentConfig& cfg);
MetricsReport run_table(const ExperimentConfig& cfg);
MetricsReport run_effective(const ExperimentConfig& cfg);

// Experiment dispatch by cfg.kind (the `compare` subcommand family).
MetricsReport run_experiment(const ExperimentConfig& cfg);

// Spec surface; Hausdorff distance of supports.
inline double support_distance(const SupportSet& a, const SupportSet& b) {
  return hausdorff_distance(a, b);
}

// Deterministic text helpers (%.17g round-trip formatting).
std::string fmt_double(double v);
void write_text_file(const std::string& path, const std::string& content);
void ensure_dir(const std::string& dir);

}  // namespace hs1d
