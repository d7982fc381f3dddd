#include "hs1d/harness.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hs1d/kernels.hpp"

namespace hs1d {

namespace {

[[noreturn]] void cfg_fail(const std::string& what) { fail(Errc::ConfigError, what); }

void expect_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) cfg_fail(where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) { ok = true; break; }
    if (!ok) cfg_fail(where + ": unknown key '" + key + "'");
  }
}

double get_num(const json& j, const std::string& where) {
  if (!j.is_number()) cfg_fail(where + ": expected a number");
  return j.get<double>();
}

double get_num(const json& j, const char* key, const std::string& where, double fallback,
               bool required = false) {
  if (!j.contains(key)) {
    if (required) cfg_fail(where + ": missing required key '" + key + "'");
    return fallback;
  }
  return get_num(j.at(key), where + "." + key);
}

std::vector<double> get_num_list(const json& j, const std::string& where) {
  if (!j.is_array()) cfg_fail(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(get_num(v, where));
  return out;
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) cfg_fail("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    cfg_fail("malformed JSON in " + path + ": " + e.what());
  }
}

namespace {

PeriodicComponent periodic_component_from_json(const json& j, const std::string& where) {
  expect_keys(j, where, {"base", "amp", "period", "phase"});
  PeriodicComponent c;
  c.base = get_num(j, "base", where, 1.0, true);
  c.amp = get_num(j, "amp", where, 0.0);
  c.period = get_num(j, "period", where, 1.0);
  c.phase = get_num(j, "phase", where, 0.0);
  return c;
}

json periodic_component_to_json(const PeriodicComponent& c) {
  return json{{"base", c.base}, {"amp", c.amp}, {"period", c.period}, {"phase", c.phase}};
}

BumpsComponent bumps_component_from_json(const json& j, const std::string& where) {
  expect_keys(j, where, {"base", "amp"});
  BumpsComponent c;
  c.base = get_num(j, "base", where, 1.0, true);
  c.amp = get_num(j, "amp", where, 0.0);
  return c;
}

}  // namespace

FieldModel model_from_json(const json& j) {
  expect_keys(j, "model", {"kind", "seed", "params", "bounds", "g_mode"});
  if (!j.contains("kind") || !j.at("kind").is_string()) cfg_fail("model.kind: required string");
  FieldModel m;
  const std::string kind = j.at("kind").get<std::string>();
  const json params = j.value("params", json::object());
  if (kind == "constant") {
    m.kind = FieldKind::Constant;
    expect_keys(params, "model.params", {"a", "b", "f", "g"});
    ConstantParams p;
    p.a = get_num(params, "a", "model.params", 1.0, true);
    p.b = get_num(params, "b", "model.params", 1.0, true);
    p.f = get_num(params, "f", "model.params", 1.0, true);
    p.g = get_num(params, "g", "model.params", 0.0);
    m.params = p;
  } else if (kind == "periodic") {
    m.kind = FieldKind::Periodic;
    expect_keys(params, "model.params", {"a", "b", "f", "g"});
    PeriodicParams p;
    p.a = periodic_component_from_json(params.at("a"), "model.params.a");
    p.b = periodic_component_from_json(params.at("b"), "model.params.b");
    p.f = periodic_component_from_json(params.at("f"), "model.params.f");
    if (params.contains("g")) p.g = periodic_component_from_json(params.at("g"), "model.params.g");
    m.params = p;
  } else if (kind == "checkerboard") {
    m.kind = FieldKind::Checkerboard;
    expect_keys(params, "model.params",
                {"cell_width", "levels_a", "levels_b", "levels_f", "levels_g"});
    CheckerboardParams p;
    p.cell_width = get_num(params, "cell_width", "model.params", 1.0);
    p.levels_a = get_num_list(params.at("levels_a"), "model.params.levels_a");
    p.levels_b = get_num_list(params.at("levels_b"), "model.params.levels_b");
    p.levels_f = get_num_list(params.at("levels_f"), "model.params.levels_f");
    if (params.contains("levels_g"))
      p.levels_g = get_num_list(params.at("levels_g"), "model.params.levels_g");
    m.params = p;
  } else if (kind == "smooth_bumps") {
    m.kind = FieldKind::SmoothBumps;
    expect_keys(params, "model.params", {"cell_width", "bump_width", "a", "b", "f", "g"});
    SmoothBumpsParams p;
    p.cell_width = get_num(params, "cell_width", "model.params", 1.0);
    p.bump_width = get_num(params, "bump_width", "model.params", 0.5 * p.cell_width);
    p.a = bumps_component_from_json(params.at("a"), "model.params.a");
    p.b = bumps_component_from_json(params.at("b"), "model.params.b");
    p.f = bumps_component_from_json(params.at("f"), "model.params.f");
    if (params.contains("g")) p.g = bumps_component_from_json(params.at("g"), "model.params.g");
    m.params = p;
  } else {
    cfg_fail("model.kind: unknown kind '" + kind + "'");
  }

  const json bounds = j.value("bounds", json::object());
  expect_keys(bounds, "model.bounds",
              {"a_min", "a_max", "b_min", "b_max", "f_min", "f_max", "g_max"});
  m.bounds.a_min = get_num(bounds, "a_min", "model.bounds", 0.0, true);
  m.bounds.a_max = get_num(bounds, "a_max", "model.bounds", 0.0, true);
  m.bounds.b_min = get_num(bounds, "b_min", "model.bounds", 0.0, true);
  m.bounds.b_max = get_num(bounds, "b_max", "model.bounds", 0.0, true);
  m.bounds.f_min = get_num(bounds, "f_min", "model.bounds", 0.0, true);
  m.bounds.f_max = get_num(bounds, "f_max", "model.bounds", 0.0, true);
  m.bounds.g_max = get_num(bounds, "g_max", "model.bounds", 0.0);

  if (j.contains("g_mode")) {
    const json& gm = j.at("g_mode");
    if (gm.is_string() && gm.get<std::string>() == "zero") {
      m.g_mode = GMode::IdenticallyZero;
    } else {
      expect_keys(gm, "model.g_mode", {"mode", "g_min"});
      const std::string mode = gm.value("mode", "");
      if (mode == "zero") {
        m.g_mode = GMode::IdenticallyZero;
      } else if (mode == "strictly_positive") {
        m.g_mode = GMode::StrictlyPositive;
        m.g_min = get_num(gm, "g_min", "model.g_mode", 0.0, true);
      } else {
        cfg_fail("model.g_mode.mode: expected 'zero' or 'strictly_positive'");
      }
    }
  }
  return m;
}

json model_to_json(const FieldModel& m) {
  json j;
  json params;
  switch (m.kind) {
    case FieldKind::Constant: {
      const auto& p = std::get<ConstantParams>(m.params);
      j["kind"] = "constant";
      params = {{"a", p.a}, {"b", p.b}, {"f", p.f}, {"g", p.g}};
      break;
    }
    case FieldKind::Periodic: {
      const auto& p = std::get<PeriodicParams>(m.params);
      j["kind"] = "periodic";
      params = {{"a", periodic_component_to_json(p.a)},
                {"b", periodic_component_to_json(p.b)},
                {"f", periodic_component_to_json(p.f)},
                {"g", periodic_component_to_json(p.g)}};
      break;
    }
    case FieldKind::Checkerboard: {
      const auto& p = std::get<CheckerboardParams>(m.params);
      j["kind"] = "checkerboard";
      params = {{"cell_width", p.cell_width},
                {"levels_a", p.levels_a},
                {"levels_b", p.levels_b},
                {"levels_f", p.levels_f},
                {"levels_g", p.levels_g}};
      break;
    }
    case FieldKind::SmoothBumps: {
      const auto& p = std::get<SmoothBumpsParams>(m.params);
      j["kind"] = "smooth_bumps";
      params = {{"cell_width", p.cell_width},
                {"bump_width", p.bump_width},
                {"a", json{{"base", p.a.base}, {"amp", p.a.amp}}},
                {"b", json{{"base", p.b.base}, {"amp", p.b.amp}}},
                {"f", json{{"base", p.f.base}, {"amp", p.f.amp}}},
                {"g", json{{"base", p.g.base}, {"amp", p.g.amp}}}};
      break;
    }
  }
  j["params"] = params;
  j["bounds"] = {{"a_min", m.bounds.a_min}, {"a_max", m.bounds.a_max},
                 {"b_min", m.bounds.b_min}, {"b_max", m.bounds.b_max},
                 {"f_min", m.bounds.f_min}, {"f_max", m.bounds.f_max},
                 {"g_max", m.bounds.g_max}};
  if (m.g_mode == GMode::IdenticallyZero) {
    j["g_mode"] = {{"mode", "zero"}};
  } else {
    j["g_mode"] = {{"mode", "strictly_positive"}, {"g_min", m.g_min}};
  }
  return j;
}

namespace {

std::vector<Interval> intervals_from_json(const json& j, const std::string& where) {
  if (!j.is_array()) cfg_fail(where + ": expected [[l, r], ...]");
  std::vector<Interval> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) cfg_fail(where + ": each entry must be [l, r]");
    Interval iv{get_num(e[0], where), get_num(e[1], where)};
    if (!(iv.l < iv.r)) cfg_fail(where + ": requires l < r");
    out.push_back(iv);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(const json& doc, const std::string& source_name) {
  expect_keys(doc, source_name,
              {"schema", "kind", "model", "eps_list", "omega0", "omega0_inner", "T",
               "sample_times", "seeds", "tolerances", "cell", "domain", "bc", "out_dir",
               "table_path", "jobs"});
  ExperimentConfig cfg;
  if (!doc.contains("schema") || !doc.at("schema").is_number_integer())
    cfg_fail(source_name + ": missing integer 'schema'");
  cfg.schema = doc.at("schema").get<int>();
  if (cfg.schema != 1) cfg_fail(source_name + ": unsupported schema version");
  if (!doc.contains("kind") || !doc.at("kind").is_string())
    cfg_fail(source_name + ": missing string 'kind'");
  cfg.kind = doc.at("kind").get<std::string>();
  const bool known_kind = cfg.kind == "simulate" || cfg.kind == "cell" || cfg.kind == "table" ||
                          cfg.kind == "effective" || cfg.kind == "interior_homog" ||
                          cfg.kind == "comparison" || cfg.kind == "full_sweep";
  if (!known_kind) cfg_fail(source_name + ": unknown experiment kind '" + cfg.kind + "'");

  if (!doc.contains("model")) cfg_fail(source_name + ": missing 'model'");
  cfg.model = model_from_json(doc.at("model"));
  if (doc.at("model").contains("seed")) {
    const json& s = doc.at("model").at("seed");
    if (!s.is_number_integer()) cfg_fail("model.seed: expected an integer");
    cfg.model_seed = s.get<std::uint64_t>();
  }

  if (doc.contains("eps_list")) {
    cfg.eps_list = get_num_list(doc.at("eps_list"), "eps_list");
    for (double e : cfg.eps_list)
      if (!(e > 0)) cfg_fail("eps_list: entries must be positive");
    for (std::size_t i = 1; i < cfg.eps_list.size(); ++i)
      if (!(cfg.eps_list[i] < cfg.eps_list[i - 1]))
        cfg_fail("eps_list: must be strictly decreasing");
  }
  if (doc.contains("omega0")) cfg.omega0 = intervals_from_json(doc.at("omega0"), "omega0");
  if (doc.contains("omega0_inner"))
    cfg.omega0_inner = intervals_from_json(doc.at("omega0_inner"), "omega0_inner");
  cfg.T = get_num(doc, "T", source_name, cfg.T);
  if (!(cfg.T >= 0)) cfg_fail("T: must be nonnegative");
  if (doc.contains("sample_times")) {
    cfg.sample_times = get_num_list(doc.at("sample_times"), "sample_times");
    for (std::size_t i = 0; i < cfg.sample_times.size(); ++i) {
      if (cfg.sample_times[i] < 0 || cfg.sample_times[i] > cfg.T)
        cfg_fail("sample_times: entries must lie in [0, T]");
      if (i > 0 && !(cfg.sample_times[i] > cfg.sample_times[i - 1]))
        cfg_fail("sample_times: must be strictly increasing");
    }
  }
  if (doc.contains("seeds")) {
    if (!doc.at("seeds").is_array()) cfg_fail("seeds: expected an array of integers");
    cfg.seeds.clear();
    for (const auto& s : doc.at("seeds")) {
      if (!s.is_number_integer()) cfg_fail("seeds: expected integers");
      cfg.seeds.push_back(s.get<std::uint64_t>());
    }
    if (cfg.seeds.empty()) cfg_fail("seeds: must not be empty");
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
      for (std::size_t k = i + 1; k < cfg.seeds.size(); ++k)
        if (cfg.seeds[i] == cfg.seeds[k]) cfg_fail("seeds: entries must be distinct");
  }

  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    expect_keys(t, "tolerances",
                {"quad_tol", "vbar_rel", "abar_rel", "arrival_tol", "final_distance",
                 "final_error", "oracle_rel", "scaling_pre"});
    cfg.tol.quad_tol = get_num(t, "quad_tol", "tolerances", cfg.tol.quad_tol);
    cfg.tol.vbar_rel = get_num(t, "vbar_rel", "tolerances", cfg.tol.vbar_rel);
    cfg.tol.abar_rel = get_num(t, "abar_rel", "tolerances", cfg.tol.abar_rel);
    cfg.tol.arrival_tol = get_num(t, "arrival_tol", "tolerances", cfg.tol.arrival_tol);
    cfg.tol.final_distance = get_num(t, "final_distance", "tolerances", cfg.tol.final_distance);
    cfg.tol.final_error = get_num(t, "final_error", "tolerances", cfg.tol.final_error);
    cfg.tol.oracle_rel = get_num(t, "oracle_rel", "tolerances", cfg.tol.oracle_rel);
    cfg.tol.scaling_pre = get_num(t, "scaling_pre", "tolerances", cfg.tol.scaling_pre);
    for (double v : {cfg.tol.quad_tol, cfg.tol.vbar_rel, cfg.tol.abar_rel, cfg.tol.arrival_tol,
                     cfg.tol.final_distance, cfg.tol.final_error, cfg.tol.oracle_rel,
                     cfg.tol.scaling_pre})
      if (!(v > 0)) cfg_fail("tolerances: all entries must be positive");
  }

  if (doc.contains("cell")) {
    const json& c = doc.at("cell");
    expect_keys(c, "cell",
                {"x_grid", "q_grid", "n_max", "n_seeds", "reflect_g", "window", "oracle_mc"});
    if (c.contains("x_grid")) cfg.cell.x_grid = get_num_list(c.at("x_grid"), "cell.x_grid");
    if (c.contains("q_grid")) cfg.cell.q_grid = get_num_list(c.at("q_grid"), "cell.q_grid");
    cfg.cell.n_max = get_num(c, "n_max", "cell", cfg.cell.n_max);
    cfg.cell.n_seeds = static_cast<int>(get_num(c, "n_seeds", "cell", cfg.cell.n_seeds));
    if (c.contains("reflect_g")) {
      if (!c.at("reflect_g").is_boolean()) cfg_fail("cell.reflect_g: expected a boolean");
      cfg.cell.reflect_g = c.at("reflect_g").get<bool>();
    }
    cfg.cell.window = get_num(c, "window", "cell", cfg.cell.window);
    cfg.cell.oracle_mc = static_cast<int>(get_num(c, "oracle_mc", "cell", cfg.cell.oracle_mc));
  }

  if (doc.contains("domain")) {
    const auto d = get_num_list(doc.at("domain"), "domain");
    if (d.size() != 2 || !(d[0] < d[1])) cfg_fail("domain: expected [l, r] with l < r");
    cfg.domain = {d[0], d[1]};
  }
  if (doc.contains("bc")) {
    expect_keys(doc.at("bc"), "bc", {"a", "b"});
    cfg.bc_a = get_num(doc.at("bc"), "a", "bc", cfg.bc_a);
    cfg.bc_b = get_num(doc.at("bc"), "b", "bc", cfg.bc_b);
    if (cfg.bc_a < 0 || cfg.bc_b < 0) cfg_fail("bc: boundary data must be nonnegative");
  }
  if (doc.contains("out_dir")) {
    if (!doc.at("out_dir").is_string()) cfg_fail("out_dir: expected a string");
    cfg.out_dir = doc.at("out_dir").get<std::string>();
  }
  if (doc.contains("table_path")) {
    if (!doc.at("table_path").is_string()) cfg_fail("table_path: expected a string");
    cfg.table_path = doc.at("table_path").get<std::string>();
  }
  if (doc.contains("jobs")) cfg.jobs = static_cast<int>(get_num(doc.at("jobs"), "jobs"));

  const ValidationReport rep = validate_model(cfg.model);
  for (const auto& e : rep.entries)
    if (!e.passed) cfg_fail("model fails validation: " + e.name + " (" + e.message + ")");
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  return parse_config(load_json_file(path), path);
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    cfg_fail("--set expects key=value, got '" + assignment + "'");
  const std::string path = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);

  std::vector<std::string> segs;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    const auto dot = path.find('.', pos);
    segs.push_back(path.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }

  json* node = &doc;
  for (std::size_t i = 0; i + 1 < segs.size(); ++i) {
    const std::string& s = segs[i];
    if (node->is_array()) {
      const std::size_t idx = std::stoul(s);
      if (idx >= node->size()) cfg_fail("--set: index '" + s + "' out of range in '" + path + "'");
      node = &(*node)[idx];
    } else if (node->is_object() && node->contains(s)) {
      node = &(*node)[s];
    } else {
      cfg_fail("--set: unknown key '" + s + "' in '" + path + "'");
    }
  }
  const std::string& last = segs.back();
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const nlohmann::json::parse_error&) {
    parsed = value;  // plain string
  }
  if (node->is_array()) {
    const std::size_t idx = std::stoul(last);
    if (idx >= node->size()) cfg_fail("--set: index '" + last + "' out of range in '" + path + "'");
    (*node)[idx] = parsed;
  } else if (node->is_object() && node->contains(last)) {
    (*node)[last] = parsed;
  } else {
    cfg_fail("--set: unknown key '" + last + "' in '" + path + "'");
  }
}

json table_to_json(const EffVelTable& t) {
  json j;
  j["schema"] = 1;
  j["x_grid"] = t.x_grid;
  j["q_grid"] = t.q_grid;
  j["v_plus"] = t.v_plus;
  j["v_minus"] = t.v_minus;
  j["v0"] = t.v0;
  j["a_bar"] = t.curves.a_bar;
  j["f_bar"] = t.curves.f_bar;
  j["diagnostics"] = {{"max_monotonicity_violation", t.diag.max_monotonicity_violation},
                      {"max_scaling_violation", t.diag.max_scaling_violation},
                      {"entries_projected", t.diag.entries_projected},
                      {"errors", t.diag.errors}};
  return j;
}

EffVelTable table_from_json(const json& j) {
  expect_keys(j, "table",
              {"schema", "x_grid", "q_grid", "v_plus", "v_minus", "v0", "a_bar", "f_bar",
               "diagnostics"});
  EffVelTable t;
  t.x_grid = get_num_list(j.at("x_grid"), "table.x_grid");
  t.q_grid = get_num_list(j.at("q_grid"), "table.q_grid");
  for (const auto& row : j.at("v_plus")) t.v_plus.push_back(get_num_list(row, "table.v_plus"));
  for (const auto& row : j.at("v_minus")) t.v_minus.push_back(get_num_list(row, "table.v_minus"));
  t.v0 = get_num_list(j.at("v0"), "table.v0");
  t.curves.x = t.x_grid;
  t.curves.a_bar = get_num_list(j.at("a_bar"), "table.a_bar");
  t.curves.f_bar = get_num_list(j.at("f_bar"), "table.f_bar");
  if (t.v_plus.size() != t.x_grid.size() || t.v_minus.size() != t.x_grid.size() ||
      t.v0.size() != t.x_grid.size())
    cfg_fail("table: row counts do not match x_grid");
  for (const auto& row : t.v_plus)
    if (row.size() != t.q_grid.size()) cfg_fail("table: v_plus row width != q_grid");
  for (const auto& row : t.v_minus)
    if (row.size() != t.q_grid.size()) cfg_fail("table: v_minus row width != q_grid");
  return t;
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::FILE* fp = std::fopen(path.c_str(), "wb");
  if (fp == nullptr) cfg_fail("cannot open " + path + " for writing");
  std::fwrite(content.data(), 1, content.size(), fp);
  std::fclose(fp);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) cfg_fail("cannot create output directory " + dir + ": " + ec.message());
}

json MetricsReport::to_json(const ExperimentConfig& cfg) const {
  json j;
  j["schema"] = 1;
  j["experiment"] = experiment;
  j["passed"] = passed;
  json jcases = json::array();
  json runtimes;
  double total = 0;
  for (const auto& c : cases) {
    jcases.push_back({{"name", c.name},
                      {"inputs", c.inputs},
                      {"metrics", c.metrics},
                      {"threshold", c.threshold},
                      {"passed", c.passed}});
    runtimes[c.name] = c.runtime_s;
    total += c.runtime_s;
  }
  j["cases"] = jcases;
  j["summary"] = summary;

  const auto now = std::chrono::system_clock::now();
  const auto tt = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  runtimes["total"] = total;
  j["environment"] = {{"version", kVersion},
                      {"kernel", kernels::active_kernels().name},
                      {"model_seed", cfg.model_seed},
                      {"seeds", cfg.seeds},
                      {"created", stamp},
                      {"runtimes_s", runtimes}};
  return j;
}

void MetricsReport::write(const ExperimentConfig& cfg, const std::string& filename) const {
  ensure_dir(cfg.out_dir);
  write_text_file(cfg.out_dir + "/" + filename, to_json(cfg).dump(2) + "\n");
}

MetricsReport run_experiment(const ExperimentConfig& cfg) {
  if (cfg.kind == "interior_homog") return run_interior_homog(cfg);
  if (cfg.kind == "comparison") return run_comparison(cfg);
  if (cfg.kind == "cell") return run_cell_suite(cfg);
  if (cfg.kind == "full_sweep") return run_full_sweep(cfg);
  if (cfg.kind == "simulate") return run_simulate(cfg);
  if (cfg.kind == "table") return run_table(cfg);
  if (cfg.kind == "effective") return run_effective(cfg);
  cfg_fail("run_experiment: unknown kind '" + cfg.kind + "'");
}

}  // namespace hs1d
