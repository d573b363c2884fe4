#include "adp/experiment.hpp"

#include "adp/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <random>
#include <sstream>

namespace adp {
namespace {

using nlohmann::json;

constexpr double kSettlingRadius = 0.1;
constexpr double kRateFloor = 1e-9;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Non-finite values are not representable in JSON; keep them readable.
json json_num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Eigen::VectorXd json_to_vec(const json& arr, const char* what) {
  if (!arr.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
  Eigen::VectorXd v(arr.size());
  Eigen::Index i = 0;
  for (const auto& e : arr) {
    if (!e.is_number()) throw ConfigError(std::string(what) + " must be an array of numbers");
    v(i++) = e.get<double>();
  }
  return v;
}

void check_keys(const json& obj, std::initializer_list<const char*> allowed, const char* where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed)
      if (item.key() == key) {
        ok = true;
        break;
      }
    if (!ok) throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
  }
}

double get_num(const json& obj, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj.at(key).is_number()) throw ConfigError(std::string(key) + " must be a number");
  return obj.at(key).get<double>();
}

RunMode parse_mode(const std::string& s) {
  if (s == "momentum-restart") return RunMode::Momentum;
  if (s == "gradient-baseline") return RunMode::Baseline;
  if (s == "both") return RunMode::Both;
  throw ConfigError("mode must be momentum-restart, gradient-baseline, or both");
}

const char* mode_name(CriticMode mode) {
  return mode == CriticMode::MomentumRestart ? "momentum-restart" : "gradient-baseline";
}

Eigen::VectorXd seeded_uniform(int size, double low, double high, unsigned long seed) {
  std::mt19937_64 rng(seed);
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v(i) = low + (high - low) * u;
  }
  return v;
}

struct PreparedRun {
  ClosedLoopSpec spec;
  ClosedLoopState z0;
  DiagnosticsContext diag;
};

PreparedRun prepare_run(const ResolvedExperiment& rx, CriticMode mode) {
  CriticTuning tuning = rx.config.critic;
  tuning.mode = mode;
  PreparedRun run{build_closed_loop(rx.problem.plant, rx.problem.cost, rx.basis, rx.regressor,
                                    rx.dataset, tuning, rx.config.actor,
                                    rx.config.richness_floor),
                  {}, {}};
  run.z0.x = rx.config.init.x0;
  run.z0.y.theta_c = rx.config.init.theta_c0;
  run.z0.y.p = *rx.config.init.p0;
  run.z0.y.tau = *rx.config.init.tau0;
  run.z0.theta_u = rx.config.init.theta_u0;
  run.diag.target = {rx.theta_c_star, tuning.T0, tuning.T};
  run.diag.reference = &rx.problem.reference;
  return run;
}

ModeSummary summarize_run(const ResolvedExperiment& rx, CriticMode mode,
                          const SimulationResult& sim) {
  const int n = rx.problem.plant.n;
  const int l = rx.basis.l_c;
  const HybridSample& last = sim.arc.final_sample();
  const ClosedLoopState s = unpack_state(last.z, n, l);

  ModeSummary out;
  out.mode = mode_name(mode);
  out.final_t = last.t;
  out.final_j = last.j;
  out.theta_c_err_inf = (s.y.theta_c - rx.theta_c_star).cwiseAbs().maxCoeff();
  out.theta_c_err_2 = (s.y.theta_c - rx.theta_c_star).norm();
  out.x_norm = s.x.norm();
  out.theta_u_err_2 = (s.theta_u - rx.theta_c_star).norm();
  out.dist_A = distance_to_target(
      s, TargetSet{rx.theta_c_star, rx.config.critic.T0, rx.config.critic.T});
  out.settling_time = settling_time(sim.arc, rx.theta_c_star, kSettlingRadius, n, l);
  out.fit_rate = fitted_log_rate(sim.arc, rx.theta_c_star, n, l);
  out.jump_count = static_cast<long>(sim.arc.jumps.size());
  return out;
}

json mode_summary_to_json(const ModeSummary& m) {
  json j;
  j["mode"] = m.mode;
  j["final_t"] = json_num(m.final_t);
  j["final_j"] = m.final_j;
  j["theta_c_err_inf"] = json_num(m.theta_c_err_inf);
  j["theta_c_err_2"] = json_num(m.theta_c_err_2);
  j["x_norm"] = json_num(m.x_norm);
  j["theta_u_err_2"] = json_num(m.theta_u_err_2);
  j["dist_A"] = json_num(m.dist_A);
  j["settling_time"] = json_num(m.settling_time);
  j["fit_rate"] = json_num(m.fit_rate);
  j["jump_count"] = m.jump_count;
  if (!m.csv_file.empty()) j["csv"] = m.csv_file;
  return j;
}

json verdict_to_json(const TuningVerdict& v) {
  json j;
  j["ok"] = v.ok;
  j["lower_gap"] = json_num(v.lower_gap);
  j["upper_gap"] = json_num(v.upper_gap);
  j["excitation_gap"] = json_num(v.excitation_gap);
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing", path);
  out << text;
  if (!out) throw IoError("failed writing file", path);
}

}  // namespace

ExperimentConfig default_builtin_config() {
  ExperimentConfig cfg;
  cfg.init.x0 = Eigen::Vector2d(-10.0, 10.0);
  cfg.init.theta_c0 = Eigen::Vector3d(1.0, 1.0, 1.0);
  cfg.init.theta_u0 = Eigen::Vector3d(0.5, 0.5, 0.5);
  return cfg;
}

ExperimentConfig parse_config_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  check_keys(doc,
             {"plant", "basis", "dataset", "richness_floor", "critic", "actor", "integrator",
              "init", "mode", "out_dir", "sweep"},
             "config");

  ExperimentConfig cfg = default_builtin_config();
  if (doc.contains("plant")) cfg.plant_selector = doc.at("plant").get<std::string>();
  if (doc.contains("basis")) cfg.basis_selector = doc.at("basis").get<std::string>();
  cfg.richness_floor = get_num(doc, "richness_floor", cfg.richness_floor);

  if (doc.contains("dataset")) {
    const json& d = doc.at("dataset");
    check_keys(d, {"source", "extent", "points_per_axis", "path"}, "dataset");
    const std::string source = d.value("source", "generate-grid");
    if (source == "generate-grid") {
      cfg.dataset.kind = DatasetSource::Kind::GenerateGrid;
      cfg.dataset.extent = get_num(d, "extent", cfg.dataset.extent);
      cfg.dataset.points_per_axis =
          static_cast<int>(get_num(d, "points_per_axis", cfg.dataset.points_per_axis));
    } else if (source == "file") {
      cfg.dataset.kind = DatasetSource::Kind::LoadFile;
      if (!d.contains("path")) throw ConfigError("dataset source \"file\" requires a path");
      cfg.dataset.path = d.at("path").get<std::string>();
    } else {
      throw ConfigError("dataset source must be generate-grid or file");
    }
  }

  if (doc.contains("critic")) {
    const json& c = doc.at("critic");
    check_keys(c, {"k_c", "rho_i", "rho_d", "T0", "T"}, "critic");
    cfg.critic.k_c = get_num(c, "k_c", cfg.critic.k_c);
    cfg.critic.rho_i = get_num(c, "rho_i", cfg.critic.rho_i);
    cfg.critic.rho_d = get_num(c, "rho_d", cfg.critic.rho_d);
    cfg.critic.T0 = get_num(c, "T0", cfg.critic.T0);
    cfg.critic.T = get_num(c, "T", cfg.critic.T);
  }
  if (doc.contains("actor")) {
    const json& a = doc.at("actor");
    check_keys(a, {"k_u", "alpha1", "alpha2"}, "actor");
    cfg.actor.k_u = get_num(a, "k_u", cfg.actor.k_u);
    cfg.actor.alpha1 = get_num(a, "alpha1", cfg.actor.alpha1);
    cfg.actor.alpha2 = get_num(a, "alpha2", cfg.actor.alpha2);
  }
  if (doc.contains("integrator")) {
    const json& i = doc.at("integrator");
    check_keys(i, {"step", "t_max", "j_max", "record_every"}, "integrator");
    cfg.integrator.step = get_num(i, "step", cfg.integrator.step);
    cfg.integrator.t_max = get_num(i, "t_max", cfg.integrator.t_max);
    cfg.integrator.j_max = static_cast<long>(get_num(i, "j_max", cfg.integrator.j_max));
    cfg.integrator.record_every =
        static_cast<int>(get_num(i, "record_every", cfg.integrator.record_every));
  }
  if (doc.contains("init")) {
    const json& init = doc.at("init");
    check_keys(init, {"x0", "theta_c0", "p0", "tau0", "theta_u0"}, "init");
    if (init.contains("x0")) cfg.init.x0 = json_to_vec(init.at("x0"), "x0");
    if (init.contains("theta_c0"))
      cfg.init.theta_c0 = json_to_vec(init.at("theta_c0"), "theta_c0");
    if (init.contains("p0")) cfg.init.p0 = json_to_vec(init.at("p0"), "p0");
    if (init.contains("tau0")) cfg.init.tau0 = get_num(init, "tau0", 0.0);
    if (init.contains("theta_u0")) {
      const json& tu = init.at("theta_u0");
      if (tu.is_array()) {
        cfg.init.theta_u0 = json_to_vec(tu, "theta_u0");
        cfg.init.theta_u0_seeded = false;
      } else if (tu.is_object()) {
        check_keys(tu, {"low", "high", "seed"}, "theta_u0");
        cfg.init.theta_u0_seeded = true;
        cfg.init.theta_u0_low = get_num(tu, "low", 0.0);
        cfg.init.theta_u0_high = get_num(tu, "high", 1.0);
        cfg.init.seed = static_cast<unsigned long>(get_num(tu, "seed", 0.0));
      } else {
        throw ConfigError("theta_u0 must be an array or a {low, high, seed} object");
      }
    }
  }
  if (doc.contains("mode")) cfg.mode = parse_mode(doc.at("mode").get<std::string>());
  if (doc.contains("out_dir")) cfg.out_dir = doc.at("out_dir").get<std::string>();
  if (doc.contains("sweep")) {
    const json& s = doc.at("sweep");
    check_keys(s, {"param", "values"}, "sweep");
    SweepSpec sweep;
    sweep.param = s.at("param").get<std::string>();
    for (const auto& v : s.at("values")) sweep.values.push_back(v.get<double>());
    cfg.sweep = std::move(sweep);
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file", path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

ResolvedExperiment resolve_experiment(const ExperimentConfig& config) {
  ResolvedExperiment rx;
  rx.config = config;

  if (config.plant_selector == "builtin-example") {
    rx.problem = builtin_example_plant();
    rx.theta_c_star = Eigen::Vector3d(0.5, 0.0, 1.0);
  } else {
    throw ConfigError("unknown plant \"" + config.plant_selector +
                      "\" (the command line supports builtin-example; other plants are "
                      "library-level callables)");
  }
  if (config.basis_selector == "quadratic-monomials-2d") {
    rx.basis = quadratic_monomial_basis_2d();
  } else {
    throw ConfigError("unknown basis \"" + config.basis_selector + "\"");
  }
  rx.regressor = make_actor_regressor(rx.basis, rx.problem.plant, rx.problem.cost);

  if (config.dataset.kind == DatasetSource::Kind::GenerateGrid) {
    if (!(config.dataset.extent > 0.0)) throw ConfigError("grid extent must be positive");
    if (config.dataset.points_per_axis < 1)
      throw ConfigError("points_per_axis must be positive");
    const int n = rx.problem.plant.n;
    const Eigen::VectorXd hi = Eigen::VectorXd::Constant(n, config.dataset.extent);
    rx.dataset = record_expert_grid(rx.problem.plant, rx.problem.cost, rx.basis,
                                    rx.problem.reference,
                                    lattice_grid(-hi, hi, config.dataset.points_per_axis),
                                    config.plant_selector, config.basis_selector);
  } else {
    rx.dataset = load_dataset(config.dataset.path);
    if (!rx.dataset.plant_id.empty() && rx.dataset.plant_id != config.plant_selector)
      throw ConfigError("dataset was recorded for plant \"" + rx.dataset.plant_id + "\"");
    if (!rx.dataset.basis_id.empty() && rx.dataset.basis_id != config.basis_selector)
      throw ConfigError("dataset was recorded for basis \"" + rx.dataset.basis_id + "\"");
    if (rx.dataset.l_c != rx.basis.l_c) throw ConfigError("dataset/basis dimension mismatch");
  }

  validate_critic_tuning_fields(rx.config.critic);
  validate_actor_tuning_fields(rx.config.actor);

  InitConfig& init = rx.config.init;
  if (init.theta_u0_seeded) {
    if (!(init.theta_u0_high >= init.theta_u0_low))
      throw ConfigError("theta_u0 box must satisfy high >= low");
    init.theta_u0 = seeded_uniform(rx.basis.l_c, init.theta_u0_low, init.theta_u0_high,
                                   init.seed);
  }
  if (!init.p0) init.p0 = init.theta_c0;
  if (!init.tau0) init.tau0 = rx.config.critic.T0;

  if (init.x0.size() != rx.problem.plant.n) throw ConfigError("x0 has wrong dimension");
  if (init.theta_c0.size() != rx.basis.l_c) throw ConfigError("theta_c0 has wrong dimension");
  if (init.p0->size() != rx.basis.l_c) throw ConfigError("p0 has wrong dimension");
  if (init.theta_u0.size() != rx.basis.l_c) throw ConfigError("theta_u0 has wrong dimension");
  if (*init.tau0 < rx.config.critic.T0 || *init.tau0 > rx.config.critic.T)
    throw ConfigError("tau0 must lie in [T0, T]");
  return rx;
}

CertifyReport cmd_certify_data(const ExperimentConfig& config) {
  const ResolvedExperiment rx = resolve_experiment(config);
  CertifyReport report;
  report.certificate = certify_richness(rx.dataset, config.richness_floor);

  json doc;
  doc["samples"] = rx.dataset.size();
  doc["lambda_min"] = json_num(report.certificate.lambda_min);
  doc["lambda_max"] = json_num(report.certificate.lambda_max);
  doc["richness_floor"] = json_num(report.certificate.richness_floor);
  doc["rich"] = report.certificate.rich;
  json lambda_rows = json::array();
  for (Eigen::Index r = 0; r < report.certificate.Lambda.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < report.certificate.Lambda.cols(); ++c)
      row.push_back(report.certificate.Lambda(r, c));
    lambda_rows.push_back(std::move(row));
  }
  doc["Lambda"] = std::move(lambda_rows);
  report.json = doc.dump(2) + "\n";
  return report;
}

ValidateReport cmd_validate(const ExperimentConfig& config) {
  const ResolvedExperiment rx = resolve_experiment(config);
  const RichnessCertificate cert = certify_richness(rx.dataset, config.richness_floor);
  if (!(cert.lambda_min > 0.0))
    throw ConfigError("tuning validation requires a rich dataset (lambda_min = " +
                      format_double(cert.lambda_min) + ")");

  ValidateReport report;
  report.lambda_min = cert.lambda_min;
  report.verdict = validate_tuning(rx.config.critic, cert.lambda_min);
  report.t_star = optimal_restart_period(rx.config.critic.k_c, rx.config.critic.rho_d,
                                         cert.lambda_min, rx.config.critic.T0);

  json doc;
  doc["lambda_min"] = json_num(report.lambda_min);
  doc["verdict"] = verdict_to_json(report.verdict);
  doc["t_star"] = json_num(report.t_star);
  report.json = doc.dump(2) + "\n";
  return report;
}

RunSummary cmd_run(const ExperimentConfig& config, bool force) {
  const ResolvedExperiment rx = resolve_experiment(config);
  const RichnessCertificate cert = certify_richness(rx.dataset, config.richness_floor);

  RunSummary summary;
  summary.forced = force;
  summary.lambda_min = cert.lambda_min;
  summary.lambda_max = cert.lambda_max;

  if (cert.lambda_min > 0.0) {
    summary.verdict = validate_tuning(rx.config.critic, cert.lambda_min);
    summary.eta = jump_decrease_factor(rx.config.critic, cert.lambda_min);
    summary.t_star = optimal_restart_period(rx.config.critic.k_c, rx.config.critic.rho_d,
                                            cert.lambda_min, rx.config.critic.T0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(
        decrease_certificate_matrix(rx.config.critic, cert.lambda_min, rx.config.critic.T));
    summary.M_T_min_eig = es.eigenvalues().minCoeff();
  } else {
    summary.verdict = TuningVerdict{};
    summary.eta = std::numeric_limits<double>::quiet_NaN();
    summary.t_star = std::numeric_limits<double>::quiet_NaN();
    summary.M_T_min_eig = std::numeric_limits<double>::quiet_NaN();
  }
  if (!summary.verdict.ok && !force) {
    throw ConfigError(
        "tuning validation failed (excitation_gap=" + format_double(summary.verdict.excitation_gap) +
        ", lower_gap=" + format_double(summary.verdict.lower_gap) +
        ", upper_gap=" + format_double(summary.verdict.upper_gap) +
        "); pass --force to run anyway");
  }

  std::filesystem::create_directories(config.out_dir);

  std::vector<CriticMode> modes;
  if (config.mode == RunMode::Momentum) modes = {CriticMode::MomentumRestart};
  else if (config.mode == RunMode::Baseline) modes = {CriticMode::GradientBaseline};
  else modes = {CriticMode::MomentumRestart, CriticMode::GradientBaseline};

  json doc;
  json mode_docs = json::array();
  for (CriticMode mode : modes) {
    PreparedRun run = prepare_run(rx, mode);
    const SimulationResult sim =
        simulate_closed_loop(run.spec, run.z0, rx.config.integrator, &run.diag);
    ModeSummary ms = summarize_run(rx, mode, sim);
    ms.csv_file = mode == CriticMode::MomentumRestart ? "momentum.csv" : "baseline.csv";
    write_trajectory_csv((std::filesystem::path(config.out_dir) / ms.csv_file).string(), sim,
                         rx.problem.plant.n, rx.basis.l_c);
    mode_docs.push_back(mode_summary_to_json(ms));
    summary.runs.push_back(std::move(ms));
  }

  doc["modes"] = std::move(mode_docs);
  if (summary.runs.size() == 2) {
    json cmp;
    cmp["settling_time_momentum"] = json_num(summary.runs[0].settling_time);
    cmp["settling_time_baseline"] = json_num(summary.runs[1].settling_time);
    cmp["momentum_settles_faster"] =
        summary.runs[0].settling_time < summary.runs[1].settling_time;
    doc["comparison"] = std::move(cmp);
  }
  doc["forced"] = summary.forced;
  doc["lambda_min"] = json_num(summary.lambda_min);
  doc["lambda_max"] = json_num(summary.lambda_max);
  doc["eta"] = json_num(summary.eta);
  doc["t_star"] = json_num(summary.t_star);
  doc["M_T_min_eig"] = json_num(summary.M_T_min_eig);
  doc["verdict"] = verdict_to_json(summary.verdict);

  summary.json = doc.dump(2) + "\n";
  write_text_file((std::filesystem::path(config.out_dir) / "summary.json").string(),
                  summary.json);
  return summary;
}

SweepResult cmd_sweep(const ExperimentConfig& config, const SweepSpec& sweep) {
  static const std::vector<std::string> kParams = {"T", "k_c", "rho_d", "rho_i", "lambda"};
  if (std::find(kParams.begin(), kParams.end(), sweep.param) == kParams.end())
    throw UsageError("sweep param must be one of T, k_c, rho_d, rho_i, lambda");
  if (sweep.values.empty()) throw UsageError("sweep requires at least one value");

  const ResolvedExperiment base = resolve_experiment(config);

  auto run_one = [&base, &sweep](double value) {
    ResolvedExperiment rx = base;
    if (sweep.param == "T") rx.config.critic.T = value;
    else if (sweep.param == "k_c") rx.config.critic.k_c = value;
    else if (sweep.param == "rho_d") rx.config.critic.rho_d = value;
    else if (sweep.param == "rho_i") rx.config.critic.rho_i = value;
    else rx.dataset = prefix_subset(base.dataset, static_cast<int>(std::llround(value)));
    validate_critic_tuning_fields(rx.config.critic);

    PreparedRun run = prepare_run(rx, CriticMode::MomentumRestart);
    const SimulationResult sim =
        simulate_closed_loop(run.spec, run.z0, rx.config.integrator, &run.diag);
    const ModeSummary ms = summarize_run(rx, CriticMode::MomentumRestart, sim);

    SweepRow row;
    row.param = sweep.param;
    row.value = value;
    row.lambda_min = run.spec.certificate.lambda_min;
    row.final_theta_c_err_inf = ms.theta_c_err_inf;
    row.final_theta_c_err_2 = ms.theta_c_err_2;
    row.settling_time = ms.settling_time;
    row.fit_rate = ms.fit_rate;
    row.jump_count = ms.jump_count;
    return row;
  };

  std::vector<std::future<SweepRow>> futures;
  futures.reserve(sweep.values.size());
  for (double v : sweep.values)
    futures.push_back(std::async(std::launch::async, run_one, v));

  SweepResult result;
  for (auto& f : futures) result.rows.push_back(f.get());

  std::filesystem::create_directories(config.out_dir);
  std::string csv =
      "param,value,lambda_min,final_theta_c_err_inf,final_theta_c_err_2,settling_time,"
      "fit_rate,jump_count\n";
  for (const auto& r : result.rows) {
    csv += r.param + ',' + format_double(r.value) + ',' + format_double(r.lambda_min) + ',' +
           format_double(r.final_theta_c_err_inf) + ',' + format_double(r.final_theta_c_err_2) +
           ',' + format_double(r.settling_time) + ',' + format_double(r.fit_rate) + ',' +
           std::to_string(r.jump_count) + '\n';
  }
  result.csv_path = (std::filesystem::path(config.out_dir) / "sweep.csv").string();
  write_text_file(result.csv_path, csv);
  return result;
}

std::string trajectory_csv_header(int n, int l_c) {
  std::string h = "t,j";
  for (int i = 1; i <= n; ++i) h += ",x" + std::to_string(i);
  for (int i = 1; i <= l_c; ++i) h += ",thc" + std::to_string(i);
  for (int i = 1; i <= l_c; ++i) h += ",p" + std::to_string(i);
  h += ",tau";
  for (int i = 1; i <= l_c; ++i) h += ",thu" + std::to_string(i);
  h += ",Vc,Vfull,dist_A,hjb_residual";
  return h;
}

void write_trajectory_csv(const std::string& path, const SimulationResult& sim, int n, int l_c) {
  if (sim.diagnostics.size() != sim.arc.samples.size())
    throw UsageError("trajectory files require diagnostics for every stored sample");
  std::string out = trajectory_csv_header(n, l_c) + "\n";
  const Eigen::Index dim = n + 3 * l_c + 1;
  for (std::size_t i = 0; i < sim.arc.samples.size(); ++i) {
    const HybridSample& s = sim.arc.samples[i];
    if (s.z.size() != dim) throw UsageError("sample dimension mismatch in trajectory write");
    out += format_double(s.t);
    out += ',' + std::to_string(s.j);
    for (Eigen::Index k = 0; k < dim; ++k) out += ',' + format_double(s.z(k));
    const DiagnosticsSample& d = sim.diagnostics[i];
    out += ',' + format_double(d.V_c) + ',' + format_double(d.V_full) + ',' +
           format_double(d.dist_A) + ',' + format_double(d.hjb_residual) + '\n';
  }
  write_text_file(path, out);
}

TrajectoryFile read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trajectory file", path);
  TrajectoryFile file;
  if (!std::getline(in, file.header)) throw IoError("trajectory file is empty", path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    const char* ptr = line.c_str();
    while (true) {
      char* end = nullptr;
      const double v = std::strtod(ptr, &end);
      if (end == ptr) throw IoError("unparseable number in trajectory file", path);
      row.push_back(v);
      if (*end == ',') ptr = end + 1;
      else if (*end == '\0' || *end == '\r') break;
      else throw IoError("unexpected character in trajectory file", path);
    }
    file.rows.push_back(std::move(row));
  }
  return file;
}

double settling_time(const HybridArc& arc, const Eigen::VectorXd& theta_c_star, double radius,
                     int n, int l_c) {
  if (arc.samples.empty()) throw UsageError("empty hybrid arc");
  long last_outside = -1;
  for (std::size_t i = 0; i < arc.samples.size(); ++i) {
    const double err =
        (arc.samples[i].z.segment(n, l_c) - theta_c_star).norm();
    if (err >= radius) last_outside = static_cast<long>(i);
  }
  if (last_outside < 0) return arc.samples.front().t;
  if (last_outside + 1 >= static_cast<long>(arc.samples.size()))
    return std::numeric_limits<double>::infinity();
  return arc.samples[last_outside + 1].t;
}

double fitted_log_rate(const HybridArc& arc, const Eigen::VectorXd& theta_c_star, int n,
                       int l_c) {
  if (arc.samples.empty()) throw UsageError("empty hybrid arc");
  std::vector<double> ts, logs;
  for (const auto& s : arc.samples) {
    const double err = (s.z.segment(n, l_c) - theta_c_star).norm();
    if (err > kRateFloor) {
      ts.push_back(s.t);
      logs.push_back(std::log(err));
    }
  }
  if (ts.size() < 2) return 0.0;

  double t_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    t_mean += ts[i];
    y_mean += logs[i];
  }
  t_mean /= static_cast<double>(ts.size());
  y_mean /= static_cast<double>(ts.size());
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    num += (ts[i] - t_mean) * (logs[i] - y_mean);
    den += (ts[i] - t_mean) * (ts[i] - t_mean);
  }
  return den > 0.0 ? num / den : 0.0;
}

}  // namespace adp
