#pragma once

#include "adp/closed_loop.hpp"
#include "adp/critic.hpp"
#include "adp/hybrid.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace adp {

// Where the recorded dataset comes from: a synthesized expert grid or a file.
struct DatasetSource {
  enum class Kind { GenerateGrid, LoadFile };
  Kind kind = Kind::GenerateGrid;
  double extent = 2.0;       // grid spans [−extent, extent] per axis
  int points_per_axis = 4;
  std::string path;          // for LoadFile
};

// Initial conditions; unset optionals resolve to p0 = θ_c0 and τ0 = T₀.
// θ_u0 is either explicit or a seeded uniform draw from [low, high]^l_c.
struct InitConfig {
  Eigen::VectorXd x0;
  Eigen::VectorXd theta_c0;
  std::optional<Eigen::VectorXd> p0;
  std::optional<double> tau0;
  Eigen::VectorXd theta_u0;
  bool theta_u0_seeded = false;
  double theta_u0_low = 0.0;
  double theta_u0_high = 1.0;
  unsigned long seed = 0;
};

enum class RunMode { Momentum, Baseline, Both };

struct SweepSpec {
  std::string param;           // one of: T, k_c, rho_d, rho_i, lambda
  std::vector<double> values;  // for lambda: dataset prefix sizes
};

struct ExperimentConfig {
  std::string plant_selector = "builtin-example";
  std::string basis_selector = "quadratic-monomials-2d";
  DatasetSource dataset;
  double richness_floor = kDefaultRichnessFloor;
  CriticTuning critic;
  ActorTuning actor;
  IntegratorConfig integrator;
  InitConfig init;
  RunMode mode = RunMode::Momentum;
  std::string out_dir = "out";
  std::optional<SweepSpec> sweep;
};

// The §6 configuration; every field of an empty config document defaults to this.
ExperimentConfig default_builtin_config();

ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);

// Config with the registry resolved: problem, basis, regressor, dataset, and
// the diagnostic target θ_c* (known for the builtin benchmark).
struct ResolvedExperiment {
  BenchmarkProblem problem;
  BasisSet basis;
  ActorRegressor regressor;
  RecordedDataset dataset;
  Eigen::VectorXd theta_c_star;
  ExperimentConfig config;
};

ResolvedExperiment resolve_experiment(const ExperimentConfig& config);

// Final-state and transient metrics of one closed-loop run.
struct ModeSummary {
  std::string mode;
  double final_t = 0.0;
  long final_j = 0;
  double theta_c_err_inf = 0.0;
  double theta_c_err_2 = 0.0;
  double x_norm = 0.0;
  double theta_u_err_2 = 0.0;
  double dist_A = 0.0;
  double settling_time = 0.0;  // +inf when the error never settles
  double fit_rate = 0.0;
  long jump_count = 0;
  std::string csv_file;        // set when a trajectory file was written
};

struct RunSummary {
  bool forced = false;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double eta = 0.0;
  double t_star = 0.0;
  double M_T_min_eig = 0.0;
  TuningVerdict verdict;
  std::vector<ModeSummary> runs;
  std::string json;  // the summary document as written to summary.json
};

struct CertifyReport {
  RichnessCertificate certificate;
  std::string json;
};

struct ValidateReport {
  double lambda_min = 0.0;
  TuningVerdict verdict;
  double t_star = 0.0;
  std::string json;
};

struct SweepRow {
  std::string param;
  double value = 0.0;
  double lambda_min = 0.0;
  double final_theta_c_err_inf = 0.0;
  double final_theta_c_err_2 = 0.0;
  double settling_time = 0.0;
  double fit_rate = 0.0;
  long jump_count = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
  std::string csv_path;
};

// Certifies the resolved dataset and serializes Λ with its spectrum.
CertifyReport cmd_certify_data(const ExperimentConfig& config);

// Evaluates the sufficient-condition gaps and the suggested restart period T*.
ValidateReport cmd_validate(const ExperimentConfig& config);

// Simulates the configured mode(s), writing one trajectory CSV per mode plus
// summary.json into out_dir. Refuses invalid tunings unless force is set.
RunSummary cmd_run(const ExperimentConfig& config, bool force);

// One momentum run per sweep value (runs fan out across worker threads);
// writes the aggregate sweep.csv into out_dir.
SweepResult cmd_sweep(const ExperimentConfig& config, const SweepSpec& sweep);

// Trajectory CSV: header `t,j,x1..xn,thc1..thcL,p1..pL,tau,thu1..thuL,Vc,Vfull,dist_A,hjb_residual`,
// one row per stored sample, %.17g formatting (bit-exact round trip).
std::string trajectory_csv_header(int n, int l_c);
void write_trajectory_csv(const std::string& path, const SimulationResult& sim, int n, int l_c);

struct TrajectoryFile {
  std::string header;
  std::vector<std::vector<double>> rows;
};
TrajectoryFile read_trajectory_csv(const std::string& path);

// Last hybrid time at which |θ_c−θ_c*|₂ enters the radius-ball and stays;
// +inf when the final sample is still outside.
double settling_time(const HybridArc& arc, const Eigen::VectorXd& theta_c_star, double radius,
                     int n, int l_c);

// Least-squares slope of ln|θ_c−θ_c*|₂ against t over the whole arc, skipping
// samples already below 1e-9; zero when fewer than two samples qualify.
double fitted_log_rate(const HybridArc& arc, const Eigen::VectorXd& theta_c_star, int n, int l_c);

}  // namespace adp
