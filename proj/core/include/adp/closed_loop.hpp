#pragma once

#include "adp/actor.hpp"
#include "adp/critic.hpp"
#include "adp/data.hpp"
#include "adp/hybrid.hpp"
#include "adp/plant.hpp"

#include <Eigen/Dense>

#include <vector>

namespace adp {

// z = (x, y, θ_u); flat layout [x; θ_c; p; τ; θ_u], dimension n + 3l_c + 1.
struct ClosedLoopState {
  Eigen::VectorXd x;
  CriticState y;
  Eigen::VectorXd theta_u;
};

// 𝒜 = {0} × 𝒜_c × {θ_c*} with 𝒜_c = {θ_c = p = θ_c*, τ ∈ [T₀,T]}.
struct TargetSet {
  Eigen::VectorXd theta_c_star;
  double T0 = 0.1;
  double T = 5.5;
};

struct DiagnosticsSample {
  double V_c = 0.0;
  double V_full = 0.0;
  double dist_A = 0.0;
  double theta_c_err = 0.0;
  double theta_u_err = 0.0;
  double hjb_residual = 0.0;
};
using DiagnosticsLog = std::vector<DiagnosticsSample>;

// Diagnostics inputs that the update laws themselves never see.
struct DiagnosticsContext {
  TargetSet target;
  const ReferenceSolution* reference = nullptr;  // V* for the composite function
};

// The interconnection as one hybrid system, plus everything simulation and
// diagnostics need to interpret its flat state.
struct ClosedLoopSpec {
  HybridSystem system;
  ControlAffinePlant plant;
  QuadraticCost cost;
  BasisSet basis;
  ActorRegressor regressor;
  RecordedDataset dataset;
  RichnessCertificate certificate;
  CriticTuning critic;
  ActorTuning actor;
  int n = 0;
  int m = 0;
  int l_c = 0;
};

struct SimulationResult {
  HybridArc arc;
  DiagnosticsLog diagnostics;  // empty when diagnostics are off
};

Eigen::VectorXd pack_state(const ClosedLoopState& s);
ClosedLoopState unpack_state(const Eigen::VectorXd& z, int n, int l_c);

// Assembles flow/jump maps and sets:
//   flow: ẋ = f + g·û(x), ẏ = F_c(y, x, û(x)), θ̇_u = −k_uΩ(θ_u−θ_c)
//   jump: x⁺ = x, y⁺ = (θ_c, θ_c, T₀), θ_u⁺ = θ_u
//   C = {τ ∈ [T₀,T]}, D = {τ ≥ T} (baseline mode flows everywhere, never jumps).
// Certifies the dataset internally; momentum mode with ρ_d > 0 requires a rich
// dataset (ConfigError otherwise).
ClosedLoopSpec build_closed_loop(const ControlAffinePlant& plant, const QuadraticCost& cost,
                                 const BasisSet& basis, const ActorRegressor& reg,
                                 const RecordedDataset& ds, const CriticTuning& critic_tuning,
                                 const ActorTuning& actor_tuning,
                                 double richness_floor = kDefaultRichnessFloor);

// V_c(y) = |p−θ_c|²/4 + |p−θ_c*|²/4 + k_cρ_d τ²(θ_c−θ_c*)ᵀΛ(θ_c−θ_c*)/2.
double lyapunov_Vc(const CriticState& y, const TargetSet& target, const Eigen::MatrixXd& Lambda,
                   double k_c, double rho_d);

// η = 1 − T₀²/T² − 1/(2k_cρ_dλ̲T²); jumps satisfy V_c⁺ ≤ (1−η)V_c.
double jump_decrease_factor(const CriticTuning& tuning, double lambda_min);

// 𝒱(z) = V*(x) + V_c(y) + ½|θ_u−θ_c*|².
double lyapunov_full(const ClosedLoopState& s, const TargetSet& target,
                     const ReferenceSolution& ref, const Eigen::MatrixXd& Lambda, double k_c,
                     double rho_d);

// |z|_𝒜 = sqrt(|x|² + |θ_c−θ_c*|² + |p−θ_c*|² + dist(τ,[T₀,T])² + |θ_u−θ_c*|²).
double distance_to_target(const ClosedLoopState& s, const TargetSet& target);

// Runs solve_hybrid from z0, evaluating diagnostics at every stored sample
// when a context is supplied (its reference solution is required).
SimulationResult simulate_closed_loop(const ClosedLoopSpec& spec, const ClosedLoopState& z0,
                                      const IntegratorConfig& cfg,
                                      const DiagnosticsContext* diagnostics = nullptr);

}  // namespace adp
