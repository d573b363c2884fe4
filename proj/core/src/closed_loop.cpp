#include "adp/closed_loop.hpp"

#include "adp/errors.hpp"

#include <cmath>

namespace adp {
namespace {

constexpr double kTauSlack = 1e-12;

// The engine lands restarts on the τ = T boundary, so this slack only guards
// against the jump map being invoked on states it was never flowed to.
constexpr double kJumpBoundaryTol = 1.0;

}  // namespace

Eigen::VectorXd pack_state(const ClosedLoopState& s) {
  const Eigen::Index n = s.x.size();
  const Eigen::Index l = s.y.theta_c.size();
  if (s.y.p.size() != l || s.theta_u.size() != l)
    throw UsageError("closed-loop state has inconsistent weight dimensions");
  Eigen::VectorXd z(n + 3 * l + 1);
  z.segment(0, n) = s.x;
  z.segment(n, l) = s.y.theta_c;
  z.segment(n + l, l) = s.y.p;
  z(n + 2 * l) = s.y.tau;
  z.segment(n + 2 * l + 1, l) = s.theta_u;
  return z;
}

ClosedLoopState unpack_state(const Eigen::VectorXd& z, int n, int l_c) {
  if (z.size() != n + 3 * l_c + 1) throw UsageError("flat state has wrong dimension");
  ClosedLoopState s;
  s.x = z.segment(0, n);
  s.y.theta_c = z.segment(n, l_c);
  s.y.p = z.segment(n + l_c, l_c);
  s.y.tau = z(n + 2 * l_c);
  s.theta_u = z.segment(n + 2 * l_c + 1, l_c);
  return s;
}

ClosedLoopSpec build_closed_loop(const ControlAffinePlant& plant, const QuadraticCost& cost,
                                 const BasisSet& basis, const ActorRegressor& reg,
                                 const RecordedDataset& ds, const CriticTuning& critic_tuning,
                                 const ActorTuning& actor_tuning, double richness_floor) {
  validate_critic_tuning_fields(critic_tuning);
  validate_actor_tuning_fields(actor_tuning);
  if (basis.n != plant.n) throw UsageError("basis/plant dimension mismatch");
  if (ds.l_c != basis.l_c) throw UsageError("dataset/basis dimension mismatch");

  RichnessCertificate cert = certify_richness(ds, richness_floor);
  if (critic_tuning.mode == CriticMode::MomentumRestart && critic_tuning.rho_d > 0.0 &&
      !cert.rich) {
    throw ConfigError("dataset is not sufficiently rich for data-driven momentum training");
  }

  ClosedLoopSpec spec;
  spec.plant = plant;
  spec.cost = cost;
  spec.basis = basis;
  spec.regressor = reg;
  spec.dataset = ds;
  spec.certificate = std::move(cert);
  spec.critic = critic_tuning;
  spec.actor = actor_tuning;
  spec.n = plant.n;
  spec.m = plant.m;
  spec.l_c = basis.l_c;

  const int n = spec.n;
  const int l = spec.l_c;

  spec.system.flow_map = [plant, cost, basis, reg, ds, critic_tuning, actor_tuning, n,
                          l](const Eigen::VectorXd& z) {
    ClosedLoopState s = unpack_state(z, n, l);
    const Eigen::VectorXd u = actor_output(reg, s.theta_u, s.x);
    ClosedLoopState dot;
    dot.x = plant.f(s.x) + plant.g(s.x) * u;
    dot.y = critic_flow(s.y, s.x, u, critic_tuning, ds, basis, plant, cost);
    dot.theta_u = actor_flow(s.theta_u, s.x, s.y.theta_c, reg, actor_tuning);
    return pack_state(dot);
  };
  spec.system.jump_map = [critic_tuning, n, l](const Eigen::VectorXd& z) {
    ClosedLoopState s = unpack_state(z, n, l);
    s.y = critic_jump(s.y, critic_tuning, kJumpBoundaryTol);
    return pack_state(s);
  };

  const int tau_index = n + 2 * l;
  const double T0 = critic_tuning.T0;
  const double T = critic_tuning.T;
  if (critic_tuning.mode == CriticMode::MomentumRestart) {
    spec.system.flow_set = [tau_index, T0, T](const Eigen::VectorXd& z) {
      const double tau = z(tau_index);
      return tau >= T0 - kTauSlack && tau <= T;
    };
    spec.system.jump_set = [tau_index, T](const Eigen::VectorXd& z) {
      return z(tau_index) >= T;
    };
  } else {
    spec.system.flow_set = [](const Eigen::VectorXd&) { return true; };
    spec.system.jump_set = [](const Eigen::VectorXd&) { return false; };
  }
  return spec;
}

double lyapunov_Vc(const CriticState& y, const TargetSet& target, const Eigen::MatrixXd& Lambda,
                   double k_c, double rho_d) {
  const Eigen::VectorXd theta_err = y.theta_c - target.theta_c_star;
  return 0.25 * (y.p - y.theta_c).squaredNorm() +
         0.25 * (y.p - target.theta_c_star).squaredNorm() +
         0.5 * k_c * rho_d * y.tau * y.tau * theta_err.dot(Lambda * theta_err);
}

double jump_decrease_factor(const CriticTuning& tuning, double lambda_min) {
  if (!(lambda_min > 0.0)) throw ConfigError("jump decrease factor requires lambda_min > 0");
  const double T2 = tuning.T * tuning.T;
  return 1.0 - tuning.T0 * tuning.T0 / T2 -
         1.0 / (2.0 * tuning.k_c * tuning.rho_d * lambda_min * T2);
}

double lyapunov_full(const ClosedLoopState& s, const TargetSet& target,
                     const ReferenceSolution& ref, const Eigen::MatrixXd& Lambda, double k_c,
                     double rho_d) {
  if (!ref.value) throw UsageError("composite Lyapunov function requires a reference solution");
  return ref.value(s.x) + lyapunov_Vc(s.y, target, Lambda, k_c, rho_d) +
         0.5 * (s.theta_u - target.theta_c_star).squaredNorm();
}

double distance_to_target(const ClosedLoopState& s, const TargetSet& target) {
  double tau_dist = 0.0;
  if (s.y.tau < target.T0) tau_dist = target.T0 - s.y.tau;
  else if (s.y.tau > target.T) tau_dist = s.y.tau - target.T;
  return std::sqrt(s.x.squaredNorm() + (s.y.theta_c - target.theta_c_star).squaredNorm() +
                   (s.y.p - target.theta_c_star).squaredNorm() + tau_dist * tau_dist +
                   (s.theta_u - target.theta_c_star).squaredNorm());
}

SimulationResult simulate_closed_loop(const ClosedLoopSpec& spec, const ClosedLoopState& z0,
                                      const IntegratorConfig& cfg,
                                      const DiagnosticsContext* diagnostics) {
  if (diagnostics && !diagnostics->reference)
    throw UsageError("diagnostics require a reference solution");

  SimulationResult result;
  result.arc = solve_hybrid(spec.system, pack_state(z0), cfg);

  if (diagnostics) {
    result.diagnostics.reserve(result.arc.samples.size());
    for (const auto& sample : result.arc.samples) {
      const ClosedLoopState s = unpack_state(sample.z, spec.n, spec.l_c);
      DiagnosticsSample d;
      d.V_c = lyapunov_Vc(s.y, diagnostics->target, spec.certificate.Lambda, spec.critic.k_c,
                          spec.critic.rho_d);
      d.V_full = lyapunov_full(s, diagnostics->target, *diagnostics->reference,
                               spec.certificate.Lambda, spec.critic.k_c, spec.critic.rho_d);
      d.dist_A = distance_to_target(s, diagnostics->target);
      d.theta_c_err = (s.y.theta_c - diagnostics->target.theta_c_star).norm();
      d.theta_u_err = (s.theta_u - diagnostics->target.theta_c_star).norm();
      const Eigen::VectorXd u = actor_output(spec.regressor, s.theta_u, s.x);
      d.hjb_residual =
          hamiltonian_estimate(s.y.theta_c, s.x, u, spec.basis, spec.plant, spec.cost);
      result.diagnostics.push_back(d);
    }
  }
  return result;
}

}  // namespace adp
