#include "adp/critic.hpp"

#include "adp/errors.hpp"

#include <cmath>
#include <limits>

namespace adp {

void validate_critic_tuning_fields(const CriticTuning& tuning) {
  if (!(tuning.T0 > 0.0)) throw UsageError("T0 must be positive");
  if (!(tuning.T > tuning.T0)) throw UsageError("T must exceed T0");
  if (!(tuning.k_c > 0.0)) throw UsageError("k_c must be positive");
  if (!(tuning.rho_d > 0.0)) throw UsageError("rho_d must be positive");
  if (tuning.rho_i < 0.0) throw UsageError("rho_i must be nonnegative");
}

double critic_value(const BasisSet& basis, const Eigen::VectorXd& theta_c,
                    const Eigen::VectorXd& x) {
  if (theta_c.size() != basis.l_c) throw UsageError("critic weight dimension mismatch");
  return theta_c.dot(basis.eval(x));
}

double hamiltonian_estimate(const Eigen::VectorXd& theta_c, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& u, const BasisSet& basis,
                            const ControlAffinePlant& plant, const QuadraticCost& cost) {
  if (theta_c.size() != basis.l_c) throw UsageError("critic weight dimension mismatch");
  return theta_c.dot(psi(basis, plant, x, u)) + eval_running_cost(cost, x, u);
}

double joint_error(const Eigen::VectorXd& theta_c, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& u, const RecordedDataset& ds, double rho_i,
                   double rho_d, const BasisSet& basis, const ControlAffinePlant& plant,
                   const QuadraticCost& cost) {
  double acc = 0.0;
  if (rho_i != 0.0) {
    const Eigen::VectorXd psi_val = psi(basis, plant, x, u);
    const double w = 1.0 + psi_val.squaredNorm();
    const double e_i = theta_c.dot(psi_val) + eval_running_cost(cost, x, u);
    acc += rho_i * e_i * e_i / (w * w);
  }
  if (rho_d != 0.0) {
    double data_acc = 0.0;
    for (const auto& s : ds.samples) {
      const double w = 1.0 + s.psi_k.squaredNorm();
      const double e_d = theta_c.dot(s.psi_k) + s.Q_k + s.R_k;
      data_acc += e_d * e_d / (w * w);
    }
    acc += rho_d * data_acc;
  }
  return 0.5 * acc;
}

Eigen::VectorXd grad_joint_error(const Eigen::VectorXd& theta_c, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u, const RecordedDataset& ds,
                                 double rho_i, double rho_d, const BasisSet& basis,
                                 const ControlAffinePlant& plant, const QuadraticCost& cost) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(theta_c.size());
  if (rho_i != 0.0) {
    const Eigen::VectorXd psi_val = psi(basis, plant, x, u);
    const double w = 1.0 + psi_val.squaredNorm();
    const double e_i = theta_c.dot(psi_val) + eval_running_cost(cost, x, u);
    grad.noalias() += (rho_i * e_i / (w * w)) * psi_val;
  }
  if (rho_d != 0.0) {
    for (const auto& s : ds.samples) {
      const double w = 1.0 + s.psi_k.squaredNorm();
      const double e_d = theta_c.dot(s.psi_k) + s.Q_k + s.R_k;
      grad.noalias() += (rho_d * e_d / (w * w)) * s.psi_k;
    }
  }
  return grad;
}

CriticState critic_flow(const CriticState& y, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& u, const CriticTuning& tuning,
                        const RecordedDataset& ds, const BasisSet& basis,
                        const ControlAffinePlant& plant, const QuadraticCost& cost) {
  if (!(y.tau > 0.0)) throw UsageError("critic timer must be positive");
  const Eigen::VectorXd grad =
      grad_joint_error(y.theta_c, x, u, ds, tuning.rho_i, tuning.rho_d, basis, plant, cost);
  CriticState dot;
  if (tuning.mode == CriticMode::MomentumRestart) {
    dot.theta_c = (2.0 / y.tau) * (y.p - y.theta_c);
    dot.p = -2.0 * tuning.k_c * grad;
    dot.tau = 0.5;
  } else {
    dot.theta_c = -tuning.k_c * grad;
    dot.p = Eigen::VectorXd::Zero(y.p.size());
    dot.tau = 0.0;
  }
  return dot;
}

CriticState critic_jump(const CriticState& y, const CriticTuning& tuning, double boundary_tol) {
  if (std::abs(y.tau - tuning.T) > boundary_tol)
    throw UsageError("restart applied away from the tau = T boundary");
  return {y.theta_c, y.theta_c, tuning.T0};
}

TuningVerdict validate_tuning(const CriticTuning& tuning, double lambda_min) {
  validate_critic_tuning_fields(tuning);
  if (!(lambda_min > 0.0))
    throw ConfigError("tuning validation requires a richness certificate with lambda_min > 0");
  TuningVerdict v;
  v.excitation_gap = 2.0 * tuning.rho_d * lambda_min - tuning.rho_i;
  v.lower_gap = tuning.T * tuning.T - tuning.T0 * tuning.T0 -
                1.0 / (2.0 * tuning.k_c * lambda_min * tuning.rho_d);
  v.upper_gap = tuning.rho_i == 0.0
                    ? std::numeric_limits<double>::infinity()
                    : 8.0 * tuning.rho_d * lambda_min / (tuning.k_c * tuning.rho_i * tuning.rho_i) -
                          tuning.T * tuning.T;
  v.ok = v.excitation_gap > 0.0 && v.lower_gap > 0.0 && v.upper_gap > 0.0;
  return v;
}

double optimal_restart_period(double k_c, double rho_d, double lambda_min, double T0) {
  if (!(k_c > 0.0 && rho_d > 0.0 && lambda_min > 0.0 && T0 > 0.0))
    throw UsageError("optimal restart period requires positive inputs");
  return std::exp(1.0) * std::sqrt(1.0 / (2.0 * k_c * rho_d * lambda_min) + T0 * T0);
}

Eigen::Matrix2d decrease_certificate_matrix(const CriticTuning& tuning, double lambda_min,
                                            double tau) {
  if (!(tau > 0.0)) throw UsageError("tau must be positive");
  Eigen::Matrix2d M;
  M << 2.0 / (tuning.k_c * tau * tau), -0.5 * tuning.rho_i,
      -0.5 * tuning.rho_i, tuning.rho_d * lambda_min;
  return M;
}

}  // namespace adp
