#include "adp/actor.hpp"

#include "adp/errors.hpp"

namespace adp {

void validate_actor_tuning_fields(const ActorTuning& tuning) {
  if (tuning.k_u < 0.0) throw UsageError("k_u must be nonnegative");
  if (tuning.alpha1 < 0.0) throw UsageError("alpha1 must be nonnegative");
  if (!(tuning.alpha2 > 0.0)) throw UsageError("alpha2 must be positive");
}

Eigen::VectorXd actor_output(const ActorRegressor& reg, const Eigen::VectorXd& theta_u,
                             const Eigen::VectorXd& x) {
  if (theta_u.size() != reg.l_c) throw UsageError("actor weight dimension mismatch");
  return reg.omega(x).transpose() * theta_u;
}

double actor_error(const Eigen::VectorXd& x, const Eigen::VectorXd& theta_c,
                   const Eigen::VectorXd& theta_u, const ActorRegressor& reg,
                   const ActorTuning& tuning) {
  if (theta_u.size() != theta_c.size()) throw UsageError("actor/critic weight size mismatch");
  const Eigen::MatrixXd om = reg.omega(x);
  const Eigen::VectorXd diff = theta_u - theta_c;
  const Eigen::VectorXd eps_a = om.transpose() * diff;
  const double denom = 1.0 + (om.transpose() * om).trace();
  return 0.5 * (tuning.alpha1 * eps_a.squaredNorm() / denom +
                tuning.alpha2 * diff.squaredNorm());
}

Eigen::VectorXd actor_flow(const Eigen::VectorXd& theta_u, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& theta_c, const ActorRegressor& reg,
                           const ActorTuning& tuning) {
  if (theta_u.size() != theta_c.size()) throw UsageError("actor/critic weight size mismatch");
  const Eigen::MatrixXd Omega = capital_omega(reg, x, tuning.alpha1, tuning.alpha2);
  return -tuning.k_u * (Omega * (theta_u - theta_c));
}

}  // namespace adp
