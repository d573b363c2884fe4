#pragma once

#include "adp/features.hpp"

#include <Eigen/Dense>

namespace adp {

struct ActorState {
  Eigen::VectorXd theta_u;
};

struct ActorTuning {
  double k_u = 1.0;
  double alpha1 = 1.0;
  double alpha2 = 1.0;
};

// Throws UsageError unless k_u ≥ 0, alpha1 ≥ 0, alpha2 > 0. k_u = 0 freezes
// the actor (the expert-consistent regime used in diagnostics).
void validate_actor_tuning_fields(const ActorTuning& tuning);

// û(x) = ω(x)ᵀ θ_u.
Eigen::VectorXd actor_output(const ActorRegressor& reg, const Eigen::VectorXd& theta_u,
                             const Eigen::VectorXd& x);

// ε(θ_u) = ½(α₁ ε_aᵀε_a/(1+tr(ωᵀω)) + α₂ ε_bᵀε_b), ε_a = ωᵀ(θ_u−θ_c), ε_b = θ_u−θ_c.
double actor_error(const Eigen::VectorXd& x, const Eigen::VectorXd& theta_c,
                   const Eigen::VectorXd& theta_u, const ActorRegressor& reg,
                   const ActorTuning& tuning);

// θ̇_u = −k_u Ω(x)(θ_u − θ_c); Ω from capital_omega, so ∇ε = Ω(θ_u − θ_c) exactly.
Eigen::VectorXd actor_flow(const Eigen::VectorXd& theta_u, const Eigen::VectorXd& x,
                           const Eigen::VectorXd& theta_c, const ActorRegressor& reg,
                           const ActorTuning& tuning);

}  // namespace adp
