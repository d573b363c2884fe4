#pragma once

#include "adp/plant.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace adp {

// Value-function basis φ_c with analytic Jacobian ∂φ_c/∂x (l_c × n).
struct BasisSet {
  int l_c = 0;
  int n = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> eval;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> jacobian;
};

// ω(x) = −½ ∂φ_c/∂x · g(x) · Π_u⁻¹ (l_c × m), the actor's regressor.
struct ActorRegressor {
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> omega;
  int l_c = 0;
  int m = 0;
};

// Sample estimates of the boundedness constants (φ̄_c, d̄φ_c, ḡ) over a grid.
struct FeatureBounds {
  double phi_max = 0.0;
  double jacobian_max = 0.0;
  double g_max = 0.0;
};

// φ_c(x) = (x₁², x₁x₂, x₂²) for two-dimensional states.
BasisSet quadratic_monomial_basis_2d();

// ψ(x,u) = ∂φ_c/∂x · (f(x) + g(x)u).
Eigen::VectorXd psi(const BasisSet& basis, const ControlAffinePlant& plant,
                    const Eigen::VectorXd& x, const Eigen::VectorXd& u);

// Ψ = ψ / (1 + ψᵀψ); |Ψ| ≤ ½ always.
Eigen::VectorXd normalized_psi(const Eigen::VectorXd& psi_val);

ActorRegressor make_actor_regressor(const BasisSet& basis, const ControlAffinePlant& plant,
                                    const QuadraticCost& cost);

// Ω(x) = α₁ ω(x)ω(x)ᵀ / (1 + tr(ω(x)ᵀω(x))) + α₂ I; spectrum inside [α₂, α₁+α₂].
Eigen::MatrixXd capital_omega(const ActorRegressor& reg, const Eigen::VectorXd& x,
                              double alpha1, double alpha2);

// Maxima of |φ_c(x)|, |∂φ_c/∂x| and |g(x)| (induced 2-norms) over the grid.
FeatureBounds estimate_bounds(const BasisSet& basis, const ControlAffinePlant& plant,
                              const std::vector<Eigen::VectorXd>& K_grid);

}  // namespace adp
