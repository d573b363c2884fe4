#include "adp/features.hpp"

#include "adp/errors.hpp"

namespace adp {

BasisSet quadratic_monomial_basis_2d() {
  BasisSet b;
  b.l_c = 3;
  b.n = 2;
  b.eval = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd phi(3);
    phi(0) = x(0) * x(0);
    phi(1) = x(0) * x(1);
    phi(2) = x(1) * x(1);
    return phi;
  };
  b.jacobian = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd J(3, 2);
    J << 2.0 * x(0), 0.0,
         x(1), x(0),
         0.0, 2.0 * x(1);
    return J;
  };
  return b;
}

Eigen::VectorXd psi(const BasisSet& basis, const ControlAffinePlant& plant,
                    const Eigen::VectorXd& x, const Eigen::VectorXd& u) {
  if (x.size() != basis.n || x.size() != plant.n) throw UsageError("state dimension mismatch");
  if (u.size() != plant.m) throw UsageError("input dimension mismatch");
  return basis.jacobian(x) * (plant.f(x) + plant.g(x) * u);
}

Eigen::VectorXd normalized_psi(const Eigen::VectorXd& psi_val) {
  if (!psi_val.allFinite()) throw NumericalError("non-finite regressor");
  return psi_val / (1.0 + psi_val.squaredNorm());
}

ActorRegressor make_actor_regressor(const BasisSet& basis, const ControlAffinePlant& plant,
                                    const QuadraticCost& cost) {
  if (basis.n != plant.n) throw UsageError("basis/plant dimension mismatch");
  const Eigen::MatrixXd Pi_u_inv = cost.Pi_u.inverse();
  ActorRegressor reg;
  reg.l_c = basis.l_c;
  reg.m = plant.m;
  reg.omega = [jac = basis.jacobian, g = plant.g, Pi_u_inv](const Eigen::VectorXd& x) {
    return Eigen::MatrixXd(-0.5 * jac(x) * g(x) * Pi_u_inv);
  };
  return reg;
}

Eigen::MatrixXd capital_omega(const ActorRegressor& reg, const Eigen::VectorXd& x,
                              double alpha1, double alpha2) {
  if (!(alpha2 > 0.0)) throw UsageError("alpha2 must be positive");
  if (alpha1 < 0.0) throw UsageError("alpha1 must be nonnegative");
  const Eigen::MatrixXd om = reg.omega(x);
  const double denom = 1.0 + (om.transpose() * om).trace();
  Eigen::MatrixXd out = (alpha1 / denom) * (om * om.transpose());
  out.diagonal().array() += alpha2;
  return out;
}

FeatureBounds estimate_bounds(const BasisSet& basis, const ControlAffinePlant& plant,
                              const std::vector<Eigen::VectorXd>& K_grid) {
  if (K_grid.empty()) throw UsageError("bound estimation requires a nonempty grid");
  FeatureBounds bounds;
  for (const auto& x : K_grid) {
    bounds.phi_max = std::max(bounds.phi_max, basis.eval(x).norm());
    bounds.jacobian_max =
        std::max(bounds.jacobian_max, basis.jacobian(x).operatorNorm());
    bounds.g_max = std::max(bounds.g_max, plant.g(x).operatorNorm());
  }
  return bounds;
}

}  // namespace adp
