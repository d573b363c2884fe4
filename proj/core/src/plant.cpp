#include "adp/plant.hpp"

#include "adp/errors.hpp"

#include <cmath>

namespace adp {
namespace {

void require_dims(const ControlAffinePlant& plant, const Eigen::VectorXd& x,
                  const Eigen::VectorXd& u) {
  if (x.size() != plant.n) throw UsageError("state dimension mismatch");
  if (u.size() != plant.m) throw UsageError("input dimension mismatch");
}

void require_spd(const Eigen::MatrixXd& M, const char* name) {
  if (M.rows() != M.cols()) throw UsageError(std::string(name) + " must be square");
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw UsageError(std::string(name) + " must be symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw UsageError(std::string(name) + " must be positive definite");
}

}  // namespace

QuadraticCost make_quadratic_cost(const Eigen::MatrixXd& Pi_x, const Eigen::MatrixXd& Pi_u) {
  require_spd(Pi_x, "Pi_x");
  require_spd(Pi_u, "Pi_u");
  return {Pi_x, Pi_u};
}

Eigen::VectorXd eval_dynamics(const ControlAffinePlant& plant, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u) {
  require_dims(plant, x, u);
  return plant.f(x) + plant.g(x) * u;
}

double eval_running_cost(const QuadraticCost& cost, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u) {
  if (x.size() != cost.Pi_x.rows()) throw UsageError("state dimension mismatch");
  if (u.size() != cost.Pi_u.rows()) throw UsageError("input dimension mismatch");
  return x.dot(cost.Pi_x * x) + u.dot(cost.Pi_u * u);
}

Eigen::VectorXd reference_policy(const ReferenceSolution& ref, const Eigen::VectorXd& x) {
  return ref.policy(x);
}

BenchmarkProblem builtin_example_plant() {
  ControlAffinePlant plant;
  plant.n = 2;
  plant.m = 1;
  plant.f = [](const Eigen::VectorXd& x) {
    const double c = std::cos(2.0 * x(0)) + 2.0;
    Eigen::VectorXd v(2);
    v(0) = -x(0) + x(1);
    v(1) = -0.5 * (x(0) + x(1) * (1.0 - c * c));
    return v;
  };
  plant.g = [](const Eigen::VectorXd& x) {
    Eigen::MatrixXd G(2, 1);
    G(0, 0) = 0.0;
    G(1, 0) = std::cos(2.0 * x(0)) + 2.0;
    return G;
  };

  QuadraticCost cost = make_quadratic_cost(Eigen::MatrixXd::Identity(2, 2),
                                           Eigen::MatrixXd::Identity(1, 1));

  ReferenceSolution ref;
  ref.value = [](const Eigen::VectorXd& x) { return 0.5 * x(0) * x(0) + x(1) * x(1); };
  ref.value_gradient = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd g(2);
    g(0) = x(0);
    g(1) = 2.0 * x(1);
    return g;
  };
  ref.policy = [](const Eigen::VectorXd& x) {
    Eigen::VectorXd u(1);
    u(0) = -(std::cos(2.0 * x(0)) + 2.0) * x(1);
    return u;
  };

  return {std::move(plant), std::move(cost), std::move(ref)};
}

}  // namespace adp
