#pragma once

#include <Eigen/Dense>

#include <functional>

namespace adp {

// ẋ = f(x) + g(x)u with n states and m inputs.
struct ControlAffinePlant {
  int n = 0;
  int m = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> f;
  std::function<Eigen::MatrixXd(const Eigen::VectorXd&)> g;  // n×m
};

// Q(x) = xᵀΠ_x x, R(u) = uᵀΠ_u u.
struct QuadraticCost {
  Eigen::MatrixXd Pi_x;
  Eigen::MatrixXd Pi_u;
};

// Known optimal quantities, used for expert data generation and diagnostics only.
struct ReferenceSolution {
  std::function<double(const Eigen::VectorXd&)> value;                    // V*
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> value_gradient;  // ∇V*
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> policy;          // u*
};

struct BenchmarkProblem {
  ControlAffinePlant plant;
  QuadraticCost cost;
  ReferenceSolution reference;
};

// Validates symmetry (1e-12) and positive definiteness of both weight matrices.
QuadraticCost make_quadratic_cost(const Eigen::MatrixXd& Pi_x, const Eigen::MatrixXd& Pi_u);

Eigen::VectorXd eval_dynamics(const ControlAffinePlant& plant, const Eigen::VectorXd& x,
                              const Eigen::VectorXd& u);

double eval_running_cost(const QuadraticCost& cost, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& u);

Eigen::VectorXd reference_policy(const ReferenceSolution& ref, const Eigen::VectorXd& x);

// Two-state benchmark with known value function V*(x) = ½x₁² + x₂²:
//   f(x) = (−x₁ + x₂, −½(x₁ + x₂(1 − (cos(2x₁)+2)²)))
//   g(x) = (0, cos(2x₁)+2)ᵀ, Q(x) = xᵀx, R(u) = u², u*(x) = −(cos(2x₁)+2)x₂.
BenchmarkProblem builtin_example_plant();

}  // namespace adp
