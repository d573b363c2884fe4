#pragma once

#include "adp/data.hpp"
#include "adp/features.hpp"
#include "adp/plant.hpp"

#include <Eigen/Dense>

namespace adp {

enum class CriticMode { MomentumRestart, GradientBaseline };

// y = (θ_c, p, τ): critic weights, momentum companion, restart timer.
struct CriticState {
  Eigen::VectorXd theta_c;
  Eigen::VectorXd p;
  double tau = 0.0;
};

struct CriticTuning {
  double k_c = 1.0;
  double rho_i = 1.0;
  double rho_d = 1.0;
  double T0 = 0.1;
  double T = 5.5;
  CriticMode mode = CriticMode::MomentumRestart;
};

// Gaps of the sufficient tuning inequalities:
//   excitation_gap = 2ρ_dλ̲ − ρ_i
//   lower_gap      = T² − T₀² − 1/(2k_cλ̲ρ_d)
//   upper_gap      = 8ρ_dλ̲/(k_cρ_i²) − T²   (+∞ when ρ_i = 0)
struct TuningVerdict {
  bool ok = false;
  double lower_gap = 0.0;
  double upper_gap = 0.0;
  double excitation_gap = 0.0;
};

// Throws UsageError unless T > T0 > 0, k_c > 0, rho_d > 0, rho_i ≥ 0.
void validate_critic_tuning_fields(const CriticTuning& tuning);

// V̂(x) = θ_cᵀ φ_c(x).
double critic_value(const BasisSet& basis, const Eigen::VectorXd& theta_c,
                    const Eigen::VectorXd& x);

// Ĥ = θ_cᵀψ(x,u) + Q(x) + R(u); vanishes at (θ_c*, u*) when the basis is exact.
double hamiltonian_estimate(const Eigen::VectorXd& theta_c, const Eigen::VectorXd& x,
                            const Eigen::VectorXd& u, const BasisSet& basis,
                            const ControlAffinePlant& plant, const QuadraticCost& cost);

// e(θ_c) = ½(ρ_i (eⁱ)²/(1+|ψ|²)² + ρ_d Σ_k (e^d_k)²/(1+|ψ_k|²)²).
double joint_error(const Eigen::VectorXd& theta_c, const Eigen::VectorXd& x,
                   const Eigen::VectorXd& u, const RecordedDataset& ds, double rho_i,
                   double rho_d, const BasisSet& basis, const ControlAffinePlant& plant,
                   const QuadraticCost& cost);

// ∇e(θ_c) = ρ_i ψ eⁱ/(1+|ψ|²)² + ρ_d Σ_k ψ_k e^d_k/(1+|ψ_k|²)².
Eigen::VectorXd grad_joint_error(const Eigen::VectorXd& theta_c, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& u, const RecordedDataset& ds,
                                 double rho_i, double rho_d, const BasisSet& basis,
                                 const ControlAffinePlant& plant, const QuadraticCost& cost);

// Flow derivative. Momentum-restart: (θ̇_c, ṗ, τ̇) = ((2/τ)(p−θ_c), −2k_c∇e, ½).
// Gradient-baseline: θ̇_c = −k_c∇e with p and τ inert.
CriticState critic_flow(const CriticState& y, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& u, const CriticTuning& tuning,
                        const RecordedDataset& ds, const BasisSet& basis,
                        const ControlAffinePlant& plant, const QuadraticCost& cost);

// Restart: (θ_c, p, τ)⁺ = (θ_c, θ_c, T₀). Requires |τ − T| ≤ boundary_tol.
CriticState critic_jump(const CriticState& y, const CriticTuning& tuning,
                        double boundary_tol = 1e-2);

TuningVerdict validate_tuning(const CriticTuning& tuning, double lambda_min);

// T* = e · sqrt(1/(2k_cρ_dλ̲) + T₀²).
double optimal_restart_period(double k_c, double rho_d, double lambda_min, double T0);

// M(τ) = [2/(k_cτ²), −ρ_i/2; −ρ_i/2, ρ_dλ̲], the flow-decrease certificate matrix.
Eigen::Matrix2d decrease_certificate_matrix(const CriticTuning& tuning, double lambda_min,
                                            double tau);

}  // namespace adp
