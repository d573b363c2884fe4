#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

namespace adp {

using FlowMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using JumpMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using StatePredicate = std::function<bool(const Eigen::VectorXd&)>;

// Hybrid system over a flat state vector: flow set C with flow map F,
// jump set D with jump map G. Jumps have priority on C ∩ D.
struct HybridSystem {
  FlowMap flow_map;
  StatePredicate flow_set;
  JumpMap jump_map;
  StatePredicate jump_set;
};

struct IntegratorConfig {
  double step = 1e-3;      // fixed RK4 step (seconds)
  double t_max = 60.0;
  long j_max = 1000000;    // jump budget (Zeno truncation)
  int record_every = 10;   // store every k-th flow sample
};

struct HybridSample {
  double t = 0.0;
  long j = 0;
  Eigen::VectorXd z;
};

// Stamp of one jump; indices point into HybridArc::samples (pre at (t, j),
// post at (t, j+1); both are always stored).
struct JumpStamp {
  double t = 0.0;
  long j_pre = 0;
  std::size_t pre_index = 0;
  std::size_t post_index = 0;
};

enum class StopReason { TimeLimit, JumpLimit, LeftDomain };

struct HybridArc {
  std::vector<HybridSample> samples;
  std::vector<JumpStamp> jumps;
  StopReason stop_reason = StopReason::TimeLimit;

  const HybridSample& final_sample() const;
  std::vector<double> jump_times() const;
};

// One fixed-step classical RK4 step of ż = f(z).
Eigen::VectorXd flow_step(const FlowMap& f, const Eigen::VectorXd& z, double h);

// Simulates the hybrid arc from z0: flows while in C (jumping whenever in D,
// with priority on C ∩ D), until t ≥ t_max or j ≥ j_max. A flow step that
// leaves C ∪ D is bisected to land on the boundary within 1e-9, after which
// the jump/termination rule applies. Pre- and post-jump samples, the initial
// sample, and the final sample are always stored; in between, every
// record_every-th step is stored.
HybridArc solve_hybrid(const HybridSystem& sys, const Eigen::VectorXd& z0,
                       const IntegratorConfig& cfg);

}  // namespace adp
