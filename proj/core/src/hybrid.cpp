#include "adp/hybrid.hpp"

#include "adp/errors.hpp"

#include <cmath>

namespace adp {
namespace {

constexpr double kBoundaryTol = 1e-9;
constexpr double kTimeEps = 1e-9;

void check_finite(const Eigen::VectorXd& z, double t, long j, const char* what) {
  if (!z.allFinite()) {
    throw NumericalError(std::string("non-finite ") + what + " at t=" + std::to_string(t) +
                         ", j=" + std::to_string(j));
  }
}

void validate(const IntegratorConfig& cfg) {
  if (!(cfg.step > 0.0)) throw UsageError("integrator step must be positive");
  if (!(cfg.t_max >= 0.0)) throw UsageError("t_max must be nonnegative");
  if (cfg.t_max > 0.0 && cfg.step > cfg.t_max) throw UsageError("step exceeds t_max");
  if (cfg.j_max < 1) throw UsageError("j_max must be a positive integer");
  if (cfg.record_every < 1) throw UsageError("record_every must be a positive integer");
}

}  // namespace

const HybridSample& HybridArc::final_sample() const {
  if (samples.empty()) throw UsageError("empty hybrid arc");
  return samples.back();
}

std::vector<double> HybridArc::jump_times() const {
  std::vector<double> out;
  out.reserve(jumps.size());
  for (const auto& s : jumps) out.push_back(s.t);
  return out;
}

Eigen::VectorXd flow_step(const FlowMap& f, const Eigen::VectorXd& z, double h) {
  if (!(h > 0.0)) throw UsageError("flow_step requires h > 0");
  const Eigen::VectorXd k1 = f(z);
  const Eigen::VectorXd k2 = f(z + (0.5 * h) * k1);
  const Eigen::VectorXd k3 = f(z + (0.5 * h) * k2);
  const Eigen::VectorXd k4 = f(z + h * k3);
  return z + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

HybridArc solve_hybrid(const HybridSystem& sys, const Eigen::VectorXd& z0,
                       const IntegratorConfig& cfg) {
  validate(cfg);
  if (!sys.flow_map || !sys.flow_set || !sys.jump_map || !sys.jump_set)
    throw UsageError("hybrid system has unset callables");
  check_finite(z0, 0.0, 0, "initial state");
  if (!sys.flow_set(z0) && !sys.jump_set(z0))
    throw UsageError("initial state outside C, D");

  HybridArc arc;
  double t = 0.0;
  long j = 0;
  Eigen::VectorXd z = z0;
  int steps_since_record = 0;

  arc.samples.push_back({t, j, z});
  auto record = [&]() { arc.samples.push_back({t, j, z}); };
  auto record_if_new = [&]() {
    const HybridSample& last = arc.samples.back();
    if (last.t != t || last.j != j) record();
  };

  while (true) {
    if (t + kTimeEps >= cfg.t_max) {
      arc.stop_reason = StopReason::TimeLimit;
      break;
    }
    if (j >= cfg.j_max) {
      arc.stop_reason = StopReason::JumpLimit;
      break;
    }
    if (sys.jump_set(z)) {
      record_if_new();
      const std::size_t pre = arc.samples.size() - 1;
      z = sys.jump_map(z);
      check_finite(z, t, j, "post-jump state");
      ++j;
      record();
      arc.jumps.push_back({t, j - 1, pre, arc.samples.size() - 1});
      steps_since_record = 0;
      continue;
    }
    if (!sys.flow_set(z)) {
      arc.stop_reason = StopReason::LeftDomain;
      break;
    }

    double h = std::min(cfg.step, cfg.t_max - t);
    Eigen::VectorXd z_next = flow_step(sys.flow_map, z, h);
    check_finite(z_next, t, j, "flow step");

    if (sys.jump_set(z_next) || !sys.flow_set(z_next)) {
      // The step crossed out of C \ D. Bisect so the state lands on the
      // crossing boundary within tolerance, then let the jump/termination
      // rule decide from there.
      double lo = 0.0, hi = h;
      Eigen::VectorXd z_hi = std::move(z_next);
      while (hi - lo > kBoundaryTol) {
        const double mid = 0.5 * (lo + hi);
        Eigen::VectorXd z_mid = flow_step(sys.flow_map, z, mid);
        check_finite(z_mid, t, j, "flow step");
        if (sys.flow_set(z_mid) && !sys.jump_set(z_mid)) {
          lo = mid;
        } else {
          hi = mid;
          z_hi = std::move(z_mid);
        }
      }
      t += hi;
      z = std::move(z_hi);
      if (sys.jump_set(z)) continue;  // landed in D: the jump fires from the boundary
      record_if_new();
      arc.stop_reason = StopReason::LeftDomain;
      return arc;
    }

    t += h;
    z = std::move(z_next);
    if (++steps_since_record >= cfg.record_every) {
      record();
      steps_since_record = 0;
    }
  }

  record_if_new();
  return arc;
}

}  // namespace adp
