#include <benchmark/benchmark.h>

#include <Eigen/Dense>

#include "adp/closed_loop.hpp"
#include "adp/critic.hpp"
#include "adp/data.hpp"
#include "adp/experiment.hpp"
#include "adp/features.hpp"
#include "adp/hybrid.hpp"

namespace {

const adp::ResolvedExperiment& experiment() {
  static const adp::ResolvedExperiment rx =
      adp::resolve_experiment(adp::default_builtin_config());
  return rx;
}

adp::ClosedLoopSpec make_spec() {
  const adp::ResolvedExperiment& rx = experiment();
  adp::CriticTuning tuning = rx.config.critic;
  tuning.mode = adp::CriticMode::MomentumRestart;
  return adp::build_closed_loop(rx.problem.plant, rx.problem.cost, rx.basis, rx.regressor,
                                rx.dataset, tuning, rx.config.actor, rx.config.richness_floor);
}

Eigen::VectorXd initial_state() {
  const adp::ResolvedExperiment& rx = experiment();
  adp::ClosedLoopState s;
  s.x = rx.config.init.x0;
  s.y.theta_c = rx.config.init.theta_c0;
  s.y.p = *rx.config.init.p0;
  s.y.tau = *rx.config.init.tau0;
  s.theta_u = rx.config.init.theta_u0;
  return adp::pack_state(s);
}

void BM_FlowStep(benchmark::State& state) {
  const auto f = [](const Eigen::VectorXd& z) { return Eigen::VectorXd(-z); };
  Eigen::VectorXd z = Eigen::VectorXd::Ones(8);
  for (auto _ : state) {
    z = adp::flow_step(f, z, 1e-3);
    benchmark::DoNotOptimize(z.data());
  }
}
BENCHMARK(BM_FlowStep);

void BM_GradJointError(benchmark::State& state) {
  const adp::ResolvedExperiment& rx = experiment();
  const Eigen::VectorXd theta = rx.config.init.theta_c0;
  const Eigen::VectorXd x = rx.config.init.x0;
  const Eigen::VectorXd u = rx.problem.reference.policy(x);
  for (auto _ : state) {
    Eigen::VectorXd g =
        adp::grad_joint_error(theta, x, u, rx.dataset, rx.config.critic.rho_i,
                              rx.config.critic.rho_d, rx.basis, rx.problem.plant,
                              rx.problem.cost);
    benchmark::DoNotOptimize(g.data());
  }
}
BENCHMARK(BM_GradJointError);

void BM_ClosedLoopStep(benchmark::State& state) {
  const adp::ClosedLoopSpec spec = make_spec();
  Eigen::VectorXd z = initial_state();
  for (auto _ : state) {
    z = adp::flow_step(spec.system.flow_map, z, 1e-3);
    benchmark::DoNotOptimize(z.data());
  }
}
BENCHMARK(BM_ClosedLoopStep);

void BM_CertifyRichness(benchmark::State& state) {
  const adp::ResolvedExperiment& rx = experiment();
  for (auto _ : state) {
    adp::RichnessCertificate cert = adp::certify_richness(rx.dataset);
    benchmark::DoNotOptimize(cert.lambda_min);
  }
}
BENCHMARK(BM_CertifyRichness);

}  // namespace

BENCHMARK_MAIN();
