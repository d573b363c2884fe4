#include <doctest.h>

#include <cmath>
#include <limits>

#include "adp/critic.hpp"
#include "adp/data.hpp"
#include "adp/errors.hpp"
#include "adp/features.hpp"
#include "adp/plant.hpp"
#include "oracles.hpp"

using Eigen::MatrixXd;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::VectorXd;

namespace {

struct Fixture {
  adp::BenchmarkProblem bp = adp::builtin_example_plant();
  adp::BasisSet basis = adp::quadratic_monomial_basis_2d();
  adp::RecordedDataset ds;
  Vector3d theta_star{0.5, 0.0, 1.0};

  Fixture() {
    const VectorXd hi = Vector2d(2.0, 2.0);
    ds = adp::record_expert_grid(bp.plant, bp.cost, basis, bp.reference,
                                 adp::lattice_grid(-hi, hi, 4));
  }
};

VectorXd scalar(double v) {
  VectorXd u(1);
  u(0) = v;
  return u;
}

}  // namespace

TEST_CASE("critic_value is the basis inner product") {
  const Fixture f;
  CHECK(adp::critic_value(f.basis, f.theta_star, Vector2d(2, 1)) ==
        doctest::Approx(3.0).epsilon(1e-15));
  CHECK(adp::critic_value(f.basis, Vector3d::Zero(), Vector2d(7, -3)) == 0.0);
  CHECK(adp::critic_value(f.basis, Vector3d(1, 1, 1), Vector2d(1, 1)) ==
        doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(adp::critic_value(f.basis, VectorXd::Zero(2), Vector2d(0, 0)),
                  adp::UsageError);
}

TEST_CASE("hamiltonian_estimate vanishes for the exact critic along the expert") {
  const Fixture f;
  CHECK(adp::hamiltonian_estimate(Vector3d(4, 5, 6), Vector2d(0, 0), scalar(0), f.basis,
                                  f.bp.plant, f.bp.cost) == 0.0);
  CHECK(std::abs(adp::hamiltonian_estimate(f.theta_star, Vector2d(1, 0), scalar(0), f.basis,
                                           f.bp.plant, f.bp.cost)) < 1e-12);

  std::mt19937_64 rng(59);
  for (int i = 0; i < 50; ++i) {
    const Vector2d x(oracle::urand(rng, -2, 2), oracle::urand(rng, -2, 2));
    const VectorXd u = f.bp.reference.policy(x);
    CHECK(std::abs(adp::hamiltonian_estimate(f.theta_star, x, u, f.basis, f.bp.plant,
                                             f.bp.cost)) < 1e-9);
  }
}

TEST_CASE("joint_error zeroes and closed forms") {
  const Fixture f;

  std::mt19937_64 rng(61);
  for (int i = 0; i < 20; ++i) {
    const Vector2d x(oracle::urand(rng, -2, 2), oracle::urand(rng, -2, 2));
    const VectorXd u = f.bp.reference.policy(x);
    CHECK(adp::joint_error(f.theta_star, x, u, f.ds, 1.0, 1.0, f.basis, f.bp.plant,
                           f.bp.cost) < 1e-16);
    const VectorXd theta = oracle::vrand(rng, 3, -2, 2);
    CHECK(adp::joint_error(theta, x, u, f.ds, 0.0, 0.0, f.basis, f.bp.plant, f.bp.cost) == 0.0);
  }

  adp::RecordedDataset one;
  one.l_c = 3;
  adp::DataSample s;
  s.x_k = Vector2d(0, 0);
  s.u_k = scalar(0);
  s.psi_k = Vector3d::Zero();
  s.Q_k = 2.0;
  s.R_k = 1.0;
  one.samples.push_back(s);
  const double e = adp::joint_error(Vector3d(5, 5, 5), Vector2d(0, 0), scalar(0), one, 0.0,
                                    2.0, f.basis, f.bp.plant, f.bp.cost);
  CHECK(e == doctest::Approx(0.5 * 2.0 * 9.0).epsilon(1e-15));
}

TEST_CASE("grad_joint_error matches finite differences") {
  const Fixture f;
  std::mt19937_64 rng(67);
  for (int i = 0; i < 50; ++i) {
    const Vector2d x(oracle::urand(rng, -2, 2), oracle::urand(rng, -2, 2));
    const VectorXd u = scalar(oracle::urand(rng, -3, 3));
    const VectorXd theta = oracle::vrand(rng, 3, -2, 2);
    const double rho_i = oracle::urand(rng, 0, 2);
    const double rho_d = oracle::urand(rng, 0.1, 2);

    const VectorXd grad =
        adp::grad_joint_error(theta, x, u, f.ds, rho_i, rho_d, f.basis, f.bp.plant, f.bp.cost);
    const VectorXd fd = oracle::fd_gradient(
        [&](const VectorXd& th) {
          return adp::joint_error(th, x, u, f.ds, rho_i, rho_d, f.basis, f.bp.plant, f.bp.cost);
        },
        theta);
    for (int k = 0; k < 3; ++k) CHECK(oracle::close_rel(grad(k), fd(k), 1e-6));
  }
}

TEST_CASE("gradient vanishes at the exact critic weights") {
  const Fixture f;
  std::mt19937_64 rng(71);
  for (int i = 0; i < 20; ++i) {
    const Vector2d x(oracle::urand(rng, -2, 2), oracle::urand(rng, -2, 2));
    const VectorXd u = f.bp.reference.policy(x);
    const VectorXd grad = adp::grad_joint_error(f.theta_star, x, u, f.ds, 1.0, 1.0, f.basis,
                                                f.bp.plant, f.bp.cost);
    CHECK(grad.cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("data-only gradient ignores the instantaneous pair") {
  const Fixture f;
  const Vector3d theta(1, 2, 3);
  const VectorXd a = adp::grad_joint_error(theta, Vector2d(1, 1), scalar(2), f.ds, 0.0, 1.5,
                                           f.basis, f.bp.plant, f.bp.cost);
  const VectorXd b = adp::grad_joint_error(theta, Vector2d(-2, 0.5), scalar(-1), f.ds, 0.0, 1.5,
                                           f.basis, f.bp.plant, f.bp.cost);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gradient agrees with its deviation form") {
  const Fixture f;
  const adp::RichnessCertificate cert = adp::certify_richness(f.ds);
  std::mt19937_64 rng(73);
  for (int i = 0; i < 20; ++i) {
    const Vector2d x(oracle::urand(rng, -2, 2), oracle::urand(rng, -2, 2));
    const VectorXd u = f.bp.reference.policy(x);
    const VectorXd theta = oracle::vrand(rng, 3, -2, 2);
    const double rho_i = oracle::urand(rng, 0, 2);
    const double rho_d = oracle::urand(rng, 0.1, 2);

    const VectorXd Psi = adp::normalized_psi(adp::psi(f.basis, f.bp.plant, x, u));
    const MatrixXd Theta = rho_i * Psi * Psi.transpose() + rho_d * cert.Lambda;
    const VectorXd grad =
        adp::grad_joint_error(theta, x, u, f.ds, rho_i, rho_d, f.basis, f.bp.plant, f.bp.cost);
    CHECK((grad - Theta * (theta - f.theta_star)).cwiseAbs().maxCoeff() < 1e-9);
  }
}

TEST_CASE("critic_flow in both modes") {
  const Fixture f;
  adp::CriticTuning momentum;
  adp::CriticTuning baseline;
  baseline.mode = adp::CriticMode::GradientBaseline;

  adp::CriticState y;
  y.theta_c = Vector3d(1, 2, 3);
  y.p = y.theta_c;
  y.tau = 1.7;
  const Vector2d x(1, 1);
  const VectorXd u = scalar(0.5);

  const adp::CriticState dm = adp::critic_flow(y, x, u, momentum, f.ds, f.basis, f.bp.plant,
                                               f.bp.cost);
  CHECK(dm.theta_c.cwiseAbs().maxCoeff() == 0.0);  // p = theta_c
  CHECK(dm.tau == 0.5);
  const VectorXd grad = adp::grad_joint_error(y.theta_c, x, u, f.ds, momentum.rho_i,
                                              momentum.rho_d, f.basis, f.bp.plant, f.bp.cost);
  CHECK((dm.p + 2.0 * momentum.k_c * grad).cwiseAbs().maxCoeff() < 1e-15);

  const adp::CriticState db = adp::critic_flow(y, x, u, baseline, f.ds, f.basis, f.bp.plant,
                                               f.bp.cost);
  CHECK((db.theta_c + baseline.k_c * grad).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(db.p.cwiseAbs().maxCoeff() == 0.0);
  CHECK(db.tau == 0.0);

  SUBCASE("momentum pull toward p") {
    adp::CriticState ahead = y;
    ahead.p = y.theta_c + Vector3d(1, 0, 0);
    const adp::CriticState d = adp::critic_flow(ahead, x, u, momentum, f.ds, f.basis,
                                                f.bp.plant, f.bp.cost);
    CHECK(d.theta_c(0) == doctest::Approx(2.0 / 1.7).epsilon(1e-15));
  }

  SUBCASE("equilibrium at the exact weights") {
    adp::CriticState star;
    star.theta_c = f.theta_star;
    star.p = f.theta_star;
    star.tau = 0.1;
    const Vector2d xe(1.2, -0.7);
    const adp::CriticState d = adp::critic_flow(star, xe, f.bp.reference.policy(xe), momentum,
                                                f.ds, f.basis, f.bp.plant, f.bp.cost);
    CHECK(d.theta_c.cwiseAbs().maxCoeff() == 0.0);
    CHECK(d.p.cwiseAbs().maxCoeff() < 1e-9);
    CHECK(d.tau == 0.5);
  }

  SUBCASE("nonpositive timer is rejected") {
    adp::CriticState badtau = y;
    badtau.tau = 0.0;
    CHECK_THROWS_AS(
        adp::critic_flow(badtau, x, u, momentum, f.ds, f.basis, f.bp.plant, f.bp.cost),
        adp::UsageError);
  }
}

TEST_CASE("critic_jump resets momentum and timer") {
  adp::CriticTuning tuning;  // T0 = 0.1, T = 5.5
  adp::CriticState y;
  y.theta_c = Vector3d(1, 2, 3);
  y.p = Vector3d(9, 9, 9);
  y.tau = 5.5;

  const adp::CriticState post = adp::critic_jump(y, tuning);
  CHECK((post.theta_c - y.theta_c).cwiseAbs().maxCoeff() == 0.0);
  CHECK((post.p - y.theta_c).cwiseAbs().maxCoeff() == 0.0);
  CHECK(post.tau == 0.1);

  const adp::CriticState again = adp::critic_jump(post, tuning, 10.0);
  CHECK((again.theta_c - post.theta_c).cwiseAbs().maxCoeff() == 0.0);
  CHECK((again.p - post.p).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(adp::critic_jump(post, tuning), adp::UsageError);  // tau = T0, far from T
}

TEST_CASE("validate_tuning evaluates the sufficient inequalities") {
  adp::CriticTuning tuning;  // k_c = rho_i = rho_d = 1, T0 = 0.1, T = 5.5

  const adp::TuningVerdict worked = adp::validate_tuning(tuning, 4.0);
  CHECK(worked.lower_gap == doctest::Approx(30.115).epsilon(1e-9));
  CHECK(worked.upper_gap == doctest::Approx(1.75).epsilon(1e-9));
  CHECK(worked.excitation_gap == doctest::Approx(7.0).epsilon(1e-12));
  CHECK(worked.ok);

  SUBCASE("excitation boundary fails strictly") {
    adp::CriticTuning t = tuning;
    t.rho_i = 2.0 * t.rho_d * 4.0;
    const adp::TuningVerdict v = adp::validate_tuning(t, 4.0);
    CHECK(v.excitation_gap == 0.0);
    CHECK(!v.ok);
  }

  SUBCASE("rho_i = 0 removes the upper bound") {
    adp::CriticTuning t = tuning;
    t.rho_i = 0.0;
    const adp::TuningVerdict v = adp::validate_tuning(t, 4.0);
    CHECK(v.upper_gap == std::numeric_limits<double>::infinity());
    CHECK(v.ok);

    t.T = 0.2;  // lower bound now fails: T^2 < T0^2 + 1/(2 k_c lambda rho_d)
    const adp::TuningVerdict w = adp::validate_tuning(t, 4.0);
    CHECK(w.upper_gap == std::numeric_limits<double>::infinity());
    CHECK(!w.ok);
  }

  CHECK_THROWS_AS(adp::validate_tuning(tuning, 0.0), adp::ConfigError);
  CHECK_THROWS_AS(adp::validate_tuning(tuning, -1.0), adp::ConfigError);
}

TEST_CASE("tuning field validation") {
  adp::CriticTuning t;
  t.T = 0.05;  // below T0
  CHECK_THROWS_AS(adp::validate_critic_tuning_fields(t), adp::UsageError);
  t = {};
  t.T0 = 0.0;
  CHECK_THROWS_AS(adp::validate_critic_tuning_fields(t), adp::UsageError);
  t = {};
  t.k_c = 0.0;
  CHECK_THROWS_AS(adp::validate_critic_tuning_fields(t), adp::UsageError);
  t = {};
  t.rho_d = 0.0;
  CHECK_THROWS_AS(adp::validate_critic_tuning_fields(t), adp::UsageError);
  t = {};
  t.rho_i = -0.1;
  CHECK_THROWS_AS(adp::validate_critic_tuning_fields(t), adp::UsageError);
  CHECK_NOTHROW(adp::validate_critic_tuning_fields(adp::CriticTuning{}));
}

TEST_CASE("optimal restart period") {
  CHECK(adp::optimal_restart_period(1, 1, 0.5, 0.1) ==
        doctest::Approx(std::exp(1.0) * std::sqrt(1.01)).epsilon(1e-12));
  CHECK(adp::optimal_restart_period(1, 1, 0.5, 0.1) == doctest::Approx(2.73182).epsilon(1e-4));
  CHECK(adp::optimal_restart_period(1, 1, 50, 0.1) == doctest::Approx(0.38438).epsilon(1e-4));
  CHECK(adp::optimal_restart_period(1, 1, 1e12, 0.1) ==
        doctest::Approx(std::exp(1.0) * 0.1).epsilon(1e-5));
  CHECK_THROWS_AS(adp::optimal_restart_period(0, 1, 1, 0.1), adp::UsageError);
}

TEST_CASE("decrease certificate matrix is PD exactly when the verdict holds") {
  adp::CriticTuning tuning;

  SUBCASE("worked case is PD on the whole timer interval") {
    REQUIRE(adp::validate_tuning(tuning, 4.0).ok);
    for (double tau = tuning.T0; tau <= tuning.T + 1e-12; tau += 0.1) {
      const Eigen::Matrix2d M = adp::decrease_certificate_matrix(tuning, 4.0, tau);
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(M);
      CHECK(es.eigenvalues().minCoeff() > 0.0);
    }
  }

  SUBCASE("determinant at tau = T tracks the upper gap") {
    const double good = adp::decrease_certificate_matrix(tuning, 4.0, tuning.T).determinant();
    CHECK(adp::validate_tuning(tuning, 4.0).upper_gap > 0.0);
    CHECK(good > 0.0);

    const double lam = 0.031037535372158576;  // benchmark grid: upper gap violated
    const double bad = adp::decrease_certificate_matrix(tuning, lam, tuning.T).determinant();
    CHECK(adp::validate_tuning(tuning, lam).upper_gap < 0.0);
    CHECK(bad < 0.0);
  }

  CHECK_THROWS_AS(adp::decrease_certificate_matrix(tuning, 4.0, 0.0), adp::UsageError);
}
