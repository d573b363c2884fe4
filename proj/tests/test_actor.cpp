#include <doctest.h>

#include <cmath>

#include "adp/actor.hpp"
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
  adp::ActorRegressor reg = adp::make_actor_regressor(basis, bp.plant, bp.cost);
};

}  // namespace

TEST_CASE("actor_output reproduces the expert at the exact weights") {
  const Fixture f;
  const Vector3d theta_star(0.5, 0.0, 1.0);

  CHECK(adp::actor_output(f.reg, theta_star, Vector2d(0, 0)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(adp::actor_output(f.reg, Vector3d::Zero(), Vector2d(1.3, -0.4)).cwiseAbs().maxCoeff() ==
        0.0);

  const VectorXd u = adp::actor_output(f.reg, theta_star, Vector2d(0, 1));
  REQUIRE(u.size() == 1);
  CHECK(std::abs(u(0) - (-3.0)) < 1e-9);

  std::mt19937_64 rng(79);
  for (int i = 0; i < 50; ++i) {
    const Vector2d x(oracle::urand(rng, -2, 2), oracle::urand(rng, -2, 2));
    const VectorXd expert = f.bp.reference.policy(x);
    const VectorXd uhat = adp::actor_output(f.reg, theta_star, x);
    CHECK(std::abs(uhat(0) - expert(0)) < 1e-12);
  }
}

TEST_CASE("actor_error closed forms") {
  const Fixture f;
  adp::ActorTuning tuning;

  std::mt19937_64 rng(83);
  for (int i = 0; i < 20; ++i) {
    const Vector2d x(oracle::urand(rng, -2, 2), oracle::urand(rng, -2, 2));
    const VectorXd theta = oracle::vrand(rng, 3, -2, 2);
    CHECK(adp::actor_error(x, theta, theta, f.reg, tuning) == 0.0);
  }

  SUBCASE("omega vanishes at the origin") {
    tuning.alpha1 = 2.0;
    tuning.alpha2 = 0.5;
    const Vector3d d(1, -2, 3);
    const double e = adp::actor_error(Vector2d(0, 0), Vector3d::Zero(), d, f.reg, tuning);
    CHECK(e == doctest::Approx(0.5 * 0.5 * d.squaredNorm()).epsilon(1e-15));
  }

  SUBCASE("alpha1 = 0 leaves the regularizer alone") {
    tuning.alpha1 = 0.0;
    tuning.alpha2 = 1.0;
    const double e =
        adp::actor_error(Vector2d(1.1, 0.3), Vector3d::Zero(), Vector3d(1, 0, 0), f.reg, tuning);
    CHECK(e == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("actor_flow is the negated scaled gradient") {
  const Fixture f;
  adp::ActorTuning tuning;
  tuning.k_u = 1.7;
  tuning.alpha1 = 0.8;
  tuning.alpha2 = 0.4;

  std::mt19937_64 rng(89);
  for (int i = 0; i < 50; ++i) {
    const Vector2d x(oracle::urand(rng, -2, 2), oracle::urand(rng, -2, 2));
    const VectorXd theta_c = oracle::vrand(rng, 3, -2, 2);
    const VectorXd theta_u = oracle::vrand(rng, 3, -2, 2);

    const VectorXd flow = adp::actor_flow(theta_u, x, theta_c, f.reg, tuning);
    const VectorXd fd = oracle::fd_gradient(
        [&](const VectorXd& th) { return adp::actor_error(x, theta_c, th, f.reg, tuning); },
        theta_u);
    for (int k = 0; k < 3; ++k) CHECK(oracle::close_rel(flow(k), -tuning.k_u * fd(k), 1e-6));

    const MatrixXd Om = adp::capital_omega(f.reg, x, tuning.alpha1, tuning.alpha2);
    const VectorXd exact = Om * (theta_u - theta_c);
    CHECK((flow + tuning.k_u * exact).cwiseAbs().maxCoeff() < 1e-9);
  }

  SUBCASE("consensus is an equilibrium") {
    const Vector3d theta(0.2, -1, 4);
    CHECK(adp::actor_flow(theta, Vector2d(1.5, -0.5), theta, f.reg, tuning)
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }

  SUBCASE("origin reduces to the regularizer pull") {
    const Vector3d d(1, 2, -1);
    const VectorXd flow = adp::actor_flow(d, Vector2d(0, 0), Vector3d::Zero(), f.reg, tuning);
    CHECK((flow + tuning.k_u * tuning.alpha2 * d).cwiseAbs().maxCoeff() < 1e-15);
  }
}

TEST_CASE("actor_flow contracts toward the critic weights") {
  const Fixture f;
  adp::ActorTuning tuning;
  tuning.k_u = 2.0;
  tuning.alpha1 = 1.5;
  tuning.alpha2 = 0.3;

  std::mt19937_64 rng(97);
  for (int i = 0; i < 100; ++i) {
    const Vector2d x(oracle::urand(rng, -3, 3), oracle::urand(rng, -3, 3));
    const VectorXd theta_c = oracle::vrand(rng, 3, -2, 2);
    const VectorXd theta_u = oracle::vrand(rng, 3, -2, 2);
    const VectorXd d = theta_u - theta_c;
    const VectorXd flow = adp::actor_flow(theta_u, x, theta_c, f.reg, tuning);
    CHECK(d.dot(flow) <= -tuning.k_u * tuning.alpha2 * d.squaredNorm() + 1e-12);
  }
}

TEST_CASE("actor tuning field validation") {
  adp::ActorTuning t;
  t.k_u = -1.0;
  CHECK_THROWS_AS(adp::validate_actor_tuning_fields(t), adp::UsageError);
  t = {};
  t.k_u = 0.0;
  CHECK_NOTHROW(adp::validate_actor_tuning_fields(t));
  t = {};
  t.alpha2 = 0.0;
  CHECK_THROWS_AS(adp::validate_actor_tuning_fields(t), adp::UsageError);
  t = {};
  t.alpha1 = -0.5;
  CHECK_THROWS_AS(adp::validate_actor_tuning_fields(t), adp::UsageError);
  CHECK_NOTHROW(adp::validate_actor_tuning_fields(adp::ActorTuning{}));
}
