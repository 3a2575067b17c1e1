#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "properties.hpp"
#include "robreg/error.hpp"
#include "robreg/objective.hpp"

using namespace robreg;

namespace {

Dataset two_point() {
  Matrix x(2, 1);
  x << 1.0, 1.0;
  Vector y(2);
  y << 1.0, -1.0;
  return Dataset(x, y);
}

}  // namespace

TEST_CASE("dataset validation") {
  CHECK_THROWS_AS(Dataset(Matrix::Zero(3, 2), Vector::Zero(2)), DimensionError);
  Matrix bad = Matrix::Zero(2, 2);
  bad(1, 1) = std::nan("");
  CHECK_THROWS_AS(Dataset(bad, Vector::Zero(2)), ConfigError);
  CHECK_THROWS_AS(Dataset(Matrix::Zero(0, 2), Vector::Zero(0)), ConfigError);
}

TEST_CASE("empirical loss") {
  std::mt19937_64 rng(3);
  const Dataset d = oracle::random_dataset(15, 4, rng, 0.0);
  Vector b = Vector::Zero(4);
  b << 1.0, -2.0, 3.0, 0.0;
  CHECK(empirical_loss(b, d, LossSpec::pseudo_huber(1.0)) == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(empirical_loss(Vector::Zero(1), two_point(), LossSpec::pseudo_huber(1.0)) ==
        doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-15));

  const Dataset noisy = oracle::random_dataset(25, 6, rng);
  const Vector beta = Vector::Random(6);
  const double direct = (noisy.y() - noisy.x() * beta).squaredNorm() / 25.0;
  CHECK(empirical_loss(beta, noisy, LossSpec::squared()) == doctest::Approx(direct).epsilon(1e-13));
  CHECK_THROWS_AS(empirical_loss(Vector::Zero(5), noisy, LossSpec::squared()), DimensionError);
}

TEST_CASE("gradient") {
  std::mt19937_64 rng(5);
  const Dataset d = oracle::random_dataset(20, 5, rng, 0.0);
  Vector truth = Vector::Zero(5);
  truth << 1.0, -2.0, 3.0, 0.0, 0.0;
  CHECK(empirical_gradient(truth, d, LossSpec::pseudo_huber(0.7)).norm() <= 1e-12);

  const Dataset noisy = oracle::random_dataset(20, 5, rng, 2.0);
  const Vector b = Vector::Random(5);
  for (const LossSpec& spec : {LossSpec::pseudo_huber(0.8), LossSpec::squared()}) {
    const Vector g = empirical_gradient(b, noisy, spec);
    for (int k = 0; k < 5; ++k) {
      const double fd = oracle::derivative(
          [&](double t) {
            Vector bb = b;
            bb[k] = t;
            return empirical_loss(bb, noisy, spec);
          },
          b[k], 1e-4);
      CHECK(std::abs(fd - g[k]) <= 1e-6 * std::max(std::abs(g[k]), 1e-3));
    }
  }
  const Vector closed = -2.0 / 20.0 * noisy.x().transpose() * (noisy.y() - noisy.x() * b);
  CHECK((empirical_gradient(b, noisy, LossSpec::squared()) - closed).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("hessian") {
  std::mt19937_64 rng(8);
  const Dataset d = oracle::random_dataset(20, 5, rng, 2.0);
  const Vector b = Vector::Random(5);
  const Matrix hs = empirical_hessian(b, d, LossSpec::squared());
  CHECK((hs - 2.0 / 20.0 * d.x().transpose() * d.x()).cwiseAbs().maxCoeff() <= 1e-12);

  const LossSpec spec = LossSpec::pseudo_huber(1.3);
  const Matrix h = empirical_hessian(b, d, spec);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() <= 1e-12);
  for (int j = 0; j < 5; ++j) {
    for (int k = 0; k < 5; ++k) {
      const double fd = oracle::derivative(
          [&](double t) {
            Vector bb = b;
            bb[k] = t;
            return empirical_gradient(bb, d, spec)[j];
          },
          b[k], 1e-4);
      CHECK(std::abs(fd - h(j, k)) <= 1e-5 * std::max(std::abs(h(j, k)), 1e-3));
    }
  }
}

TEST_CASE("penalized objective") {
  std::mt19937_64 rng(11);
  const Dataset d = oracle::random_dataset(18, 6, rng, 1.0);
  const LossSpec spec = LossSpec::huber(0.9);
  Vector b = Vector::Random(6);
  const auto ones = PenaltyWeights::ones(6);
  CHECK(penalized_objective(b, d, spec, 0.0, ones) == empirical_loss(b, d, spec));
  CHECK(penalized_objective(Vector::Zero(6), d, spec, 3.0, ones) ==
        empirical_loss(Vector::Zero(6), d, spec));

  PenaltyWeights w{Vector::Ones(6)};
  w.w << 1.0, 2.0, 1.5, kInf, 3.0, 1.0;
  b[3] = 0.0;
  const double naive = oracle::objective_naive(b, d, spec, 0.4, w.w);
  CHECK(std::abs(penalized_objective(b, d, spec, 0.4, w) - naive) <= 1e-12);
  b[3] = 0.1;
  CHECK_THROWS_AS(penalized_objective(b, d, spec, 0.4, w), ConfigError);
}

TEST_CASE("averaged Hessian") {
  std::mt19937_64 rng(13);
  const Dataset d = oracle::random_dataset(20, 5, rng, 2.0);
  const Vector a = Vector::Random(5), b = Vector::Random(5);

  SUBCASE("degenerate path") {
    const LossSpec spec = LossSpec::pseudo_huber(2.0);
    const QHat q = qhat_matrix(a, a, d, spec);
    const Vector r = d.y() - d.x() * a;
    for (int i = 0; i < 20; ++i) CHECK(q.d[i] == doctest::Approx(eval_ddloss(r[i], spec) / 2.0).epsilon(1e-14));
    CHECK((q.q - empirical_hessian(a, d, spec)).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("squared loss") {
    const QHat q = qhat_matrix(a, b, d, LossSpec::squared());
    CHECK((q.d.array() == 1.0).all());
    CHECK((q.q - 2.0 / 20.0 * d.x().transpose() * d.x()).cwiseAbs().maxCoeff() <= 1e-12);
  }
  SUBCASE("symmetry, range and mean-value identity") {
    for (const LossSpec& spec : {LossSpec::pseudo_huber(0.6), LossSpec::huber(0.6), LossSpec::pseudo_huber(40.0)}) {
      const QHat ab = qhat_matrix(a, b, d, spec), ba = qhat_matrix(b, a, d, spec);
      CHECK((ab.q - ba.q).cwiseAbs().maxCoeff() <= 1e-12);
      if (spec.kind == LossKind::PseudoHuber) CHECK((ab.d.array() > 0.0).all());
      CHECK((ab.d.array() >= 0.0).all());
      CHECK((ab.d.array() <= 1.0).all());
      const Vector lhs = ab.q * (b - a);
      const Vector rhs = empirical_gradient(b, d, spec) - empirical_gradient(a, d, spec);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-8);
    }
  }
  SUBCASE("quadrature oracle") {
    const auto out = props::qhat_weights_vs_quadrature(40, 21);
    INFO(out.detail);
    CHECK(out.ok);
  }
}
