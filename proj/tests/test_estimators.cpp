#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "robreg/error.hpp"
#include "robreg/estimators.hpp"

using namespace robreg;

TEST_CASE("adaptive weights") {
  Vector b(3);
  b << 2.0, 0.5, 0.0;
  const auto w = adaptive_weights(b);
  CHECK(w.w[0] == 1.0);
  CHECK(w.w[1] == 2.0);
  CHECK(std::isinf(w.w[2]));

  Vector big(4);
  big << 1.0, -3.0, 7.5, -1.0;
  CHECK(adaptive_weights(big).w == Vector::Ones(4));

  std::mt19937_64 rng(2);
  std::normal_distribution<double> z(0.0, 2.0);
  for (int t = 0; t < 1000; ++t) {
    Vector v(1);
    v << z(rng);
    const double wk = adaptive_weights(v).w[0];
    CHECK(wk >= 1.0);
    CHECK(wk * std::abs(v[0]) >= std::min(std::abs(v[0]), 1.0) * (1.0 - 1e-15));
  }
}

TEST_CASE("thresholded support") {
  Vector b(4);
  b << 3.0, 3.0, 0.01, 0.0;
  CHECK(threshold_support(b, 0.1) == std::vector<Eigen::Index>{0, 1});
  CHECK(threshold_support(b, 5.0).empty());
  Vector edge(2);
  edge << 0.1, -0.1000001;
  CHECK(threshold_support(edge, 0.1) == std::vector<Eigen::Index>{1});
  CHECK_THROWS_AS(threshold_support(b, 0.0), ConfigError);
}

TEST_CASE("thresholding keeps the signal under a beta-min condition") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> z;
  const long p = 50, s = 4;
  const double lam = 0.1, c_init = 1.0;
  for (int t = 0; t < 200; ++t) {
    Vector star = Vector::Zero(p);
    for (long k = 0; k < s; ++k) star[k] = (k % 2 ? -1.0 : 1.0) * (2.0 * c_init * lam * std::sqrt(s) + 0.01);
    Vector noise(p);
    for (long k = 0; k < p; ++k) noise[k] = z(rng);
    noise *= c_init * lam * std::sqrt(double(s)) / noise.norm() * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const auto sbar = threshold_support(star + noise, lam);
    for (long k = 0; k < s; ++k) CHECK(std::find(sbar.begin(), sbar.end(), k) != sbar.end());
    CHECK(sbar.size() <= static_cast<std::size_t>(2 * c_init * s));
  }
}

TEST_CASE("tuning-parameter scalings") {
  CHECK(scale_alpha(200, 400, 1.0) == doctest::Approx(std::sqrt(std::log(400.0) / 200.0)).epsilon(1e-15));
  CHECK(scale_alpha(200, 400, 1.0) == doctest::Approx(0.17305).epsilon(1e-4));
  CHECK_THROWS_AS(scale_alpha(200, 400, 0.0), ConfigError);
  CHECK(scale_alpha(400, 400, 1.0) == doctest::Approx(scale_alpha(200, 400, 1.0) / std::sqrt(2.0)));
  CHECK(scale_alpha(200, 400, 3.0) == doctest::Approx(3.0 * scale_alpha(200, 400, 1.0)));

  CHECK(scale_lambda_adaptive(0.1, 20, 200, 400, 1.0) == doctest::Approx(0.07740).epsilon(1e-4));
  CHECK(scale_lambda_adaptive(0.1, 80, 200, 400, 1.0) ==
        doctest::Approx(2.0 * scale_lambda_adaptive(0.1, 20, 200, 400, 1.0)));
  CHECK(scale_lambda_adaptive(0.1, 20, 200, 400, 2.0) ==
        doctest::Approx(2.0 * scale_lambda_adaptive(0.1, 20, 200, 400, 1.0)));
  CHECK(scale_lambda_adaptive(0.3, 20, 200, 400, 1.0) ==
        doctest::Approx(3.0 * scale_lambda_adaptive(0.1, 20, 200, 400, 1.0)));
  CHECK(scale_lambda_adaptive(0.1, 0, 200, 400, 1.0) == scale_lambda_adaptive(0.1, 1, 200, 400, 1.0));
}

TEST_CASE("weight normalization") {
  PenaltyWeights w{Vector(4)};
  w.w << 1.0, 3.0, kInf, 4.0;
  const auto m = normalize_weights(w, WeightNormalization::MeanOne);
  // v = (1, 3, 1, 4), p / sum v = 4 / 9
  CHECK(m.w[0] == doctest::Approx(4.0 / 9.0));
  CHECK(m.w[3] == doctest::Approx(16.0 / 9.0));
  CHECK(std::isinf(m.w[2]));
  CHECK(normalize_weights(w, WeightNormalization::None).w[1] == 3.0);
}

TEST_CASE("noiseless recovery") {
  std::mt19937_64 rng(12);
  Vector star = Vector::Zero(30);
  star.head(4) << 2.0, -1.5, 1.0, 3.0;
  const Dataset d = oracle::random_dataset(60, 30, rng, 0.0, &star);
  const LossSpec spec = LossSpec::pseudo_huber(0.5);
  SolverConfig cfg;
  cfg.tol = 1e-10;
  const auto res = fit_adaptive(d, spec, 0.05, spec, cfg);
  CHECK(res.final.support == std::vector<Eigen::Index>{0, 1, 2, 3});
  for (int k = 0; k < 4; ++k) CHECK(std::signbit(res.final.beta[k]) == std::signbit(star[k]));
  CHECK(res.final.converged);
  CHECK(oracle::kkt_violation(res.final.beta, d, spec, res.lambda_adaptive, res.weights.w) <= cfg.kkt_tol);
  CHECK(res.alpha == 0.5);

  // Same problem with the oracle support imposed gives the same coefficients.
  PenaltyWeights oracle_w = res.weights;
  for (int k = 4; k < 30; ++k) oracle_w.w[k] = kInf;
  const auto restricted = solve(d, spec, res.lambda_adaptive, oracle_w, cfg);
  CHECK((restricted.beta - res.final.beta).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("two-stage bookkeeping") {
  std::mt19937_64 rng(14);
  const Dataset d = oracle::random_dataset(50, 40, rng, 1.5);
  const auto ph = LossSpec::pseudo_huber(0.3);
  const auto res = fit_adaptive(d, LossSpec::huber(0.4), 0.15, ph, SolverConfig{});
  for (Eigen::Index k = 0; k < 40; ++k) {
    if (res.initial.beta[k] == 0.0) {
      CHECK(std::isinf(res.weights.w[k]));
      CHECK(res.final.beta[k] == 0.0);
    } else {
      CHECK(res.weights.w[k] >= 1.0);
    }
  }
  CHECK(res.s_bar == threshold_support(res.initial.beta, 0.15));
  CHECK(res.lambda_adaptive == doctest::Approx(scale_lambda_adaptive(0.15, res.s_bar.size(), 50, 40, 1.0)));

  const auto again = fit_adaptive(d, LossSpec::huber(0.4), 0.15, ph, SolverConfig{});
  CHECK(again.final.beta == res.final.beta);
  CHECK(again.weights.w == res.weights.w);
  CHECK(again.final.objective == res.final.objective);

  AdaptiveOptions fixed;
  fixed.lambda_adaptive = 0.02;
  CHECK(fit_adaptive(d, ph, 0.15, ph, SolverConfig{}, fixed).lambda_adaptive == 0.02);

  CHECK_THROWS_AS(fit_adaptive(d, ph, 0.0, ph, SolverConfig{}), ConfigError);
}

TEST_CASE("empty thresholded support is flagged") {
  std::mt19937_64 rng(15);
  const Dataset d = oracle::random_dataset(30, 10, rng, 1.0);
  const auto res = fit_adaptive(d, LossSpec::squared(), 50.0, LossSpec::squared(), SolverConfig{});
  CHECK(res.s_bar.empty());
  CHECK(res.empty_s_bar);
  CHECK(res.final.beta.isZero(0.0));
  CHECK(res.lambda_adaptive == doctest::Approx(scale_lambda_adaptive(50.0, 1, 30, 10, 1.0)));
}
