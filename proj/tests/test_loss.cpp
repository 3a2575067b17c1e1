#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "properties.hpp"
#include "robreg/error.hpp"
#include "robreg/loss.hpp"

using namespace robreg;

TEST_CASE("pseudo-Huber values") {
  CHECK(eval_loss(0.0, LossSpec::pseudo_huber(1.0)) == 0.0);
  const double ref = static_cast<double>(oracle::pseudo_huber_ld(1.0L, 1.0L));
  CHECK(eval_loss(1.0, LossSpec::pseudo_huber(1.0)) == doctest::Approx(ref).epsilon(1e-15));
  CHECK(ref == doctest::Approx(0.828427).epsilon(1e-6));
  CHECK(std::abs(eval_loss(1.0, LossSpec::pseudo_huber(0.001)) - 1.0) <= 1e-6);
}

TEST_CASE("pseudo-Huber first derivative") {
  CHECK(eval_dloss(0.0, LossSpec::pseudo_huber(2.0)) == 0.0);
  CHECK(eval_dloss(1.0, LossSpec::pseudo_huber(1.0)) == doctest::Approx(2.0 / std::sqrt(2.0)).epsilon(1e-15));
  for (double a : {0.05, 1.0, 7.0}) {
    const LossSpec spec = LossSpec::pseudo_huber(a);
    for (double x : {-3.0, -0.5, 0.7, 10.0}) {
      const double fd = oracle::derivative([&](double t) { return eval_loss(t, spec); }, x, 1e-4);
      CHECK(std::abs(fd - eval_dloss(x, spec)) <= 1e-6 * std::abs(eval_dloss(x, spec)));
      CHECK(eval_dloss(-x, spec) == -eval_dloss(x, spec));
    }
  }
}

TEST_CASE("second derivative") {
  CHECK(eval_ddloss(0.0, LossSpec::pseudo_huber(5.0)) == 2.0);
  CHECK(eval_ddloss(1.0, LossSpec::pseudo_huber(1.0)) == doctest::Approx(2.0 / std::pow(2.0, 1.5)).epsilon(1e-15));
  for (double x : {-1e6, -2.0, 0.0, 3.5}) CHECK(eval_ddloss(x, LossSpec::squared()) == 2.0);
}

TEST_CASE("Huber piecewise form") {
  const LossSpec h = LossSpec::huber(2.0);  // kink at 0.5
  CHECK(eval_loss(0.3, h) == doctest::Approx(0.09));
  CHECK(eval_loss(-2.0, h) == doctest::Approx(2.0 * 2.0 / 2.0 - 0.25));
  CHECK(eval_loss(0.5, h) == doctest::Approx(0.25));
  CHECK(eval_dloss(3.0, h) == doctest::Approx(1.0));
  CHECK(eval_dloss(-0.2, h) == doctest::Approx(-0.4));
  CHECK(eval_ddloss(0.4, h) == 2.0);
  CHECK(eval_ddloss(0.6, h) == 0.0);
}

TEST_CASE("no overflow for large alpha * x") {
  const LossSpec spec = LossSpec::pseudo_huber(55.0);
  const double x = 1e300;
  CHECK(std::isfinite(eval_loss(x, spec)));
  CHECK(eval_dloss(x, spec) == doctest::Approx(2.0 / 55.0));
  CHECK(eval_ddloss(x, spec) >= 0.0);
  CHECK(eval_loss(1e4, spec) == doctest::Approx(static_cast<double>(oracle::pseudo_huber_ld(1e4L, 55.0L))).epsilon(1e-14));
}

TEST_CASE("invalid alpha is rejected") {
  CHECK_THROWS_AS(eval_loss(1.0, LossSpec::pseudo_huber(0.0)), ConfigError);
  CHECK_THROWS_AS(eval_dloss(1.0, LossSpec::huber(-1.0)), ConfigError);
  CHECK_THROWS_AS(eval_ddloss(1.0, LossSpec::pseudo_huber(std::nan(""))), ConfigError);
  CHECK_NOTHROW(eval_loss(1.0, LossSpec{LossKind::Squared, -3.0}));
}

TEST_CASE("loss names") {
  CHECK(parse_loss_kind("pseudo-huber") == LossKind::PseudoHuber);
  CHECK(parse_loss_kind("huber") == LossKind::Huber);
  CHECK(parse_loss_kind("squared") == LossKind::Squared);
  CHECK(parse_loss_kind(to_string(LossKind::PseudoHuber)) == LossKind::PseudoHuber);
  CHECK_THROWS_AS(parse_loss_kind("cauchy"), ConfigError);
}

TEST_CASE("mean curvature kernel") {
  const LossSpec spec = LossSpec::pseudo_huber(3.0);
  for (auto [a, b] : {std::pair{-2.0, 5.0}, {0.1, 0.3}, {4.0, -1.0}, {1e-3, 1e-3 + 1e-13}}) {
    const double direct = std::abs(b - a) < 1e-12 ? eval_ddloss(a, spec)
                                                  : (eval_dloss(b, spec) - eval_dloss(a, spec)) / (b - a);
    CHECK(kernel::mean_curvature(a, b, spec) == doctest::Approx(direct).epsilon(1e-9));
  }
}

TEST_CASE("loss properties on random points") {
  const auto out = props::loss_properties(10000, 7);
  INFO(out.detail);
  CHECK(out.ok);
}
