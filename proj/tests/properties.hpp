#pragma once

// Randomized property checks shared by the unit tests and the acceptance runner.

#include <cstdint>
#include <string>

namespace props {

struct Outcome {
  bool ok = true;
  long cases = 0;
  std::string detail;  // first failure, or a summary of the worst case
};

/// Derivative bounds, small-alpha limit and finite-difference consistency of the losses.
Outcome loss_properties(long points, std::uint64_t seed);
/// Converged solves satisfy the stationarity conditions checked independently.
Outcome solver_kkt(long instances, std::uint64_t seed);
/// Pseudo-Huber with alpha = 1e-4 against a least-squares proximal-gradient reference.
Outcome small_alpha_matches_lasso(long instances, std::uint64_t seed);
/// Closed-form averaged curvature against Gauss-Legendre quadrature.
Outcome qhat_weights_vs_quadrature(long instances, std::uint64_t seed);
/// Positive dual margin with a nonsingular restricted Hessian implies full = restricted.
Outcome pdw_implication(long instances, std::uint64_t seed);
/// Variance of heteroscedastic over homoscedastic errors, plain sample variances
/// on independent streams, for the normal, t and skew-t families (normal only if requested).
Outcome variance_ratios(long samples, std::uint64_t seed, bool normal_only = false);
/// Sample mean of skew-t(0, 1, 0.6, 3) against the closed-form mean.
Outcome skew_t_mean(long samples, std::uint64_t seed);

}  // namespace props
