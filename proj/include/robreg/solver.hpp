#pragma once

#include <optional>
#include <vector>

#include "robreg/objective.hpp"

namespace robreg {

/// How a single coordinate is moved during a sweep.
enum class CoordinateUpdate {
  /// Global-curvature majorizer h_k = (2/n)||X_k||^2 (valid because l'' <= 2).
  Majorize,
  /// Proximal Newton step with the local curvature, Armijo backtracking, and
  /// the majorizer step as fallback. Same fixed points, far fewer sweeps when
  /// most residuals sit on the linear part of the loss.
  Newton,
};

struct SolverConfig {
  int max_sweeps = 10000;
  double tol = 1e-7;      // max coordinate change per sweep
  double kkt_tol = 1e-6;
  double c_beta = kInf;   // radius of the l2 ball constraint
  bool active_set = true;
  std::optional<Vector> warm_start;
  CoordinateUpdate update = CoordinateUpdate::Newton;
  bool record_trace = false;  // fill FitResult::objective_trace once per sweep

  void validate() const;
};

struct FitResult {
  Vector beta;
  std::vector<Eigen::Index> support;
  double objective = 0.0;
  int sweeps_used = 0;
  double kkt_residual = 0.0;
  bool converged = false;
  bool ball_constraint_active = false;
  std::vector<Eigen::Index> zero_columns;  // frozen at 0: column is identically zero
  std::vector<double> objective_trace;
};

/// Weighted soft-thresholding sign(v_k) max(|v_k| - t w_k, 0). Infinite weights map to 0,
/// ties |v_k| = t w_k map to exactly 0.
Vector prox_weighted_l1(const Vector& v, double t, const PenaltyWeights& w);

/// Euclidean projection onto {x : ||x||_2 <= r}.
Vector project_l2_ball(const Vector& v, double r);

/// Stationarity violation of the unconstrained weighted-l1 program at beta.
double kkt_residual(const Vector& beta, const Dataset& data, const LossSpec& spec, double lambda,
                    const PenaltyWeights& w);

/// Minimize empirical_loss + lambda * sum_k w_k |beta_k| subject to ||beta||_2 <= cfg.c_beta
/// by cyclic coordinate descent. Throws NumericalError on a non-finite objective.
FitResult solve(const Dataset& data, const LossSpec& spec, double lambda, const PenaltyWeights& w,
                const SolverConfig& cfg = {});

std::vector<Eigen::Index> support_of(const Vector& beta);

}  // namespace robreg
