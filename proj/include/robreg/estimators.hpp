#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "robreg/solver.hpp"

namespace robreg {

/// How adaptive weights are rescaled before the second-stage solve.
enum class WeightNormalization {
  None,
  /// glmnet-style penalty factors: every weight is multiplied by p / sum(v),
  /// where v_k = w_k for finite weights and v_k = 1 for frozen coordinates.
  MeanOne,
};

struct AdaptiveOptions {
  double c_lambda = 1.0;
  /// Use this second-stage lambda instead of the |S̄|-based scaling rule.
  std::optional<double> lambda_adaptive;
  WeightNormalization normalization = WeightNormalization::None;
};

struct AdaptiveFitResult {
  FitResult initial;
  PenaltyWeights weights;
  std::vector<Eigen::Index> s_bar;
  double lambda_init = 0.0;
  double lambda_adaptive = 0.0;
  double alpha = 0.0;
  FitResult final;
  bool empty_s_bar = false;  // |S̄| was 0 and was counted as 1 in the scaling
};

/// w_k = max(1/|beta_k|, 1); +inf where beta_k == 0.
PenaltyWeights adaptive_weights(const Vector& beta_init);

/// {k : |beta_k| > lambda_init}.
std::vector<Eigen::Index> threshold_support(const Vector& beta_init, double lambda_init);

/// c_alpha * sqrt(log p / n).
double scale_alpha(long n, long p, double c_alpha);

/// c_lambda * lambda_init * sqrt(max(|S̄|, 1) * log p / n).
double scale_lambda_adaptive(double lambda_init, std::size_t s_bar_size, long n, long p,
                             double c_lambda);

PenaltyWeights normalize_weights(const PenaltyWeights& w, WeightNormalization how);

/// Two-stage estimator: weighted-l1 fit with unit weights, adaptive weights from
/// its coefficients, then a second fit with those weights. Coordinates that are
/// zero after the first stage stay exactly zero.
AdaptiveFitResult fit_adaptive(const Dataset& data, const LossSpec& initial_spec, double lambda_init,
                               const LossSpec& final_spec, const SolverConfig& cfg,
                               const AdaptiveOptions& opts = {});

/// Second stage of fit_adaptive given an already computed initial fit.
AdaptiveFitResult fit_adaptive_from(const Dataset& data, FitResult initial, double lambda_init,
                                    const LossSpec& final_spec, const SolverConfig& cfg,
                                    const AdaptiveOptions& opts = {});

}  // namespace robreg
