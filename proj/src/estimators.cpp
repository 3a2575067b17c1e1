#include "robreg/estimators.hpp"

#include <cmath>
#include <string>

#include "robreg/error.hpp"

namespace robreg {

PenaltyWeights adaptive_weights(const Vector& beta_init) {
  PenaltyWeights w{Vector(beta_init.size())};
  for (Eigen::Index k = 0; k < beta_init.size(); ++k) {
    const double a = std::abs(beta_init[k]);
    w.w[k] = a == 0.0 ? kInf : std::max(1.0 / a, 1.0);
  }
  return w;
}

std::vector<Eigen::Index> threshold_support(const Vector& beta_init, double lambda_init) {
  if (!(lambda_init > 0.0)) throw ConfigError("threshold_support: lambda_init must be > 0");
  std::vector<Eigen::Index> s;
  for (Eigen::Index k = 0; k < beta_init.size(); ++k) {
    if (std::abs(beta_init[k]) > lambda_init) s.push_back(k);
  }
  return s;
}

double scale_alpha(long n, long p, double c_alpha) {
  if (n < 2 || p < 2) throw ConfigError("scale_alpha needs n >= 2 and p >= 2");
  if (!(c_alpha > 0.0)) throw ConfigError("scale_alpha: c_alpha must be > 0");
  return c_alpha * std::sqrt(std::log(static_cast<double>(p)) / static_cast<double>(n));
}

double scale_lambda_adaptive(double lambda_init, std::size_t s_bar_size, long n, long p,
                             double c_lambda) {
  if (n < 1 || p < 2) throw ConfigError("scale_lambda_adaptive needs n >= 1 and p >= 2");
  if (!(lambda_init > 0.0)) throw ConfigError("scale_lambda_adaptive: lambda_init must be > 0");
  if (!(c_lambda > 0.0)) throw ConfigError("scale_lambda_adaptive: c_lambda must be > 0");
  const double s = static_cast<double>(std::max<std::size_t>(s_bar_size, 1));
  return c_lambda * lambda_init *
         std::sqrt(s * std::log(static_cast<double>(p)) / static_cast<double>(n));
}

PenaltyWeights normalize_weights(const PenaltyWeights& w, WeightNormalization how) {
  if (how == WeightNormalization::None || w.size() == 0) return w;
  double total = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) total += w.frozen(k) ? 1.0 : w.w[k];
  if (!(total > 0.0)) return w;
  const double scale = static_cast<double>(w.size()) / total;
  PenaltyWeights out = w;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (!w.frozen(k)) out.w[k] *= scale;
  }
  return out;
}

AdaptiveFitResult fit_adaptive(const Dataset& data, const LossSpec& initial_spec, double lambda_init,
                               const LossSpec& final_spec, const SolverConfig& cfg,
                               const AdaptiveOptions& opts) {
  initial_spec.validate();
  if (!(lambda_init > 0.0)) throw ConfigError("lambda_init must be > 0");
  FitResult initial = solve(data, initial_spec, lambda_init, PenaltyWeights::ones(data.p()), cfg);
  return fit_adaptive_from(data, std::move(initial), lambda_init, final_spec, cfg, opts);
}

AdaptiveFitResult fit_adaptive_from(const Dataset& data, FitResult initial, double lambda_init,
                                    const LossSpec& final_spec, const SolverConfig& cfg,
                                    const AdaptiveOptions& opts) {
  final_spec.validate();
  if (!(lambda_init > 0.0)) throw ConfigError("lambda_init must be > 0");
  if (initial.beta.size() != data.p()) throw DimensionError("initial fit does not match p");

  AdaptiveFitResult out;
  out.lambda_init = lambda_init;
  out.alpha = final_spec.alpha;
  out.initial = std::move(initial);
  out.s_bar = threshold_support(out.initial.beta, lambda_init);
  out.empty_s_bar = out.s_bar.empty();
  if (opts.lambda_adaptive) {
    if (!(*opts.lambda_adaptive >= 0.0)) throw ConfigError("adaptive lambda must be >= 0");
    out.lambda_adaptive = *opts.lambda_adaptive;
  } else {
    out.lambda_adaptive =
        scale_lambda_adaptive(lambda_init, out.s_bar.size(), data.n(), data.p(), opts.c_lambda);
  }
  out.weights = normalize_weights(adaptive_weights(out.initial.beta), opts.normalization);

  SolverConfig second = cfg;
  second.warm_start = out.initial.beta;
  out.final = solve(data, final_spec, out.lambda_adaptive, out.weights, second);
  return out;
}

}  // namespace robreg
