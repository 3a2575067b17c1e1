#pragma once

#include <string>
#include <string_view>

namespace robreg {

enum class LossKind { Squared, Huber, PseudoHuber };

/// Loss family plus robustification parameter. `alpha` is ignored for
/// squared loss; for the other two the quadratic-to-linear transition sits
/// at |x| = 1/alpha.
struct LossSpec {
  LossKind kind = LossKind::Squared;
  double alpha = 1.0;

  static LossSpec squared() { return {LossKind::Squared, 1.0}; }
  static LossSpec huber(double alpha) { return {LossKind::Huber, alpha}; }
  static LossSpec pseudo_huber(double alpha) { return {LossKind::PseudoHuber, alpha}; }

  /// Throws ConfigError unless alpha is finite and positive (non-squared kinds).
  void validate() const;
};

std::string_view to_string(LossKind kind);
/// Accepts "squared", "huber", "pseudo-huber" (also "pseudo_huber", "pseudohuber").
LossKind parse_loss_kind(std::string_view name);

// Unchecked kernels for hot loops. The caller guarantees spec.validate() passed.
namespace kernel {

double loss(double x, const LossSpec& spec);
double dloss(double x, const LossSpec& spec);
double ddloss(double x, const LossSpec& spec);

/// Mean of ddloss over the segment [a, b], i.e. (dloss(b) - dloss(a)) / (b - a),
/// evaluated without cancellation. Falls back to ddloss(a) when |b - a| < 1e-12.
double mean_curvature(double a, double b, const LossSpec& spec);

}  // namespace kernel

/// l(x): x^2, Huber, or 2 alpha^-2 (sqrt(1 + alpha^2 x^2) - 1).
double eval_loss(double x, const LossSpec& spec);
/// l'(x). Odd in x; bounded by 2/alpha for the robust losses.
double eval_dloss(double x, const LossSpec& spec);
/// l''(x). Bounded by 2; for Huber the value at the kink |x| = 1/alpha is taken as 2.
double eval_ddloss(double x, const LossSpec& spec);

}  // namespace robreg
