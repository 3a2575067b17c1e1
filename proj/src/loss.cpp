#include "robreg/loss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "robreg/error.hpp"

namespace robreg {

void LossSpec::validate() const {
  if (kind == LossKind::Squared) return;
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("robustification parameter alpha must be finite and > 0, got " +
                      std::to_string(alpha));
  }
}

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::Squared: return "squared";
    case LossKind::Huber: return "huber";
    case LossKind::PseudoHuber: return "pseudo-huber";
  }
  return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
  if (name == "squared" || name == "ls") return LossKind::Squared;
  if (name == "huber") return LossKind::Huber;
  if (name == "pseudo-huber" || name == "pseudo_huber" || name == "pseudohuber") {
    return LossKind::PseudoHuber;
  }
  throw ConfigError("unknown loss '" + std::string(name) +
                    "' (expected squared, huber or pseudo-huber)");
}

namespace kernel {
namespace {

// sqrt(1 + (alpha x)^2) without overflow of the square (std::hypot is much slower).
inline double root(double x, double alpha) {
  const double ax = std::abs(alpha * x);
  return ax < 1e150 ? std::sqrt(1.0 + ax * ax) : ax;
}

}  // namespace

double loss(double x, const LossSpec& spec) {
  switch (spec.kind) {
    case LossKind::Squared: return x * x;
    case LossKind::Huber: {
      const double a = spec.alpha;
      const double ax = std::abs(x);
      if (ax <= 1.0 / a) return x * x;
      return 2.0 * ax / a - 1.0 / (a * a);
    }
    case LossKind::PseudoHuber:
      // 2 a^-2 (u - 1) rewritten as 2 x^2 / (u + 1); no cancellation near 0.
      return 2.0 * std::abs(x) * (std::abs(x) / (root(x, spec.alpha) + 1.0));
  }
  return 0.0;
}

double dloss(double x, const LossSpec& spec) {
  switch (spec.kind) {
    case LossKind::Squared: return 2.0 * x;
    case LossKind::Huber: {
      const double cap = 2.0 / spec.alpha;
      return std::clamp(2.0 * x, -cap, cap);
    }
    case LossKind::PseudoHuber: return 2.0 * x / root(x, spec.alpha);
  }
  return 0.0;
}

double ddloss(double x, const LossSpec& spec) {
  switch (spec.kind) {
    case LossKind::Squared: return 2.0;
    case LossKind::Huber: return std::abs(x) <= 1.0 / spec.alpha ? 2.0 : 0.0;
    case LossKind::PseudoHuber: {
      const double u = root(x, spec.alpha);
      return 2.0 / (u * u * u);
    }
  }
  return 0.0;
}

double mean_curvature(double a, double b, const LossSpec& spec) {
  const double diff = b - a;
  if (std::abs(diff) < 1e-12) return ddloss(a, spec);
  switch (spec.kind) {
    case LossKind::Squared: return 2.0;
    case LossKind::Huber: {
      // l'' is 2 on [-1/alpha, 1/alpha] and 0 elsewhere: average over the overlap.
      const double c = 1.0 / spec.alpha;
      const double lo = std::min(a, b);
      const double hi = std::max(a, b);
      const double overlap = std::max(0.0, std::min(hi, c) - std::max(lo, -c));
      return 2.0 * overlap / (hi - lo);
    }
    case LossKind::PseudoHuber: {
      if (a * b <= 0.0) return (dloss(b, spec) - dloss(a, spec)) / diff;
      const double u = root(a, spec.alpha);
      const double v = root(b, spec.alpha);
      return 2.0 * (a + b) / (u * v * (b * u + a * v));
    }
  }
  return 0.0;
}

}  // namespace kernel

double eval_loss(double x, const LossSpec& spec) {
  spec.validate();
  return kernel::loss(x, spec);
}

double eval_dloss(double x, const LossSpec& spec) {
  spec.validate();
  return kernel::dloss(x, spec);
}

double eval_ddloss(double x, const LossSpec& spec) {
  spec.validate();
  return kernel::ddloss(x, spec);
}

}  // namespace robreg
