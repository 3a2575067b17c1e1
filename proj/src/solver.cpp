#include "robreg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "robreg/error.hpp"
#include "robreg/summation.hpp"

namespace robreg {
namespace {

inline double soft_threshold(double z, double t) {
  const double a = std::abs(z) - t;
  if (a <= 0.0) return 0.0;
  return std::copysign(a, z);
}

// Cyclic coordinate descent on
//   (1/n) sum_i l(r_i) + (ridge/2) ||beta||^2 + lambda sum_k w_k |beta_k|.
// The ridge term is only used internally when the l2-ball constraint is
// enforced through its multiplier.
class CoordinateDescent {
 public:
  CoordinateDescent(const Dataset& data, const LossSpec& spec, double lambda,
                    const PenaltyWeights& w, double ridge, const SolverConfig& cfg)
      : data_(data), spec_(spec), lambda_(lambda), w_(w), ridge_(ridge), cfg_(cfg),
        inv_n_(1.0 / static_cast<double>(data.n())) {
    const Eigen::Index p = data.p();
    h_.resize(p);
    for (Eigen::Index k = 0; k < p; ++k) {
      h_[k] = 2.0 * inv_n_ * data.x().col(k).squaredNorm();
      if (h_[k] == 0.0) zero_columns_.push_back(k);
      h_[k] += ridge_;
    }
    beta_ = Vector::Zero(p);
    if (cfg.warm_start) {
      if (cfg.warm_start->size() != p) throw DimensionError("warm start does not match p");
      beta_ = *cfg.warm_start;
    }
    for (Eigen::Index k = 0; k < p; ++k) {
      if (w_.frozen(k) || is_zero_column(k)) beta_[k] = 0.0;
    }
    refresh_residuals();
  }

  FitResult run() {
    constexpr int kInnerPasses = 100;
    FitResult out;
    int sweeps = 0;
    const Eigen::Index p = data_.p();
    std::vector<Eigen::Index> active;
    while (sweeps < cfg_.max_sweeps) {
      refresh_residuals();
      double change = 0.0;
      for (Eigen::Index k = 0; k < p; ++k) change = std::max(change, step(k));
      ++sweeps;
      trace(out);
      if (change < cfg_.tol) {
        out.kkt_residual = kkt();
        if (out.kkt_residual <= cfg_.kkt_tol) {
          out.converged = true;
          break;
        }
        continue;
      }
      if (!cfg_.active_set) continue;
      active.clear();
      for (Eigen::Index k = 0; k < p; ++k) {
        if (beta_[k] != 0.0) active.push_back(k);
      }
      for (int pass = 0; pass < kInnerPasses && sweeps < cfg_.max_sweeps; ++pass) {
        double inner = 0.0;
        for (Eigen::Index k : active) inner = std::max(inner, step(k));
        ++sweeps;
        trace(out);
        if (inner < cfg_.tol) break;
      }
      if (cfg_.update == CoordinateUpdate::Newton) active_newton();
    }
    if (!out.converged) out.kkt_residual = kkt();
    out.beta = beta_;
    out.sweeps_used = sweeps;
    out.zero_columns = zero_columns_;
    return out;
  }

  // Value of the smooth part plus penalty at the current iterate.
  double current_objective() const {
    std::vector<double> terms(static_cast<std::size_t>(r_.size()));
    for (Eigen::Index i = 0; i < r_.size(); ++i) terms[i] = kernel::loss(r_[i], spec_);
    double pen = 0.0;
    for (Eigen::Index k = 0; k < beta_.size(); ++k) {
      if (beta_[k] != 0.0) pen += w_.w[k] * std::abs(beta_[k]);
    }
    return pairwise_sum(terms) * inv_n_ + 0.5 * ridge_ * beta_.squaredNorm() + lambda_ * pen;
  }

 private:
  bool is_zero_column(Eigen::Index k) const {
    return std::find(zero_columns_.begin(), zero_columns_.end(), k) != zero_columns_.end();
  }

  void refresh_residuals() {
    r_ = data_.y() - data_.x() * beta_;
    if (!r_.allFinite()) throw NumericalError("non-finite residuals during coordinate descent");
  }

  void trace(FitResult& out) const {
    if (!cfg_.record_trace) return;
    const double obj = current_objective();
    if (!std::isfinite(obj)) throw NumericalError("non-finite objective during coordinate descent");
    out.objective_trace.push_back(obj);
  }

  // Moves coordinate k, returns |change|.
  double step(Eigen::Index k) {
    if (w_.frozen(k) || h_[k] - ridge_ == 0.0) return 0.0;
    const auto col = data_.x().col(k);
    const Eigen::Index n = data_.n();
    const double bk = beta_[k];
    const bool newton = cfg_.update == CoordinateUpdate::Newton;

    double g = 0.0;
    double c = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double x = col[i];
      g += kernel::dloss(r_[i], spec_) * x;
      if (newton) c += kernel::ddloss(r_[i], spec_) * x * x;
    }
    g = -g * inv_n_ + ridge_ * bk;
    c = c * inv_n_ + ridge_;
    const double pen = lambda_ * w_.w[k];
    if (bk == 0.0 && std::abs(g) <= pen) return 0.0;

    double target = soft_threshold(bk - g / h_[k], pen / h_[k]);
    // For squared loss the local curvature equals the majorizer: the MM step is exact.
    if (newton && spec_.kind != LossKind::Squared && c > 1e-12 * h_[k]) {
      if (auto t = newton_step(k, bk, g, c, pen)) target = *t;
    }
    const double delta = target - bk;
    if (delta == 0.0) return 0.0;
    r_ -= delta * col;
    beta_[k] = target;
    return std::abs(delta);
  }

  // Proximal Newton step with Armijo backtracking on the exact coordinate
  // objective. Returns nothing when no sufficient decrease was found.
  std::optional<double> newton_step(Eigen::Index k, double bk, double g, double c, double pen) {
    constexpr double kArmijo = 1e-4;
    constexpr int kMaxHalvings = 30;
    const auto col = data_.x().col(k);
    const Eigen::Index n = data_.n();
    const double full = soft_threshold(bk - g / c, pen / c) - bk;
    if (full == 0.0) return std::nullopt;
    double s = 1.0;
    for (int it = 0; it < kMaxHalvings; ++it, s *= 0.5) {
      const double delta = s * full;
      const double t = bk + delta;
      const double predicted = g * delta + pen * (std::abs(t) - std::abs(bk));
      double diff = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        diff += kernel::loss(r_[i] - col[i] * delta, spec_) - kernel::loss(r_[i], spec_);
      }
      diff = diff * inv_n_ + ridge_ * delta * (bk + 0.5 * delta) +
             pen * (std::abs(t) - std::abs(bk));
      if (diff <= kArmijo * predicted) return t;
    }
    return std::nullopt;
  }

  // One damped Newton step on the nonzero coordinates with their signs held
  // fixed; coordinates that would change sign are set to zero. Kept only on
  // sufficient decrease of the full objective.
  void active_newton() {
    constexpr double kArmijo = 1e-4;
    std::vector<Eigen::Index> a;
    for (Eigen::Index k = 0; k < beta_.size(); ++k) {
      if (beta_[k] != 0.0) a.push_back(k);
    }
    const auto m = static_cast<Eigen::Index>(a.size());
    if (m == 0 || m > std::min<Eigen::Index>(data_.n(), 2000)) return;

    const Eigen::Index n = data_.n();
    Matrix xa(n, m);
    for (Eigen::Index j = 0; j < m; ++j) xa.col(j) = data_.x().col(a[j]);
    Vector psi(n), curv(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      psi[i] = kernel::dloss(r_[i], spec_);
      curv[i] = kernel::ddloss(r_[i], spec_);
    }
    Vector g = -(xa.transpose() * psi) * inv_n_;
    for (Eigen::Index j = 0; j < m; ++j) {
      g[j] += ridge_ * beta_[a[j]] + std::copysign(lambda_ * w_.w[a[j]], beta_[a[j]]);
    }
    Matrix hess = (xa.transpose() * curv.asDiagonal() * xa) * inv_n_;
    hess.diagonal().array() += ridge_ + 1e-12 * std::max(hess.diagonal().maxCoeff(), 1e-300);
    const Eigen::LDLT<Matrix> ldlt(hess);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return;
    const Vector dir = -ldlt.solve(g);
    const double slope = g.dot(dir);
    if (!dir.allFinite() || !(slope < 0.0)) return;

    const double before = current_objective();
    const Vector saved_beta = beta_;
    const Vector saved_r = r_;
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      for (Eigen::Index j = 0; j < m; ++j) {
        const double old = saved_beta[a[j]];
        const double next = old + t * dir[j];
        beta_[a[j]] = (next > 0.0) == (old > 0.0) ? next : 0.0;
      }
      r_ = data_.y() - data_.x() * beta_;
      const double after = current_objective();
      if (std::isfinite(after) && after <= before + kArmijo * t * slope) return;
    }
    beta_ = saved_beta;
    r_ = saved_r;
  }

  double kkt() const {
    const Eigen::Index p = data_.p();
    Vector psi(data_.n());
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = kernel::dloss(r_[i], spec_);
    const Vector grad = -(data_.x().transpose() * psi) * inv_n_ + ridge_ * beta_;
    double worst = 0.0;
    for (Eigen::Index k = 0; k < p; ++k) {
      if (w_.frozen(k)) continue;
      const double pen = lambda_ * w_.w[k];
      const double v = beta_[k] != 0.0 ? std::abs(grad[k] + std::copysign(pen, beta_[k]))
                                       : std::max(0.0, std::abs(grad[k]) - pen);
      worst = std::max(worst, v);
    }
    return worst;
  }

  const Dataset& data_;
  const LossSpec spec_;
  const double lambda_;
  const PenaltyWeights& w_;
  const double ridge_;
  const SolverConfig& cfg_;
  const double inv_n_;
  Vector h_;
  Vector beta_;
  Vector r_;
  std::vector<Eigen::Index> zero_columns_;
};

// Largest eigenvalue of (2/n) X^T X by power iteration, inflated slightly so
// 1/L is a safe gradient step.
double gradient_lipschitz(const Dataset& data) {
  const Matrix& x = data.x();
  Vector v = Vector::Ones(data.p()).normalized();
  double est = 0.0;
  for (int it = 0; it < 200; ++it) {
    Vector u = x.transpose() * (x * v);
    const double norm = u.norm();
    if (norm == 0.0) return 1.0;
    const bool done = std::abs(norm - est) <= 1e-10 * norm;
    est = norm;
    v = u / norm;
    if (done) break;
  }
  return 1.05 * 2.0 * est / static_cast<double>(data.n());
}

// Fixed-point residual of the projected proximal-gradient map, scaled by L.
double constrained_residual(const Vector& beta, const Dataset& data, const LossSpec& spec,
                            double lambda, const PenaltyWeights& w, double radius, double lip) {
  const Vector grad = empirical_gradient(beta, data, spec);
  const Vector next = project_l2_ball(prox_weighted_l1(beta - grad / lip, lambda / lip, w), radius);
  return lip * (next - beta).cwiseAbs().maxCoeff();
}

FitResult finish(FitResult fit, const Dataset& data, const LossSpec& spec, double lambda,
                 const PenaltyWeights& w) {
  fit.support = support_of(fit.beta);
  fit.objective = penalized_objective(fit.beta, data, spec, lambda, w);
  if (!std::isfinite(fit.objective)) throw NumericalError("non-finite objective at solution");
  return fit;
}

FitResult solve_ball_constrained(const Dataset& data, const LossSpec& spec, double lambda,
                                 const PenaltyWeights& w, const SolverConfig& cfg,
                                 const FitResult& unconstrained) {
  const double radius = cfg.c_beta;
  const double lip = gradient_lipschitz(data);
  FitResult out;
  out.ball_constraint_active = true;
  out.zero_columns = unconstrained.zero_columns;
  Vector beta = project_l2_ball(unconstrained.beta, radius);
  int it = 0;
  for (; it < cfg.max_sweeps; ++it) {
    const Vector grad = empirical_gradient(beta, data, spec);
    Vector next = project_l2_ball(prox_weighted_l1(beta - grad / lip, lambda / lip, w), radius);
    const double change = (next - beta).cwiseAbs().maxCoeff();
    beta = std::move(next);
    const double obj = penalized_objective(beta, data, spec, lambda, w);
    if (!std::isfinite(obj)) throw NumericalError("non-finite objective in projected gradient");
    if (cfg.record_trace) out.objective_trace.push_back(obj);
    if (change * lip <= 0.1 * cfg.kkt_tol) break;
  }
  out.beta = beta;
  out.sweeps_used = unconstrained.sweeps_used + it + 1;
  out.kkt_residual = constrained_residual(beta, data, spec, lambda, w, radius, lip);
  out.converged = out.kkt_residual <= cfg.kkt_tol;
  if (out.converged) return out;

  // Fallback: bisection on the multiplier mu of ||beta||^2 <= r^2, solving the
  // ridge-augmented program exactly for each trial mu.
  SolverConfig inner = cfg;
  inner.c_beta = kInf;
  inner.record_trace = false;
  auto solve_mu = [&](double mu) {
    CoordinateDescent cd(data, spec, lambda, w, mu, inner);
    return cd.run();
  };
  double lo = 0.0;
  double hi = 1.0;
  FitResult at_hi = solve_mu(hi);
  while (at_hi.beta.norm() > radius && hi < 1e12) {
    lo = hi;
    hi *= 4.0;
    at_hi = solve_mu(hi);
  }
  for (int b = 0; b < 100 && hi - lo > 1e-14 * hi; ++b) {
    const double mid = 0.5 * (lo + hi);
    FitResult at_mid = solve_mu(mid);
    if (at_mid.beta.norm() > radius) {
      lo = mid;
    } else {
      hi = mid;
      at_hi = std::move(at_mid);
    }
  }
  out.beta = project_l2_ball(at_hi.beta, radius);
  out.sweeps_used += at_hi.sweeps_used;
  out.kkt_residual = constrained_residual(out.beta, data, spec, lambda, w, radius, lip);
  out.converged = out.kkt_residual <= cfg.kkt_tol;
  return out;
}

}  // namespace

void SolverConfig::validate() const {
  if (max_sweeps < 1) throw ConfigError("max_sweeps must be >= 1");
  if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
  if (!(kkt_tol > 0.0)) throw ConfigError("kkt_tol must be > 0");
  if (!(c_beta > 0.0)) throw ConfigError("c_beta must be > 0");
}

std::vector<Eigen::Index> support_of(const Vector& beta) {
  std::vector<Eigen::Index> s;
  for (Eigen::Index k = 0; k < beta.size(); ++k) {
    if (beta[k] != 0.0) s.push_back(k);
  }
  return s;
}

Vector prox_weighted_l1(const Vector& v, double t, const PenaltyWeights& w) {
  if (v.size() != w.size()) throw DimensionError("prox: vector and weights differ in length");
  if (!(t >= 0.0)) throw ConfigError("prox: step must be >= 0");
  Vector out(v.size());
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    out[k] = w.frozen(k) ? 0.0 : soft_threshold(v[k], t * w.w[k]);
  }
  return out;
}

Vector project_l2_ball(const Vector& v, double r) {
  if (!(r > 0.0)) throw ConfigError("ball radius must be > 0");
  const double norm = v.norm();
  if (norm <= r) return v;
  return v * (r / norm);
}

double kkt_residual(const Vector& beta, const Dataset& data, const LossSpec& spec, double lambda,
                    const PenaltyWeights& w) {
  const Vector grad = empirical_gradient(beta, data, spec);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < beta.size(); ++k) {
    if (w.frozen(k)) continue;
    const double pen = lambda * w.w[k];
    const double v = beta[k] != 0.0 ? std::abs(grad[k] + std::copysign(pen, beta[k]))
                                    : std::max(0.0, std::abs(grad[k]) - pen);
    worst = std::max(worst, v);
  }
  return worst;
}

FitResult solve(const Dataset& data, const LossSpec& spec, double lambda, const PenaltyWeights& w,
                const SolverConfig& cfg) {
  spec.validate();
  cfg.validate();
  if (w.size() != data.p()) {
    throw DimensionError("penalty weights have length " + std::to_string(w.size()) +
                         ", design has " + std::to_string(data.p()) + " columns");
  }
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (!(w.w[k] >= 0.0)) throw ConfigError("penalty weights must be >= 0");
  }

  CoordinateDescent cd(data, spec, lambda, w, 0.0, cfg);
  FitResult fit = cd.run();
  if (std::isfinite(cfg.c_beta) && fit.beta.norm() > cfg.c_beta) {
    fit = solve_ball_constrained(data, spec, lambda, w, cfg, fit);
  }
  return finish(std::move(fit), data, spec, lambda, w);
}

}  // namespace robreg
