#include "robreg/diagnostics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "robreg/error.hpp"

namespace robreg {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<Eigen::Index> complement(const std::vector<Eigen::Index>& s, Eigen::Index p) {
  std::vector<bool> in(static_cast<std::size_t>(p), false);
  for (auto k : s) in[static_cast<std::size_t>(k)] = true;
  std::vector<Eigen::Index> out;
  for (Eigen::Index k = 0; k < p; ++k) {
    if (!in[static_cast<std::size_t>(k)]) out.push_back(k);
  }
  return out;
}

void check_support(const std::vector<Eigen::Index>& s, Eigen::Index p) {
  std::vector<Eigen::Index> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ConfigError("support contains duplicate indices");
  }
  for (auto k : s) {
    if (k < 0 || k >= p) {
      throw ConfigError("support index " + std::to_string(k) + " out of range [0, " +
                        std::to_string(p) + ")");
    }
  }
}

Matrix principal(const Matrix& m, const std::vector<Eigen::Index>& s) {
  Matrix out(s.size(), s.size());
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = 0; b < s.size(); ++b) out(a, b) = m(s[a], s[b]);
  }
  return out;
}

double smallest_eigenvalue(const Matrix& sym) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("eigenvalue decomposition failed");
  return es.eigenvalues().minCoeff();
}

}  // namespace

double mutual_incoherence(const Matrix& qhat, const std::vector<Eigen::Index>& support) {
  if (qhat.rows() != qhat.cols()) throw DimensionError("mutual_incoherence: matrix is not square");
  check_support(support, qhat.rows());
  const auto rest = complement(support, qhat.rows());
  if (support.empty() || rest.empty()) return 0.0;

  const Matrix q_ss = principal(qhat, support);
  Eigen::SelfAdjointEigenSolver<Matrix> es(q_ss, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(lo > 1e-12 * std::max(hi, 1e-300))) {
    std::ostringstream msg;
    msg << "Q_SS is singular (smallest eigenvalue " << lo << ", condition estimate "
        << (lo > 0 ? hi / lo : std::numeric_limits<double>::infinity()) << ")";
    throw NumericalError(msg.str());
  }
  Matrix q_sr(support.size(), rest.size());
  for (std::size_t a = 0; a < support.size(); ++a) {
    for (std::size_t b = 0; b < rest.size(); ++b) q_sr(a, b) = qhat(support[a], rest[b]);
  }
  // Rows of Q_{S^c S} Q_{SS}^{-1} are the columns of Q_{SS}^{-1} Q_{S S^c}.
  const Matrix m = q_ss.ldlt().solve(q_sr);
  return m.cwiseAbs().colwise().sum().maxCoeff();
}

double min_eig_SS(const Matrix& hessian, const std::vector<Eigen::Index>& support) {
  if (hessian.rows() != hessian.cols()) throw DimensionError("min_eig_SS: matrix is not square");
  if (support.empty()) throw ConfigError("min_eig_SS: support must be nonempty");
  check_support(support, hessian.rows());
  return smallest_eigenvalue(principal(hessian, support));
}

PDWReport pdw_check(const Dataset& data, const LossSpec& spec, double lambda,
                    const PenaltyWeights& w, const std::vector<Eigen::Index>& support,
                    const SolverConfig& cfg, const Vector* reference) {
  if (!(lambda > 0.0)) throw ConfigError("pdw_check: lambda must be > 0");
  if (w.size() != data.p()) throw DimensionError("pdw_check: weights do not match p");
  check_support(support, data.p());
  for (auto k : support) {
    if (w.frozen(k)) {
      throw ConfigError("pdw_check: support index " + std::to_string(k) + " has infinite weight");
    }
  }
  const Eigen::Index p = data.p();
  std::vector<bool> in_s(static_cast<std::size_t>(p), false);
  for (auto k : support) in_s[static_cast<std::size_t>(k)] = true;

  PenaltyWeights restricted_w = w;
  for (Eigen::Index k = 0; k < p; ++k) {
    if (!in_s[static_cast<std::size_t>(k)]) restricted_w.w[k] = kInf;
  }
  SolverConfig local = cfg;
  local.warm_start.reset();
  local.record_trace = false;
  const FitResult restricted = solve(data, spec, lambda, restricted_w, local);
  const FitResult full = solve(data, spec, lambda, w, local);

  PDWReport rep;
  rep.restricted_beta = restricted.beta;
  const Vector grad = empirical_gradient(restricted.beta, data, spec);
  rep.gamma = Vector::Zero(p);
  double worst_off = 0.0;
  for (Eigen::Index k = 0; k < p; ++k) {
    if (w.frozen(k)) continue;
    rep.gamma[k] = -grad[k] / (lambda * w.w[k]);
    if (!in_s[static_cast<std::size_t>(k)]) worst_off = std::max(worst_off, std::abs(rep.gamma[k]));
  }
  rep.dual_feasibility_margin = 1.0 - worst_off;
  rep.full_matches_restricted =
      (full.beta - restricted.beta).cwiseAbs().maxCoeff() <= 10.0 * cfg.kkt_tol;

  rep.min_eig_SS = kNaN;
  rep.incoherence = kNaN;
  if (support.empty()) {
    rep.incoherence = 0.0;
    return rep;
  }
  const Matrix hess = empirical_hessian(restricted.beta, data, spec);
  rep.min_eig_SS = min_eig_SS(hess, support);
  const double scale = std::max(hess.diagonal().cwiseAbs().maxCoeff(), 1e-300);
  if (!(rep.min_eig_SS > 1e-12 * scale)) {
    // Restricted program is not strictly convex on S: the witness is not unique.
    rep.dual_feasibility_margin = kNaN;
    return rep;
  }
  const Vector& other = reference != nullptr ? *reference : full.beta;
  const QHat q = qhat_matrix(restricted.beta, other, data, spec);
  try {
    rep.incoherence = mutual_incoherence(q.q, support);
  } catch (const NumericalError&) {
    rep.incoherence = kNaN;
  }
  return rep;
}

SupportMetrics support_metrics(const Vector& beta_hat, const Vector& beta_star) {
  if (beta_hat.size() != beta_star.size()) {
    throw DimensionError("support_metrics: vectors differ in length");
  }
  SupportMetrics m;
  const Vector diff = beta_hat - beta_star;
  m.l2_error = diff.norm();
  m.linf_error = diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0;
  long noise = 0, signal = 0, fp = 0, fn = 0;
  bool signs = true;
  auto sgn = [](double v) { return (v > 0.0) - (v < 0.0); };
  for (Eigen::Index k = 0; k < beta_star.size(); ++k) {
    const bool truth = beta_star[k] != 0.0;
    const bool chosen = beta_hat[k] != 0.0;
    if (truth) {
      ++signal;
      if (!chosen) ++fn;
    } else {
      ++noise;
      if (chosen) ++fp;
    }
    if (sgn(beta_hat[k]) != sgn(beta_star[k])) signs = false;
  }
  m.fp_pct = noise ? 100.0 * static_cast<double>(fp) / static_cast<double>(noise) : 0.0;
  m.fn_pct = signal ? 100.0 * static_cast<double>(fn) / static_cast<double>(signal) : 0.0;
  m.fn_undefined = signal == 0;
  m.sign_consistent = signs;
  return m;
}

}  // namespace robreg
