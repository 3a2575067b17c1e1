#include "robreg/objective.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "robreg/error.hpp"
#include "robreg/summation.hpp"

namespace robreg {
namespace {

void check_beta(const Vector& beta, const Dataset& data) {
  if (beta.size() != data.p()) {
    throw DimensionError("coefficient vector has length " + std::to_string(beta.size()) +
                         ", design has " + std::to_string(data.p()) + " columns");
  }
}

}  // namespace

Dataset::Dataset(Matrix x, Vector y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() < 1 || x_.cols() < 1) throw DimensionError("dataset needs n >= 1 and p >= 1");
  if (y_.size() != x_.rows()) {
    throw DimensionError("response has length " + std::to_string(y_.size()) + ", design has " +
                         std::to_string(x_.rows()) + " rows");
  }
  if (!x_.allFinite()) throw ConfigError("design matrix contains non-finite entries");
  if (!y_.allFinite()) throw ConfigError("response contains non-finite entries");
}

Vector residuals(const Vector& beta, const Dataset& data) {
  check_beta(beta, data);
  return data.y() - data.x() * beta;
}

double empirical_loss(const Vector& beta, const Dataset& data, const LossSpec& spec) {
  spec.validate();
  const Vector r = residuals(beta, data);
  std::vector<double> terms(static_cast<std::size_t>(r.size()));
  for (Eigen::Index i = 0; i < r.size(); ++i) terms[i] = kernel::loss(r[i], spec);
  return pairwise_sum(terms) / static_cast<double>(data.n());
}

Vector empirical_gradient(const Vector& beta, const Dataset& data, const LossSpec& spec) {
  spec.validate();
  const Vector r = residuals(beta, data);
  Vector psi(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) psi[i] = kernel::dloss(r[i], spec);
  return -(data.x().transpose() * psi) / static_cast<double>(data.n());
}

Matrix empirical_hessian(const Vector& beta, const Dataset& data, const LossSpec& spec) {
  spec.validate();
  const Vector r = residuals(beta, data);
  Vector curv(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) curv[i] = kernel::ddloss(r[i], spec);
  Matrix h = data.x().transpose() * curv.asDiagonal() * data.x();
  h /= static_cast<double>(data.n());
  // Symmetrize away rounding asymmetry of the triple product.
  return (0.5 * (h + h.transpose())).eval();
}

double penalized_objective(const Vector& beta, const Dataset& data, const LossSpec& spec,
                           double lambda, const PenaltyWeights& w) {
  check_beta(beta, data);
  if (w.size() != data.p()) throw DimensionError("penalty weights do not match p");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  std::vector<double> terms;
  terms.reserve(static_cast<std::size_t>(beta.size()));
  for (Eigen::Index k = 0; k < beta.size(); ++k) {
    if (w.frozen(k)) {
      if (beta[k] != 0.0) {
        throw ConfigError("coefficient " + std::to_string(k) +
                          " is nonzero but has infinite penalty weight");
      }
      continue;
    }
    terms.push_back(w.w[k] * std::abs(beta[k]));
  }
  return empirical_loss(beta, data, spec) + lambda * pairwise_sum(terms);
}

QHat qhat_matrix(const Vector& beta_a, const Vector& beta_b, const Dataset& data,
                 const LossSpec& spec) {
  spec.validate();
  const Vector r0 = residuals(beta_a, data);
  const Vector r1 = residuals(beta_b, data);
  QHat out;
  out.d.resize(data.n());
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    out.d[i] = 0.5 * kernel::mean_curvature(r0[i], r1[i], spec);
  }
  out.q = data.x().transpose() * out.d.asDiagonal() * data.x();
  out.q *= 2.0 / static_cast<double>(data.n());
  out.q = (0.5 * (out.q + out.q.transpose())).eval();
  return out;
}

}  // namespace robreg
