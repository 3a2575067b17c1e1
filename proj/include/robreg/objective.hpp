#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <utility>

#include "robreg/loss.hpp"

namespace robreg {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Design matrix (rows are the covariate vectors X_i) and response.
/// Validated on construction and immutable afterwards.
class Dataset {
 public:
  Dataset(Matrix x, Vector y);

  const Matrix& x() const { return x_; }
  const Vector& y() const { return y_; }
  Eigen::Index n() const { return x_.rows(); }
  Eigen::Index p() const { return x_.cols(); }

 private:
  Matrix x_;
  Vector y_;
};

/// Per-coordinate penalty weights. +infinity freezes a coordinate at zero.
struct PenaltyWeights {
  Vector w;

  static PenaltyWeights ones(Eigen::Index p) { return {Vector::Ones(p)}; }
  Eigen::Index size() const { return w.size(); }
  bool frozen(Eigen::Index k) const { return std::isinf(w[k]); }
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Residuals y - X beta.
Vector residuals(const Vector& beta, const Dataset& data);

/// (1/n) sum_i l(Y_i - X_i^T beta).
double empirical_loss(const Vector& beta, const Dataset& data, const LossSpec& spec);

/// -(1/n) sum_i l'(Y_i - X_i^T beta) X_i.
Vector empirical_gradient(const Vector& beta, const Dataset& data, const LossSpec& spec);

/// (1/n) sum_i l''(Y_i - X_i^T beta) X_i X_i^T, dense p x p. Diagnostic use only.
Matrix empirical_hessian(const Vector& beta, const Dataset& data, const LossSpec& spec);

/// empirical_loss + lambda * sum over finite w_k of w_k |beta_k|.
/// Throws ConfigError if beta is nonzero on a frozen (+inf weight) coordinate.
double penalized_objective(const Vector& beta, const Dataset& data, const LossSpec& spec,
                           double lambda, const PenaltyWeights& w);

/// Averaged Hessian along the segment from beta_a to beta_b.
struct QHat {
  Matrix q;  // (2/n) X^T diag(d) X
  Vector d;  // d_i = (1/2) * mean of l'' over the residual path of sample i
};

QHat qhat_matrix(const Vector& beta_a, const Vector& beta_b, const Dataset& data,
                 const LossSpec& spec);

}  // namespace robreg
