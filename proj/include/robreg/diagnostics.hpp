#pragma once

#include <vector>

#include "robreg/solver.hpp"

namespace robreg {

/// Result of the primal-dual witness construction for a candidate support S.
/// Undefined quantities (singular restricted problem) are NaN.
struct PDWReport {
  Vector restricted_beta;          // solution of the program restricted to S, zero off S
  Vector gamma;                    // -grad_k L(restricted_beta) / (lambda w_k); 0 where w_k = inf
  double dual_feasibility_margin;  // 1 - max_{k not in S, w_k finite} |gamma_k|
  bool full_matches_restricted;    // unrestricted solution equals restricted_beta (10 kkt_tol)
  double incoherence;              // max row-l1 norm of Q_{S^c S} Q_{SS}^{-1}
  double min_eig_SS;               // smallest eigenvalue of the restricted Hessian block
};

struct SupportMetrics {
  double l2_error = 0.0;
  double linf_error = 0.0;
  double fp_pct = 0.0;  // noise covariates selected, % of noise covariates
  double fn_pct = 0.0;  // signal covariates missed, % of signal covariates
  bool sign_consistent = false;
  bool fn_undefined = false;  // beta* has no nonzero entry; fn_pct reported as 0
};

/// Restricted solve on `support`, subgradient extraction, strict dual feasibility margin,
/// and comparison with the unrestricted solution. `reference`, when given, replaces the
/// unrestricted solution as the second endpoint of the averaged Hessian used for the
/// incoherence statistic.
PDWReport pdw_check(const Dataset& data, const LossSpec& spec, double lambda,
                    const PenaltyWeights& w, const std::vector<Eigen::Index>& support,
                    const SolverConfig& cfg = {}, const Vector* reference = nullptr);

/// ||Q_{S^c S} (Q_{SS})^{-1}||_inf. Throws NumericalError if Q_{SS} is singular.
double mutual_incoherence(const Matrix& qhat, const std::vector<Eigen::Index>& support);

/// Smallest eigenvalue of the principal submatrix on `support`.
double min_eig_SS(const Matrix& hessian, const std::vector<Eigen::Index>& support);

SupportMetrics support_metrics(const Vector& beta_hat, const Vector& beta_star);

}  // namespace robreg
