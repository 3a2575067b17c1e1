#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robreg/diagnostics.hpp"
#include "robreg/estimators.hpp"
#include "robreg/random.hpp"

namespace robreg {

/// Distribution of the base errors before the optional heteroscedastic factor.
struct ErrorFamily {
  enum class Kind { Normal, StudentT, SkewT };
  Kind kind = Kind::Normal;
  double var = 4.0;    // Normal
  double df = 3.0;     // StudentT, SkewT
  double scale = 1.0;  // StudentT draws scale * t_df; SkewT scale parameter
  double loc = 0.0;    // SkewT
  double shape = 0.0;  // SkewT

  static ErrorFamily normal(double var);
  static ErrorFamily student_t(double df, double scale);
  static ErrorFamily skew_t(double loc, double scale, double shape, double df);

  /// Mean of a raw draw. Skew-t errors are centered by subtracting it.
  double raw_mean() const;
  /// Variance of the (centered) base error.
  double variance() const;
  void validate() const;
};

std::string_view to_string(ErrorFamily::Kind kind);

struct Scenario {
  std::string name;
  long n = 200;
  long p = 400;
  Vector beta_star;
  ErrorFamily error_family;
  bool heteroscedastic = false;
  std::uint64_t seed = 1;

  void validate() const;
};

/// beta* with `s` leading entries equal to `value`, zeros elsewhere.
Vector sparse_beta(long p, long s, double value);

/// Built-in scenarios "table1" ... "table6": n = 200, p = 400, 20 signals of size 3;
/// odd tables homoscedastic, even ones heteroscedastic; tables 1-2 N(0,4), 3-4 2*t_3,
/// 5-6 centered skew-t(0, 1, 0.6, 3).
Scenario builtin_scenario(std::string_view name);
std::vector<std::string> builtin_scenario_names();

/// n x p matrix of iid N(0,1) entries, drawn row by row.
Matrix gen_design(long n, long p, Rng& rng);

/// One draw of loc + scale * Z / sqrt(W/df) with Z skew-normal(shape) and W ~ chi2_df.
double sample_skew_t(double loc, double scale, double shape, double df, Rng& rng);

/// Centered base errors eps~ (length n).
Vector gen_base_errors(const ErrorFamily& family, long n, Rng& rng);

/// eps_i = (X_i^T beta*)^2 eps~_i / (sqrt(3) ||beta*||_2^2).
Vector apply_heteroscedasticity(const Matrix& x, const Vector& beta_star, const Vector& base);

/// Errors of the scenario given its design.
Vector gen_errors(const Scenario& scenario, const Matrix& x, Rng& rng);

/// (X, y = X beta* + eps) drawn from a generator seeded with `seed`.
Dataset generate_dataset(const Scenario& scenario, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Estimator pipelines and the parameter conventions of published tables.

/// Scale in which regularization parameters are quoted.
enum class LambdaConvention {
  /// lambda multiplies the weighted l1 norm next to (1/n) sum l(r_i) with l(x) ~ x^2.
  Objective,
  /// Conventions of common R packages: least squares carries a factor 1/2, and for
  /// (pseudo-)Huber losses the loss is scaled by alpha/2 and lambda is quoted as
  /// lambda/alpha.
  Package,
};

std::string_view to_string(LambdaConvention c);
LambdaConvention parse_lambda_convention(std::string_view name);

/// Converts a quoted lambda to the objective scale.
double objective_lambda(double quoted, LambdaConvention c);
/// Inverse of objective_lambda.
double quoted_lambda(double objective, LambdaConvention c);

struct Stage {
  LossSpec loss;
  double lambda = 0.0;  // quoted in the pipeline's convention
};

/// A plain or two-stage estimator. The tuned stage's (alpha, lambda) are supplied
/// per run; the initial stage of adaptive estimators is fixed.
struct EstimatorPipeline {
  std::string label;
  LossKind loss = LossKind::Squared;
  std::optional<Stage> initial;  // set => adaptive estimator
  WeightNormalization normalization = WeightNormalization::None;
  LambdaConvention convention = LambdaConvention::Objective;
  SolverConfig solver;

  bool adaptive() const { return initial.has_value(); }
  /// First-stage fit of an adaptive pipeline; nullopt for plain estimators.
  std::optional<FitResult> fit_initial(const Dataset& data) const;
  /// Tuned-stage fit given the first stage (lambda quoted in `convention`;
  /// alpha ignored for squared loss).
  Vector fit_final(const Dataset& data, const std::optional<FitResult>& initial, double lambda,
                   double alpha) const;
  Vector fit(const Dataset& data, double lambda, double alpha) const {
    return fit_final(data, fit_initial(data), lambda, alpha);
  }
};

/// Labels follow the usual abbreviations: L, AL, LH, LPH, ALH(LH), ALPH(LH), ALPH(LPH).
/// Adaptive labels need the initial stage. With the package convention the squared-loss
/// adaptive estimator uses glmnet-style weight normalization.
EstimatorPipeline make_pipeline(std::string_view label, std::optional<Stage> initial = {},
                                LambdaConvention convention = LambdaConvention::Package);

/// Tuned parameter set of one column of a reference table.
struct ReferenceColumn {
  std::string label;
  double lambda = 0.0;
  std::optional<double> alpha;
  std::optional<Stage> initial;
  // Reported Monte Carlo means (1000 replications) for comparison.
  double l2 = 0.0, linf = 0.0, fp_pct = 0.0, fn_pct = 0.0;
};

/// Columns of the reference tables for built-in scenarios (package convention).
std::vector<ReferenceColumn> reference_columns(std::string_view scenario_name);
EstimatorPipeline pipeline_for(const ReferenceColumn& col);

// ---------------------------------------------------------------------------
// Monte Carlo

struct SimReport {
  std::string estimator_label;
  double lambda = 0.0;
  std::optional<double> alpha;
  double mean_l2 = 0.0;
  double mean_linf = 0.0;
  double mean_fp_pct = 0.0;
  double mean_fn_pct = 0.0;
  long replications = 0;
  std::uint64_t seed = 0;
  long failed_replications = 0;
  std::vector<SupportMetrics> per_replication;  // empty entries are not stored for failures
};

struct RunOptions {
  int threads = 1;
  bool keep_per_replication = false;
};

/// R replications with data seeded by derive_seed(seed, r). Replications whose fit
/// throws NumericalError are excluded and counted.
SimReport run_monte_carlo(const Scenario& scenario, const EstimatorPipeline& pipeline, double lambda,
                          std::optional<double> alpha, long replications, std::uint64_t seed,
                          const RunOptions& opts = {});

struct GridPoint {
  double alpha = 0.0;  // NaN for squared loss
  double lambda = 0.0;
  SimReport report;
};

struct GridResult {
  std::optional<double> alpha;
  double lambda = 0.0;
  SimReport best;
  std::vector<GridPoint> surface;  // alpha-major, grids in the order given
};

/// Exhaustive search minimizing mean l2 error with common random numbers across grid
/// points. Ties go to the smaller lambda, then the smaller alpha.
GridResult grid_search(const Scenario& scenario, const EstimatorPipeline& pipeline,
                       const std::vector<double>& alpha_grid,
                       const std::vector<double>& lambda_grid, long replications,
                       std::uint64_t seed, const RunOptions& opts = {});

/// k log-spaced points from a to b inclusive.
std::vector<double> log_grid(double a, double b, int k);

}  // namespace robreg
