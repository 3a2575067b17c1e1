#include "robreg/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "robreg/error.hpp"
#include "robreg/summation.hpp"

namespace robreg {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Runs fn(i) for i in [0, count) on up to `threads` workers. Each index is
// processed exactly once; results must be written to per-index slots.
template <class Fn>
void parallel_for(long count, int threads, Fn&& fn) {
  const long workers = std::clamp<long>(threads, 1, std::max<long>(count, 1));
  if (workers == 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (long t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (long i = next++; i < count; i = next++) fn(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
        next = count;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return kNaN;
  return pairwise_sum(v) / static_cast<double>(v.size());
}

// Fills the aggregate fields of `rep` from per-replication slots (nullopt = failed).
void aggregate(SimReport& rep, const std::vector<std::optional<SupportMetrics>>& slots,
               bool keep) {
  std::vector<double> l2, linf, fp, fn;
  for (const auto& m : slots) {
    if (!m) {
      ++rep.failed_replications;
      continue;
    }
    l2.push_back(m->l2_error);
    linf.push_back(m->linf_error);
    fp.push_back(m->fp_pct);
    fn.push_back(m->fn_pct);
    if (keep) rep.per_replication.push_back(*m);
  }
  rep.replications = static_cast<long>(l2.size());
  rep.mean_l2 = mean_of(l2);
  rep.mean_linf = mean_of(linf);
  rep.mean_fp_pct = mean_of(fp);
  rep.mean_fn_pct = mean_of(fn);
}

LossKind parse_loss_abbrev(std::string_view s) {
  if (s == "L") return LossKind::Squared;
  if (s == "LH") return LossKind::Huber;
  if (s == "LPH") return LossKind::PseudoHuber;
  throw ConfigError("unknown estimator abbreviation '" + std::string(s) + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// Error families and scenarios

ErrorFamily ErrorFamily::normal(double var) {
  ErrorFamily f;
  f.kind = Kind::Normal;
  f.var = var;
  return f;
}

ErrorFamily ErrorFamily::student_t(double df, double scale) {
  ErrorFamily f;
  f.kind = Kind::StudentT;
  f.df = df;
  f.scale = scale;
  return f;
}

ErrorFamily ErrorFamily::skew_t(double loc, double scale, double shape, double df) {
  ErrorFamily f;
  f.kind = Kind::SkewT;
  f.loc = loc;
  f.scale = scale;
  f.shape = shape;
  f.df = df;
  return f;
}

double ErrorFamily::raw_mean() const {
  switch (kind) {
    case Kind::Normal:
    case Kind::StudentT: return 0.0;
    case Kind::SkewT: {
      const double delta = shape / std::sqrt(1.0 + shape * shape);
      // E[Z] = delta sqrt(2/pi); E[(W/df)^{-1/2}] = sqrt(df/2) Gamma((df-1)/2) / Gamma(df/2).
      const double inv_root = std::sqrt(df / 2.0) *
                              std::exp(std::lgamma((df - 1.0) / 2.0) - std::lgamma(df / 2.0));
      return loc + scale * delta * std::sqrt(2.0 / std::numbers::pi) * inv_root;
    }
  }
  return 0.0;
}

double ErrorFamily::variance() const {
  switch (kind) {
    case Kind::Normal: return var;
    case Kind::StudentT: return scale * scale * df / (df - 2.0);
    case Kind::SkewT: {
      const double mu = (raw_mean() - loc) / scale;
      return scale * scale * (df / (df - 2.0) - mu * mu);
    }
  }
  return kNaN;
}

void ErrorFamily::validate() const {
  switch (kind) {
    case Kind::Normal:
      if (!(var > 0.0)) throw ConfigError("normal error variance must be > 0");
      return;
    case Kind::StudentT:
    case Kind::SkewT:
      if (!(scale > 0.0)) throw ConfigError("error scale must be > 0");
      if (!(df > 2.0)) throw ConfigError("degrees of freedom must exceed 2 for a finite variance");
      if (!std::isfinite(loc) || !std::isfinite(shape)) {
        throw ConfigError("skew-t location and shape must be finite");
      }
      return;
  }
}

std::string_view to_string(ErrorFamily::Kind kind) {
  switch (kind) {
    case ErrorFamily::Kind::Normal: return "normal";
    case ErrorFamily::Kind::StudentT: return "student_t";
    case ErrorFamily::Kind::SkewT: return "skew_t";
  }
  return "unknown";
}

void Scenario::validate() const {
  if (n < 1 || p < 1) throw ConfigError("scenario needs n >= 1 and p >= 1");
  if (beta_star.size() != p) {
    throw ConfigError("beta_star has length " + std::to_string(beta_star.size()) + ", expected p = " +
                      std::to_string(p));
  }
  if (!beta_star.allFinite()) throw ConfigError("beta_star contains non-finite entries");
  error_family.validate();
  if (heteroscedastic && beta_star.squaredNorm() == 0.0) {
    throw ConfigError("heteroscedastic errors need a nonzero beta_star");
  }
}

Vector sparse_beta(long p, long s, double value) {
  Vector b = Vector::Zero(p);
  b.head(std::min(s, p)).setConstant(value);
  return b;
}

std::vector<std::string> builtin_scenario_names() {
  return {"table1", "table2", "table3", "table4", "table5", "table6"};
}

Scenario builtin_scenario(std::string_view name) {
  Scenario sc;
  sc.name = std::string(name);
  sc.n = 200;
  sc.p = 400;
  sc.beta_star = sparse_beta(sc.p, 20, 3.0);
  sc.seed = 1;
  if (name == "table1" || name == "table2") {
    sc.error_family = ErrorFamily::normal(4.0);
  } else if (name == "table3" || name == "table4") {
    sc.error_family = ErrorFamily::student_t(3.0, 2.0);
  } else if (name == "table5" || name == "table6") {
    sc.error_family = ErrorFamily::skew_t(0.0, 1.0, 0.6, 3.0);
  } else {
    throw ConfigError("unknown built-in scenario '" + std::string(name) + "'");
  }
  sc.heteroscedastic = name == "table2" || name == "table4" || name == "table6";
  return sc;
}

// ---------------------------------------------------------------------------
// Data generation

Matrix gen_design(long n, long p, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(n, p);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < p; ++j) x(i, j) = normal(rng);
  }
  return x;
}

double sample_skew_t(double loc, double scale, double shape, double df, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::chi_squared_distribution<double> chi2(df);
  const double delta = shape / std::sqrt(1.0 + shape * shape);
  const double u0 = normal(rng);
  const double u1 = normal(rng);
  const double z = delta * std::abs(u0) + std::sqrt(1.0 - delta * delta) * u1;
  const double w = chi2(rng);
  return loc + scale * z / std::sqrt(w / df);
}

Vector gen_base_errors(const ErrorFamily& family, long n, Rng& rng) {
  family.validate();
  Vector e(n);
  switch (family.kind) {
    case ErrorFamily::Kind::Normal: {
      std::normal_distribution<double> normal(0.0, std::sqrt(family.var));
      for (long i = 0; i < n; ++i) e[i] = normal(rng);
      break;
    }
    case ErrorFamily::Kind::StudentT: {
      std::student_t_distribution<double> t(family.df);
      for (long i = 0; i < n; ++i) e[i] = family.scale * t(rng);
      break;
    }
    case ErrorFamily::Kind::SkewT: {
      const double mean = family.raw_mean();
      for (long i = 0; i < n; ++i) {
        e[i] = sample_skew_t(family.loc, family.scale, family.shape, family.df, rng) - mean;
      }
      break;
    }
  }
  return e;
}

Vector apply_heteroscedasticity(const Matrix& x, const Vector& beta_star, const Vector& base) {
  if (x.cols() != beta_star.size() || x.rows() != base.size()) {
    throw DimensionError("apply_heteroscedasticity: dimensions do not agree");
  }
  const double b2 = beta_star.squaredNorm();
  if (b2 == 0.0) throw ConfigError("heteroscedastic errors need a nonzero beta_star");
  const Vector index = x * beta_star;
  const double c = 1.0 / (std::sqrt(3.0) * b2);
  return (c * index.array().square() * base.array()).matrix();
}

Vector gen_errors(const Scenario& scenario, const Matrix& x, Rng& rng) {
  if (x.cols() != scenario.beta_star.size()) throw DimensionError("gen_errors: X and beta* disagree");
  if (scenario.heteroscedastic && scenario.beta_star.squaredNorm() == 0.0) {
    throw ConfigError("heteroscedastic errors need a nonzero beta_star");
  }
  Vector base = gen_base_errors(scenario.error_family, x.rows(), rng);
  if (!scenario.heteroscedastic) return base;
  return apply_heteroscedasticity(x, scenario.beta_star, base);
}

Dataset generate_dataset(const Scenario& scenario, std::uint64_t seed) {
  scenario.validate();
  Rng rng(seed);
  Matrix x = gen_design(scenario.n, scenario.p, rng);
  Vector eps = gen_errors(scenario, x, rng);
  Vector y = x * scenario.beta_star + eps;
  return Dataset(std::move(x), std::move(y));
}

// ---------------------------------------------------------------------------
// Conventions and pipelines

std::string_view to_string(LambdaConvention c) {
  return c == LambdaConvention::Objective ? "objective" : "package";
}

LambdaConvention parse_lambda_convention(std::string_view name) {
  if (name == "objective") return LambdaConvention::Objective;
  if (name == "package") return LambdaConvention::Package;
  throw ConfigError("unknown lambda convention '" + std::string(name) +
                    "' (expected objective or package)");
}

// Least squares: the package minimizes (1/2n) sum r^2 + lambda |b|_1, i.e. half of
// our objective at lambda_obj = 2 lambda.
// Huber / pseudo-Huber: the package loss is (alpha/2) l(r) and the quoted value is
// lambda_pkg / alpha; dividing the package objective by alpha/2 gives
// lambda_obj = 2 lambda_pkg / alpha = 2 * quoted.
// Both chains end in the same factor.
double objective_lambda(double quoted, LambdaConvention c) {
  return c == LambdaConvention::Objective ? quoted : 2.0 * quoted;
}

double quoted_lambda(double objective, LambdaConvention c) {
  return c == LambdaConvention::Objective ? objective : 0.5 * objective;
}

std::optional<FitResult> EstimatorPipeline::fit_initial(const Dataset& data) const {
  if (!initial) return std::nullopt;
  return solve(data, initial->loss, objective_lambda(initial->lambda, convention),
               PenaltyWeights::ones(data.p()), solver);
}

Vector EstimatorPipeline::fit_final(const Dataset& data, const std::optional<FitResult>& first,
                                    double lambda, double alpha) const {
  const LossSpec spec{loss, loss == LossKind::Squared ? 1.0 : alpha};
  const double lam = objective_lambda(lambda, convention);
  if (!initial) return solve(data, spec, lam, PenaltyWeights::ones(data.p()), solver).beta;
  if (!first) throw ConfigError("adaptive pipeline needs its initial fit");
  AdaptiveOptions opts;
  opts.lambda_adaptive = lam;
  opts.normalization = normalization;
  return fit_adaptive_from(data, *first, objective_lambda(initial->lambda, convention), spec, solver,
                           opts)
      .final.beta;
}

EstimatorPipeline make_pipeline(std::string_view label, std::optional<Stage> initial,
                                LambdaConvention convention) {
  EstimatorPipeline pl;
  pl.label = std::string(label);
  pl.convention = convention;
  std::string_view head = label;
  std::optional<LossKind> init_kind;
  if (const auto open = label.find('('); open != std::string_view::npos) {
    if (label.back() != ')') throw ConfigError("malformed estimator label '" + pl.label + "'");
    head = label.substr(0, open);
    init_kind = parse_loss_abbrev(label.substr(open + 1, label.size() - open - 2));
  }
  const bool adaptive = head.starts_with("A");
  pl.loss = parse_loss_abbrev(adaptive ? head.substr(1) : head);
  if (!adaptive) {
    if (init_kind) throw ConfigError("non-adaptive estimator '" + pl.label + "' takes no initial stage");
    return pl;
  }
  if (!initial) throw ConfigError("adaptive estimator '" + pl.label + "' needs an initial stage");
  if (!init_kind && pl.loss == LossKind::Squared) init_kind = LossKind::Squared;
  if (init_kind && *init_kind != initial->loss.kind) {
    throw ConfigError("initial stage loss does not match estimator label '" + pl.label + "'");
  }
  initial->loss.validate();
  pl.initial = initial;
  if (convention == LambdaConvention::Package && pl.loss == LossKind::Squared) {
    pl.normalization = WeightNormalization::MeanOne;
  }
  return pl;
}

namespace {

struct Row {
  const char* label;
  double lambda;
  double alpha;  // NaN = none
  const char* init;  // label of the initial column, or nullptr
  double l2, linf, fp, fn;
};

std::vector<ReferenceColumn> build_columns(const std::vector<Row>& rows) {
  std::vector<ReferenceColumn> cols;
  for (const auto& r : rows) {
    ReferenceColumn c;
    c.label = r.label;
    c.lambda = r.lambda;
    if (!std::isnan(r.alpha)) c.alpha = r.alpha;
    c.l2 = r.l2;
    c.linf = r.linf;
    c.fp_pct = r.fp;
    c.fn_pct = r.fn;
    if (r.init != nullptr) {
      const auto it = std::find_if(rows.begin(), rows.end(),
                                   [&](const Row& o) { return std::string_view(o.label) == r.init; });
      const LossKind kind = parse_loss_abbrev(it->label);
      c.initial = Stage{LossSpec{kind, std::isnan(it->alpha) ? 1.0 : it->alpha}, it->lambda};
    }
    cols.push_back(std::move(c));
  }
  return cols;
}

}  // namespace

std::vector<ReferenceColumn> reference_columns(std::string_view name) {
  const double na = kNaN;
  if (name == "table1") {
    return build_columns({{"L", 0.154, na, nullptr, 1.66, 0.60, 16.14, 0.00},
                          {"AL", 0.695, na, "L", 0.93, 0.41, 1.83, 0.00},
                          {"LH", 0.157, 0.115, nullptr, 1.67, 0.61, 15.76, 0.00},
                          {"LPH", 0.150, 0.061, nullptr, 1.67, 0.61, 16.32, 0.00},
                          {"ALH(LH)", 0.066, 0.153, "LH", 0.83, 0.38, 1.06, 0.00},
                          {"ALPH(LH)", 0.067, 0.050, "LH", 0.83, 0.38, 0.99, 0.00},
                          {"ALPH(LPH)", 0.069, 0.050, "LPH", 0.83, 0.38, 0.97, 0.00}});
  }
  if (name == "table2") {
    return build_columns({{"L", 0.150, na, nullptr, 1.65, 0.59, 15.81, 0.00},
                          {"AL", 0.715, na, "L", 0.98, 0.41, 1.91, 0.00},
                          {"LH", 0.018, 3.476, nullptr, 1.12, 0.37, 21.47, 0.00},
                          {"ALH(LH)", 0.0003, 57.068, "LH", 0.23, 0.10, 0.96, 0.00},
                          {"ALPH(LH)", 0.0003, 55.474, "LH", 0.22, 0.09, 1.08, 0.00}});
  }
  if (name == "table3") {
    return build_columns({{"L", 0.262, na, nullptr, 2.85, 1.03, 15.64, 0.03},
                          {"AL", 0.901, na, "L", 1.89, 0.76, 2.74, 0.05},
                          {"LH", 0.142, 0.429, nullptr, 2.34, 0.85, 16.66, 0.00},
                          {"LPH", 0.080, 0.742, nullptr, 2.35, 0.85, 17.59, 0.00},
                          {"ALH(LH)", 0.059, 0.563, "LH", 1.17, 0.53, 1.38, 0.00},
                          {"ALPH(LH)", 0.040, 0.769, "LH", 1.18, 0.53, 1.39, 0.00},
                          {"ALPH(LPH)", 0.033, 0.974, "LPH", 1.19, 0.53, 1.51, 0.00}});
  }
  if (name == "table4") {
    return build_columns({{"L", 0.226, na, nullptr, 2.71, 0.94, 16.36, 0.11},
                          {"AL", 0.849, na, "L", 1.87, 0.72, 3.05, 0.16},
                          {"LH", 0.019, 3.574, nullptr, 1.37, 0.46, 20.95, 0.00},
                          {"ALH(LH)", 0.0005, 33.854, "LH", 0.28, 0.12, 1.13, 0.00},
                          {"ALPH(LH)", 0.0006, 29.368, "LH", 0.28, 0.11, 1.18, 0.00}});
  }
  if (name == "table5") {
    return build_columns({{"L", 0.118, na, nullptr, 1.33, 0.48, 16.37, 0.01},
                          {"AL", 0.709, na, "L", 0.74, 0.32, 1.56, 0.01},
                          {"LH", 0.070, 0.863, nullptr, 1.08, 0.39, 16.48, 0.00},
                          {"LPH", 0.058, 0.871, nullptr, 1.12, 0.40, 16.49, 0.00},
                          {"ALH(LH)", 0.019, 1.124, "LH", 0.47, 0.22, 0.52, 0.02},
                          {"ALPH(LH)", 0.011, 1.842, "LH", 0.46, 0.22, 0.63, 0.00},
                          {"ALPH(LPH)", 0.010, 2.184, "LPH", 0.47, 0.23, 0.53, 0.01}});
  }
  if (name == "table6") {
    return build_columns({{"L", 0.110, na, nullptr, 1.28, 0.45, 16.00, 0.02},
                          {"AL", 0.649, na, "L", 0.77, 0.32, 1.80, 0.02},
                          {"LH", 0.009, 7.00, nullptr, 0.64, 0.22, 21.18, 0.00},
                          {"ALH(LH)", 0.0003, 33.898, "LH", 0.11, 0.05, 0.43, 0.00},
                          {"ALPH(LH)", 0.0002, 50.684, "LH", 0.11, 0.05, 0.48, 0.00}});
  }
  throw ConfigError("no reference settings for scenario '" + std::string(name) + "'");
}

EstimatorPipeline pipeline_for(const ReferenceColumn& col) {
  return make_pipeline(col.label, col.initial, LambdaConvention::Package);
}

// ---------------------------------------------------------------------------
// Monte Carlo

SimReport run_monte_carlo(const Scenario& scenario, const EstimatorPipeline& pipeline, double lambda,
                          std::optional<double> alpha, long replications, std::uint64_t seed,
                          const RunOptions& opts) {
  scenario.validate();
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (!(lambda >= 0.0)) throw ConfigError("lambda must be >= 0");
  if (pipeline.loss != LossKind::Squared && !alpha) {
    throw ConfigError("estimator '" + pipeline.label + "' needs alpha");
  }
  const double a = pipeline.loss == LossKind::Squared ? 1.0 : *alpha;

  std::vector<std::optional<SupportMetrics>> slots(static_cast<std::size_t>(replications));
  parallel_for(replications, opts.threads, [&](long r) {
    const Dataset data = generate_dataset(scenario, derive_seed(seed, static_cast<std::uint64_t>(r)));
    try {
      const Vector beta = pipeline.fit(data, lambda, a);
      slots[static_cast<std::size_t>(r)] = support_metrics(beta, scenario.beta_star);
    } catch (const NumericalError&) {
      slots[static_cast<std::size_t>(r)].reset();
    }
  });

  SimReport rep;
  rep.estimator_label = pipeline.label;
  rep.lambda = lambda;
  if (pipeline.loss != LossKind::Squared) rep.alpha = a;
  rep.seed = seed;
  aggregate(rep, slots, opts.keep_per_replication);
  if (rep.replications == 0) throw NumericalError("every replication failed");
  return rep;
}

GridResult grid_search(const Scenario& scenario, const EstimatorPipeline& pipeline,
                       const std::vector<double>& alpha_grid,
                       const std::vector<double>& lambda_grid, long replications,
                       std::uint64_t seed, const RunOptions& opts) {
  scenario.validate();
  if (replications < 1) throw ConfigError("replications must be >= 1");
  if (lambda_grid.empty()) throw ConfigError("lambda grid is empty");
  const bool robust = pipeline.loss != LossKind::Squared;
  if (robust && alpha_grid.empty()) throw ConfigError("alpha grid is empty");
  const std::vector<double> alphas = robust ? alpha_grid : std::vector<double>{kNaN};
  for (double a : alphas) {
    if (robust && !(a > 0.0)) throw ConfigError("alpha grid values must be > 0");
  }
  for (double l : lambda_grid) {
    if (!(l >= 0.0)) throw ConfigError("lambda grid values must be >= 0");
  }

  const std::size_t points = alphas.size() * lambda_grid.size();
  // metrics[point][replication]
  std::vector<std::vector<std::optional<SupportMetrics>>> metrics(
      points, std::vector<std::optional<SupportMetrics>>(static_cast<std::size_t>(replications)));
  parallel_for(replications, opts.threads, [&](long r) {
    const auto ri = static_cast<std::size_t>(r);
    const Dataset data = generate_dataset(scenario, derive_seed(seed, static_cast<std::uint64_t>(r)));
    std::optional<FitResult> first;
    try {
      first = pipeline.fit_initial(data);
    } catch (const NumericalError&) {
      return;  // every grid point fails for this replication
    }
    for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
      for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
        const double a = robust ? alphas[ai] : 1.0;
        try {
          const Vector beta = pipeline.fit_final(data, first, lambda_grid[li], a);
          metrics[ai * lambda_grid.size() + li][ri] = support_metrics(beta, scenario.beta_star);
        } catch (const NumericalError&) {
        }
      }
    }
  });

  GridResult out;
  std::optional<std::size_t> best;
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    for (std::size_t li = 0; li < lambda_grid.size(); ++li) {
      const std::size_t idx = ai * lambda_grid.size() + li;
      GridPoint gp;
      gp.alpha = alphas[ai];
      gp.lambda = lambda_grid[li];
      gp.report.estimator_label = pipeline.label;
      gp.report.lambda = gp.lambda;
      if (robust) gp.report.alpha = gp.alpha;
      gp.report.seed = seed;
      aggregate(gp.report, metrics[idx], opts.keep_per_replication);
      out.surface.push_back(std::move(gp));
      const GridPoint& cand = out.surface.back();
      if (cand.report.replications == 0) continue;
      if (!best) {
        best = idx;
        continue;
      }
      const GridPoint& inc = out.surface[*best];
      const double c = cand.report.mean_l2;
      const double b = inc.report.mean_l2;
      const bool better =
          c < b || (c == b && (cand.lambda < inc.lambda ||
                               (cand.lambda == inc.lambda && robust && cand.alpha < inc.alpha)));
      if (better) best = idx;
    }
  }
  if (!best) throw NumericalError("every grid point failed");
  out.best = out.surface[*best].report;
  out.lambda = out.surface[*best].lambda;
  if (robust) out.alpha = out.surface[*best].alpha;
  return out;
}

std::vector<double> log_grid(double a, double b, int k) {
  if (k < 1) throw ConfigError("grid needs at least one point");
  if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("log-spaced grid bounds must be > 0");
  if (k == 1) return {a};
  std::vector<double> g(static_cast<std::size_t>(k));
  const double la = std::log(a);
  const double lb = std::log(b);
  for (int i = 0; i < k; ++i) g[i] = std::exp(la + (lb - la) * i / (k - 1));
  g.front() = a;
  g.back() = b;
  return g;
}

}  // namespace robreg
