#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "robreg/error.hpp"
#include "robreg/io.hpp"

namespace robreg::cli {
namespace {

constexpr const char* kFormats = R"(File formats
  CSV input   header row required; every column numeric; the LAST column is the
              response, all preceding columns are covariates.
  Scenario    JSON object {"name", "n", "p", "beta_star": [p numbers],
              "error_family": {"kind": "normal", "var"} |
                              {"kind": "student_t", "df", "scale"} |
                              {"kind": "skew_t", "loc", "scale", "shape", "df"},
              "heteroscedastic": bool, "seed": uint64}
              or one of the built-in names table1 ... table6.
  JSON output NaN and infinity are written as null; in weight vectors null
              means an infinite weight (coordinate frozen at zero).
  Indices     coefficient indices are 0-based.
Exit codes: 0 success, 2 configuration or parse error, 3 numerical failure.
)";

struct SolverFlags {
  int max_sweeps = 10000;
  double tol = 1e-7;
  double kkt_tol = 1e-6;
  double c_beta = kInf;
  std::string update = "newton";

  void attach(CLI::App* app) {
    app->add_option("--max-sweeps", max_sweeps, "Coordinate descent sweep limit")->capture_default_str();
    app->add_option("--tol", tol, "Max coordinate change per sweep at convergence")->capture_default_str();
    app->add_option("--kkt-tol", kkt_tol, "Stationarity tolerance")->capture_default_str();
    app->add_option("--c-beta", c_beta, "Radius of the l2-ball constraint (default: none)");
    app->add_option("--update", update, "Coordinate update: newton or majorize")->capture_default_str();
  }

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.max_sweeps = max_sweeps;
    cfg.tol = tol;
    cfg.kkt_tol = kkt_tol;
    cfg.c_beta = c_beta;
    if (update == "newton") {
      cfg.update = CoordinateUpdate::Newton;
    } else if (update == "majorize") {
      cfg.update = CoordinateUpdate::Majorize;
    } else {
      throw ConfigError("--update must be newton or majorize");
    }
    cfg.validate();
    return cfg;
  }
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << content;
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

bool is_builtin(const std::string& name) {
  for (const auto& b : builtin_scenario_names()) {
    if (b == name) return true;
  }
  return false;
}

Scenario load_scenario(const std::string& ref) {
  if (is_builtin(ref)) return builtin_scenario(ref);
  Scenario sc = scenario_from_json(read_json_file(ref));
  if (sc.name.empty()) sc.name = ref;
  return sc;
}

int default_threads() {
  if (const char* env = std::getenv("ROBREG_THREADS")) {
    try {
      const int t = std::stoi(env);
      if (t >= 1) return t;
    } catch (const std::exception&) {
    }
    throw ConfigError("ROBREG_THREADS must be a positive integer");
  }
  return 1;
}

/// "a:b:k" (k log-spaced points), "v1,v2,..." or a single value.
std::vector<double> parse_grid(const std::string& spec, const std::string& flag) {
  auto to_double = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw ParseError(flag + ": '" + s + "' is not a number");
    return v;
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw ParseError(flag + ": expected a:b:k");
    const double k = to_double(parts[2]);
    if (k < 1 || k != std::floor(k)) throw ParseError(flag + ": k must be a positive integer");
    return log_grid(to_double(parts[0]), to_double(parts[1]), static_cast<int>(k));
  }
  std::vector<double> out;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(to_double(part));
  if (out.empty()) throw ParseError(flag + ": empty grid");
  return out;
}

std::vector<Eigen::Index> parse_support(const std::string& spec) {
  std::vector<Eigen::Index> s;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ',');) {
    if (part.empty()) continue;
    std::size_t used = 0;
    long v = -1;
    try {
      v = std::stol(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || v < 0) throw ParseError("--support: '" + part + "' is not an index");
    s.push_back(v);
  }
  return s;
}

std::vector<Eigen::Index> support_from_json(const json& j) {
  const json* src = nullptr;
  if (j.contains("adaptive") && j["adaptive"].is_object()) {
    src = &j["adaptive"]["final"]["support"];
  } else if (j.contains("fit")) {
    src = &j["fit"]["support"];
  } else if (j.contains("support")) {
    src = &j["support"];
  }
  if (src == nullptr || !src->is_array()) throw ParseError("no support array found in fit JSON");
  std::vector<Eigen::Index> s;
  for (const auto& v : *src) s.push_back(v.get<long>());
  return s;
}

std::string norms_line(const Vector& beta) {
  std::ostringstream o;
  o << "l1 norm " << beta.lpNorm<1>() << ", l2 norm " << beta.norm();
  return o.str();
}

std::string support_line(const std::vector<Eigen::Index>& s) {
  std::ostringstream o;
  o << "support (" << s.size() << "):";
  for (auto k : s) o << ' ' << k;
  return o.str();
}

// fit ------------------------------------------------------------------------

struct FitFlags {
  std::string data;
  std::string out;
  std::string loss = "pseudo-huber";
  std::optional<double> alpha;
  double c_alpha = 1.0;
  std::string initial_loss;
  std::optional<double> initial_alpha;
  std::optional<double> lambda_init;
  std::optional<double> lambda;
  double c_lambda = 1.0;
  int stages = 2;
  SolverFlags solver;
};

int cmd_fit(const FitFlags& f, std::ostream& out) {
  const CsvTable table = read_csv_dataset_file(f.data);
  const Dataset& data = table.data;
  const SolverConfig cfg = f.solver.config();

  auto make_spec = [&](const std::string& name, std::optional<double> alpha) {
    LossSpec spec{parse_loss_kind(name), 1.0};
    if (spec.kind != LossKind::Squared) {
      spec.alpha = alpha ? *alpha : scale_alpha(data.n(), data.p(), f.c_alpha);
    }
    spec.validate();
    return spec;
  };
  const LossSpec final_spec = make_spec(f.loss, f.alpha);
  const LossSpec initial_spec =
      f.initial_loss.empty() ? final_spec
                             : make_spec(f.initial_loss, f.initial_alpha ? f.initial_alpha : f.alpha);

  json doc;
  doc["input"] = f.data;
  doc["loss"] = {{"kind", std::string(to_string(final_spec.kind))}, {"alpha", final_spec.alpha}};
  doc["stages"] = f.stages;
  FitResult shown;
  if (f.stages == 1) {
    const double lam = f.lambda ? *f.lambda : f.lambda_init ? *f.lambda_init : -1.0;
    if (lam < 0.0) throw ConfigError("--stages 1 needs --lambda");
    shown = solve(data, final_spec, lam, PenaltyWeights::ones(data.p()), cfg);
    doc["lambda"] = lam;
    doc["fit"] = to_json(shown);
    doc["adaptive"] = nullptr;
  } else if (f.stages == 2) {
    if (data.p() < 2 && (!f.lambda_init || !f.lambda)) {
      throw ConfigError("p = 1: give --lambda-init and --lambda explicitly");
    }
    const double lam0 = f.lambda_init ? *f.lambda_init
                                      : std::sqrt(std::log(static_cast<double>(data.p())) /
                                                  static_cast<double>(data.n()));
    AdaptiveOptions opts;
    opts.c_lambda = f.c_lambda;
    opts.lambda_adaptive = f.lambda;
    const AdaptiveFitResult res = fit_adaptive(data, initial_spec, lam0, final_spec, cfg, opts);
    shown = res.final;
    doc["initial_loss"] = {{"kind", std::string(to_string(initial_spec.kind))},
                           {"alpha", initial_spec.alpha}};
    doc["fit"] = to_json(res.final);
    doc["adaptive"] = to_json(res);
    out << "lambda_init " << res.lambda_init << ", |S_bar| " << res.s_bar.size()
        << ", adaptive lambda " << res.lambda_adaptive << (res.empty_s_bar ? " (empty S_bar)" : "")
        << "\n";
  } else {
    throw ConfigError("--stages must be 1 or 2");
  }
  out << support_line(shown.support) << "\n";
  out << norms_line(shown.beta) << "\n";
  out << "kkt residual " << shown.kkt_residual << (shown.converged ? "" : " (not converged)") << "\n";
  if (!shown.zero_columns.empty()) out << "warning: all-zero covariate columns frozen at 0\n";
  if (!f.out.empty()) write_file(f.out, dump(doc));
  return kOk;
}

// simulate -------------------------------------------------------------------

struct SimFlags {
  std::string scenario = "table1";
  std::string estimator = "all";
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<double> initial_lambda;
  std::optional<double> initial_alpha;
  std::string convention = "package";
  long reps = 100;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;
  bool per_replication = false;
  // tune only
  std::string grid_alpha = "0.01:100:20";
  std::string grid_lambda = "1e-4:1:30";
};

// Reference column for `label` when the scenario has built-in settings.
std::optional<ReferenceColumn> reference_for(const Scenario& sc, const std::string& label) {
  if (!is_builtin(sc.name)) return std::nullopt;
  for (auto& c : reference_columns(sc.name)) {
    if (c.label == label) return c;
  }
  return std::nullopt;
}

struct Job {
  EstimatorPipeline pipeline;
  std::optional<double> lambda;
  std::optional<double> alpha;
};

Job make_job(const Scenario& sc, const SimFlags& f, const std::string& label, bool use_overrides) {
  const LambdaConvention conv = parse_lambda_convention(f.convention);
  const auto ref = reference_for(sc, label);
  Job job;
  job.lambda = use_overrides && f.lambda ? f.lambda : ref ? std::optional<double>(ref->lambda) : std::nullopt;
  job.alpha = use_overrides && f.alpha ? f.alpha : ref ? ref->alpha : std::nullopt;

  std::optional<Stage> initial = ref ? ref->initial : std::nullopt;
  const bool adaptive = label.starts_with("A");
  if (adaptive && use_overrides && (f.initial_lambda || f.initial_alpha || !initial)) {
    // Initial loss comes from the label: "AL" -> squared, "X(LH)" -> Huber, "X(LPH)" -> pseudo-Huber.
    LossKind kind = LossKind::Squared;
    if (label.ends_with("(LH)")) kind = LossKind::Huber;
    if (label.ends_with("(LPH)")) kind = LossKind::PseudoHuber;
    if (label != "AL" && !label.ends_with(")")) {
      throw ConfigError("adaptive estimator label must name its initial stage, e.g. ALPH(LPH)");
    }
    Stage st;
    st.loss.kind = kind;
    st.loss.alpha = initial ? initial->loss.alpha : 1.0;
    st.lambda = initial ? initial->lambda : -1.0;
    if (f.initial_alpha) st.loss.alpha = *f.initial_alpha;
    if (f.initial_lambda) st.lambda = *f.initial_lambda;
    if (st.lambda < 0.0) throw ConfigError("estimator " + label + " needs --initial-lambda");
    if (kind != LossKind::Squared && !initial && !f.initial_alpha) {
      throw ConfigError("estimator " + label + " needs --initial-alpha");
    }
    initial = st;
  }
  job.pipeline = make_pipeline(label, initial, conv);
  return job;
}

int cmd_simulate(const SimFlags& f, std::ostream& out) {
  const Scenario sc = load_scenario(f.scenario);
  const std::uint64_t seed = f.seed ? *f.seed : sc.seed;
  RunOptions opts;
  opts.threads = f.threads ? *f.threads : default_threads();
  opts.keep_per_replication = f.per_replication;
  if (opts.threads < 1) throw ConfigError("--threads must be >= 1");

  std::vector<Job> jobs;
  if (f.estimator == "all") {
    if (!is_builtin(sc.name)) throw ConfigError("--estimator all needs a built-in scenario");
    for (const auto& c : reference_columns(sc.name)) jobs.push_back(make_job(sc, f, c.label, false));
  } else {
    std::stringstream ss(f.estimator);
    std::vector<std::string> labels;
    for (std::string l; std::getline(ss, l, ';');) labels.push_back(l);
    for (const auto& l : labels) jobs.push_back(make_job(sc, f, l, labels.size() == 1));
  }

  std::vector<SimReport> reports;
  for (const auto& job : jobs) {
    if (!job.lambda) throw ConfigError("estimator " + job.pipeline.label + " needs --lambda");
    if (job.pipeline.loss != LossKind::Squared && !job.alpha) {
      throw ConfigError("estimator " + job.pipeline.label + " needs --alpha");
    }
    reports.push_back(run_monte_carlo(sc, job.pipeline, *job.lambda, job.alpha, f.reps, seed, opts));
  }

  std::ostringstream caption;
  caption << "scenario " << sc.name << ", " << f.reps << " replications, seed " << seed
          << ", lambda convention " << f.convention;
  const std::string table = format_table(reports, caption.str());
  out << table;

  if (!f.out.empty()) {
    json doc;
    doc["scenario"] = to_json(sc);
    doc["convention"] = f.convention;
    doc["reports"] = json::array();
    for (const auto& r : reports) doc["reports"].push_back(to_json(r));
    write_file(f.out + ".json", dump(doc));
    write_file(f.out + ".txt", table);
    if (f.per_replication) {
      for (const auto& r : reports) {
        write_file(f.out + "." + r.estimator_label + ".replications.csv", per_replication_csv(r));
      }
    }
  }
  return kOk;
}

int cmd_tune(const SimFlags& f, std::ostream& out) {
  const Scenario sc = load_scenario(f.scenario);
  const std::uint64_t seed = f.seed ? *f.seed : sc.seed;
  RunOptions opts;
  opts.threads = f.threads ? *f.threads : default_threads();
  if (opts.threads < 1) throw ConfigError("--threads must be >= 1");
  if (f.estimator == "all" || f.estimator.find(';') != std::string::npos) {
    throw ConfigError("tune takes exactly one --estimator");
  }
  const Job job = make_job(sc, f, f.estimator, true);
  const auto alphas = parse_grid(f.grid_alpha, "--grid-alpha");
  const auto lambdas = parse_grid(f.grid_lambda, "--grid-lambda");
  const GridResult grid = grid_search(sc, job.pipeline, alphas, lambdas, f.reps, seed, opts);

  if (grid.alpha) out << "alpha* " << *grid.alpha << "\n";
  out << "lambda* " << grid.lambda << "\n";
  out << format_table({grid.best});
  if (!f.out.empty()) {
    json doc;
    doc["scenario"] = sc.name;
    doc["estimator"] = job.pipeline.label;
    doc["convention"] = f.convention;
    doc["selected"] = {{"alpha", grid.alpha ? json(*grid.alpha) : json(nullptr)},
                       {"lambda", grid.lambda}};
    doc["report"] = to_json(grid.best);
    doc["grid_alpha"] = job.pipeline.loss == LossKind::Squared ? json::array() : json(alphas);
    doc["grid_lambda"] = lambdas;
    write_file(f.out + ".json", dump(doc));
    write_file(f.out + ".surface.csv", surface_csv(grid));
    write_file(f.out + ".svg", surface_svg(grid, "mean l2 error, " + job.pipeline.label + ", " + sc.name));
  }
  return kOk;
}

// diagnose -------------------------------------------------------------------

struct DiagFlags {
  std::string data;
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::string support;
  std::string support_from;
  std::string weights_from;
  std::string loss = "pseudo-huber";
  std::optional<double> alpha;
  std::optional<double> lambda;
  std::string out;
  SolverFlags solver;
};

int cmd_diagnose(const DiagFlags& f, std::ostream& out, std::ostream& err) {
  if (f.data.empty() == f.scenario.empty()) throw ConfigError("give exactly one of --data or --scenario");
  std::optional<Dataset> data;
  std::vector<Eigen::Index> support;
  bool have_support = false;
  if (!f.data.empty()) {
    data = read_csv_dataset_file(f.data).data;
  } else {
    const Scenario sc = load_scenario(f.scenario);
    data = generate_dataset(sc, derive_seed(f.seed ? *f.seed : sc.seed, 0));
    support = support_of(sc.beta_star);
    have_support = true;
  }
  if (!f.support.empty() && !f.support_from.empty()) {
    throw ConfigError("give at most one of --support and --support-from");
  }
  if (!f.support.empty()) {
    support = parse_support(f.support);
    have_support = true;
  } else if (!f.support_from.empty()) {
    support = support_from_json(read_json_file(f.support_from));
    have_support = true;
  }
  if (!have_support) throw ConfigError("no support given (--support or --support-from)");
  if (!f.lambda) throw ConfigError("--lambda is required");

  LossSpec spec{parse_loss_kind(f.loss), 1.0};
  if (spec.kind != LossKind::Squared) {
    if (!f.alpha) throw ConfigError("--alpha is required for robust losses");
    spec.alpha = *f.alpha;
  }
  spec.validate();
  PenaltyWeights w = PenaltyWeights::ones(data->p());
  if (!f.weights_from.empty()) {
    const json j = read_json_file(f.weights_from);
    if (!j.contains("adaptive") || !j["adaptive"].is_object()) {
      throw ParseError(f.weights_from + ": no adaptive weights found");
    }
    w = weights_from_json(j["adaptive"]["weights"]);
    if (w.size() != data->p()) throw DimensionError("weights do not match the number of covariates");
  }

  const PDWReport rep = pdw_check(*data, spec, *f.lambda, w, support, f.solver.config());
  out << "dual feasibility margin " << rep.dual_feasibility_margin << "\n";
  out << "full matches restricted " << (rep.full_matches_restricted ? "true" : "false") << "\n";
  out << "incoherence " << rep.incoherence << "\n";
  out << "min eigenvalue (S,S) " << rep.min_eig_SS << "\n";
  if (!f.out.empty()) write_file(f.out, dump(to_json(rep)));
  if (std::isnan(rep.dual_feasibility_margin)) {
    err << "error: restricted problem is singular on the given support\n";
    return kNumericalError;
  }
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust sparse regression with (pseudo-)Huber loss and adaptive LASSO", "robreg"};
  app.footer(kFormats);
  app.require_subcommand(1);

  FitFlags fit;
  auto* fit_cmd = app.add_subcommand("fit", "Fit a (two-stage adaptive) weighted LASSO on CSV data");
  fit_cmd->add_option("--data", fit.data, "CSV file (response in the last column)")->required();
  fit_cmd->add_option("--out", fit.out, "Write the result as JSON");
  fit_cmd->add_option("--loss", fit.loss, "squared, huber or pseudo-huber")->capture_default_str();
  fit_cmd->add_option("--alpha", fit.alpha, "Robustification parameter (default c_alpha sqrt(log p / n))");
  fit_cmd->add_option("--c-alpha", fit.c_alpha, "Constant for the default alpha")->capture_default_str();
  fit_cmd->add_option("--initial-loss", fit.initial_loss, "Loss of the first stage (default: --loss)");
  fit_cmd->add_option("--initial-alpha", fit.initial_alpha, "Alpha of the first stage (default: --alpha)");
  fit_cmd->add_option("--lambda-init", fit.lambda_init, "First-stage lambda (default sqrt(log p / n))");
  fit_cmd->add_option("--lambda", fit.lambda,
                      "Lambda of the single stage, or second-stage lambda overriding the scaling rule");
  fit_cmd->add_option("--c-lambda", fit.c_lambda, "Constant of the second-stage lambda scaling")
      ->capture_default_str();
  fit_cmd->add_option("--stages", fit.stages, "1 = plain fit, 2 = adaptive two-stage fit")
      ->capture_default_str();
  fit.solver.attach(fit_cmd);

  SimFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo evaluation on a scenario");
  auto add_common = [](CLI::App* cmd, SimFlags& s) {
    cmd->add_option("--scenario", s.scenario, "Built-in name (table1..table6) or scenario JSON file")
        ->capture_default_str();
    cmd->add_option("--lambda", s.lambda, "Lambda of the tuned stage (default: reference setting)");
    cmd->add_option("--alpha", s.alpha, "Alpha of the tuned stage (default: reference setting)");
    cmd->add_option("--initial-lambda", s.initial_lambda, "First-stage lambda of adaptive estimators");
    cmd->add_option("--initial-alpha", s.initial_alpha, "First-stage alpha of adaptive estimators");
    cmd->add_option("--convention", s.convention,
                    "Scale of lambda values: package (glmnet/hqreg style) or objective")
        ->capture_default_str();
    cmd->add_option("--reps", s.reps, "Replications")->capture_default_str();
    cmd->add_option("--seed", s.seed, "Master seed (default: the scenario's seed)");
    cmd->add_option("--threads", s.threads, "Worker threads (default: $ROBREG_THREADS or 1)");
    cmd->add_option("--out", s.out, "Output path prefix");
  };
  add_common(sim_cmd, sim);
  sim_cmd->add_option("--estimator", sim.estimator,
                      "L, AL, LH, LPH, ALH(LH), ALPH(LH), ALPH(LPH); ';'-separated list; or all")
      ->capture_default_str();
  sim_cmd->add_flag("--per-replication", sim.per_replication, "Also write per-replication CSV");

  SimFlags tune;
  tune.estimator.clear();
  auto* tune_cmd = app.add_subcommand("tune", "Oracle grid search minimizing the mean l2 error");
  add_common(tune_cmd, tune);
  tune_cmd->add_option("--estimator", tune.estimator, "Estimator label")->required();
  tune_cmd->add_option("--grid-alpha", tune.grid_alpha, "a:b:k log-spaced, or comma list")
      ->capture_default_str();
  tune_cmd->add_option("--grid-lambda", tune.grid_lambda, "a:b:k log-spaced, or comma list")
      ->capture_default_str();

  DiagFlags diag;
  auto* diag_cmd = app.add_subcommand("diagnose", "Primal-dual witness check for a candidate support");
  diag_cmd->add_option("--data", diag.data, "CSV file");
  diag_cmd->add_option("--scenario", diag.scenario, "Draw one dataset from a scenario instead");
  diag_cmd->add_option("--seed", diag.seed, "Seed for --scenario");
  diag_cmd->add_option("--support", diag.support, "Comma-separated 0-based indices");
  diag_cmd->add_option("--support-from", diag.support_from, "Take the support from a fit JSON");
  diag_cmd->add_option("--weights-from", diag.weights_from, "Take adaptive weights from a fit JSON");
  diag_cmd->add_option("--loss", diag.loss, "squared, huber or pseudo-huber")->capture_default_str();
  diag_cmd->add_option("--alpha", diag.alpha, "Robustification parameter");
  diag_cmd->add_option("--lambda", diag.lambda, "Regularization parameter (objective scale)");
  diag_cmd->add_option("--out", diag.out, "Write the report as JSON");
  diag.solver.attach(diag_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    out << app.help();
    if (app.get_subcommands().size() == 1) out.flush();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (*fit_cmd) return cmd_fit(fit, out);
    if (*sim_cmd) return cmd_simulate(sim, out);
    if (*tune_cmd) return cmd_tune(tune, out);
    if (*diag_cmd) return cmd_diagnose(diag, out, err);
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::exception& e) {
    err << "unexpected error: " << e.what() << "\n";
    return kUnexpected;
  }
  return kConfigError;
}

}  // namespace robreg::cli
