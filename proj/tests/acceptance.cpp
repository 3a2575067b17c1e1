// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "properties.hpp"
#include "robreg/simulation.hpp"

namespace fs = std::filesystem;
using namespace robreg;

namespace {

constexpr long kReps = 100;
constexpr std::uint64_t kVarianceSeed = 20261016;

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

bool within(double v, double center, double tol) { return std::abs(v - center) <= tol; }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string describe(const SimReport& r) {
  std::ostringstream s;
  s.precision(3);
  s << std::fixed << r.estimator_label << " l2=" << r.mean_l2 << " linf=" << r.mean_linf << " FP=" << r.mean_fp_pct
    << " FN=" << r.mean_fn_pct;
  if (r.failed_replications > 0) s << " failed=" << r.failed_replications;
  return s.str();
}

SimReport simulate(const std::string& table, const std::string& label) {
  const Scenario sc = builtin_scenario(table);
  for (const auto& c : reference_columns(table)) {
    if (c.label == label) {
      RunOptions opts;
      opts.threads = threads();
      return run_monte_carlo(sc, pipeline_for(c), c.lambda, c.alpha, kReps, sc.seed, opts);
    }
  }
  throw std::logic_error("no column " + label + " in " + table);
}

struct Verdict {
  bool ok;
  std::string detail;
};

Verdict criterion1() {
  const auto r = simulate("table1", "ALPH(LPH)");
  const bool ok = r.failed_replications == 0 && within(r.mean_l2, 0.83, 0.15) && within(r.mean_linf, 0.38, 0.10) &&
                  within(r.mean_fp_pct, 0.97, 1.5) && r.mean_fn_pct == 0.0;
  return {ok, describe(r)};
}

Verdict criterion2() {
  const auto l = simulate("table1", "L");
  const auto al = simulate("table1", "AL");
  const auto alph = simulate("table1", "ALPH(LPH)");
  const bool ok = within(l.mean_l2, 1.66, 0.20) && within(l.mean_fp_pct, 16.14, 4.0) && alph.mean_l2 < al.mean_l2 &&
                  al.mean_l2 < l.mean_l2;
  return {ok, describe(l) + "; " + describe(al) + "; " + describe(alph)};
}

Verdict criterion3() {
  const auto al = simulate("table2", "AL");
  const auto alph = simulate("table2", "ALPH(LH)");
  const bool ok = alph.failed_replications == 0 && alph.mean_l2 <= 0.5 && 3.0 * alph.mean_l2 <= al.mean_l2 &&
                  alph.mean_fn_pct == 0.0;
  return {ok, describe(alph) + "; " + describe(al) + "; ratio=" + fmt("%.2f", al.mean_l2 / alph.mean_l2)};
}

Verdict criterion4() {
  const auto r = simulate("table3", "ALPH(LPH)");
  return {r.failed_replications == 0 && within(r.mean_l2, 1.19, 0.20) && r.mean_fp_pct <= 3.5, describe(r)};
}

Verdict criterion5() {
  const auto r = simulate("table5", "ALPH(LPH)");
  return {r.failed_replications == 0 && within(r.mean_l2, 0.47, 0.12), describe(r)};
}

Verdict criterion6() {
  struct Part {
    const char* name;
    std::function<props::Outcome()> run;
  };
  const std::vector<Part> parts{
      {"a", [] { return props::loss_properties(10000, 11); }},
      {"b", [] { return props::solver_kkt(200, 12); }},
      {"c", [] { return props::small_alpha_matches_lasso(50, 13); }},
      {"d", [] { return props::qhat_weights_vs_quadrature(50, 14); }},
      {"e", [] { return props::pdw_implication(100, 15); }},
      {"f", [] { return props::variance_ratios(1000000, kVarianceSeed); }},
      {"g", [] { return props::skew_t_mean(1000000, 16); }},
  };
  bool all = true;
  std::string detail;
  for (const auto& p : parts) {
    const auto o = p.run();
    all = all && o.ok;
    std::printf("    6(%s) %s [%ld cases] %s\n", p.name, o.ok ? "pass" : "FAIL", o.cases, o.detail.c_str());
    std::fflush(stdout);
    if (!o.ok) detail += std::string(detail.empty() ? "failed:" : "") + " " + p.name;
  }
  return {all, all ? "all seven properties hold" : detail};
}

std::string slurp(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"robreg"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Verdict criterion7() {
  const fs::path dir = fs::temp_directory_path() / ("robreg_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const auto prefix = [&](const char* name) { return (dir / name).string(); };
  const std::vector<std::string> base{"simulate", "--scenario", "table3", "--estimator", "L;ALPH(LPH)",
                                      "--reps",   "12",         "--per-replication"};
  auto with = [&](std::initializer_list<std::string> extra) {
    auto a = base;
    a.insert(a.end(), extra);
    return a;
  };
  bool ok = run_cli(with({"--threads", "1", "--out", prefix("serial")})) == 0 &&
            run_cli(with({"--threads", "4", "--out", prefix("parallel")})) == 0 &&
            run_cli(with({"--threads", "1", "--out", prefix("repeat")})) == 0;
  long files = 0;
  for (const char* ext : {".json", ".txt", ".L.replications.csv", ".ALPH(LPH).replications.csv"}) {
    const std::string a = slurp(prefix("serial") + ext);
    ok = ok && !a.empty() && a == slurp(prefix("parallel") + ext) && a == slurp(prefix("repeat") + ext);
    ++files;
  }
  fs::remove_all(dir);
  return {ok, std::to_string(files) + " output files compared across threads=1, threads=4 and a repeat run"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"1 table1 ALPH(LPH) reproduction", criterion1},
      {"2 table1 L reproduction and ordering", criterion2},
      {"3 table2 ALPH(LH) improvement", criterion3},
      {"4 table3 ALPH(LPH) reproduction", criterion4},
      {"5 table5 ALPH(LPH) reproduction", criterion5},
      {"6 property suite", criterion6},
      {"7 determinism across thread counts", criterion7},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s: %s (%.1fs)\n", v.ok ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.ok) ++failed;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
