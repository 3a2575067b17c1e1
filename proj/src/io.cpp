#include "robreg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "robreg/error.hpp"

namespace robreg {
namespace {

json number_or_null(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

double number_from(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k) a.push_back(number_or_null(v[k]));
  return a;
}

json index_json(const std::vector<Eigen::Index>& s) {
  json a = json::array();
  for (auto k : s) a.push_back(static_cast<long long>(k));
  return a;
}

std::string format_number(double v, int decimals) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

// Shortest representation with up to 4 significant digits for tuning parameters.
std::string format_param(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

// CSV --------------------------------------------------------------------------

std::vector<std::string> split_csv_record(const std::string& line, long line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      if (!cur.empty() || was_quoted) {
        throw ParseError("line " + std::to_string(line_no) + ": stray quote inside field");
      }
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      if (was_quoted) {
        throw ParseError("line " + std::to_string(line_no) + ": text after closing quote");
      }
      cur.push_back(c);
    }
  }
  if (quoted) throw ParseError("line " + std::to_string(line_no) + ": unterminated quoted field");
  fields.push_back(std::move(cur));
  return fields;
}

CsvTable read_csv_dataset(std::istream& in, const std::string& source) {
  std::string line;
  long line_no = 0;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto fields = split_csv_record(line, line_no);
    if (header.empty()) {
      header = std::move(fields);
      if (header.size() < 2) {
        throw ParseError(source + ": line " + std::to_string(line_no) +
                         ": need at least one covariate column and a response column");
      }
      continue;
    }
    if (fields.size() != header.size()) {
      throw ParseError(source + ": line " + std::to_string(line_no) + ": expected " +
                       std::to_string(header.size()) + " fields, found " +
                       std::to_string(fields.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const std::string& f = fields[c];
      const auto first = f.find_first_not_of(" \t");
      const auto last = f.find_last_not_of(" \t");
      const std::string cell = first == std::string::npos ? "" : f.substr(first, last - first + 1);
      double v = 0.0;
      std::size_t used = 0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (cell.empty() || used != cell.size() || !std::isfinite(v)) {
        throw ParseError(source + ": line " + std::to_string(line_no) + ", column '" + header[c] +
                         "': not a finite number: '" + cell + "'");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  if (header.empty()) throw ParseError(source + ": missing header row");
  if (rows.empty()) throw ParseError(source + ": no data rows");
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(header.size() - 1);
  Matrix x(n, p);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) x(i, j) = rows[i][j];
    y[i] = rows[i][p];
  }
  return CsvTable{std::move(header), Dataset(std::move(x), std::move(y))};
}

CsvTable read_csv_dataset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return read_csv_dataset(in, path);
}

// JSON -------------------------------------------------------------------------

json to_json(const FitResult& fit) {
  return json{{"beta", vector_json(fit.beta)},
              {"support", index_json(fit.support)},
              {"objective", number_or_null(fit.objective)},
              {"sweeps_used", fit.sweeps_used},
              {"kkt_residual", number_or_null(fit.kkt_residual)},
              {"converged", fit.converged},
              {"ball_constraint_active", fit.ball_constraint_active},
              {"zero_columns", index_json(fit.zero_columns)}};
}

json to_json(const PenaltyWeights& w) { return vector_json(w.w); }

json to_json(const AdaptiveFitResult& fit) {
  return json{{"initial", to_json(fit.initial)},
              {"weights", to_json(fit.weights)},
              {"s_bar", index_json(fit.s_bar)},
              {"lambda_init", fit.lambda_init},
              {"lambda_adaptive", fit.lambda_adaptive},
              {"alpha", fit.alpha},
              {"final", to_json(fit.final)},
              {"empty_s_bar", fit.empty_s_bar}};
}

json to_json(const PDWReport& rep) {
  return json{{"restricted_beta", vector_json(rep.restricted_beta)},
              {"gamma", vector_json(rep.gamma)},
              {"dual_feasibility_margin", number_or_null(rep.dual_feasibility_margin)},
              {"full_matches_restricted", rep.full_matches_restricted},
              {"incoherence", number_or_null(rep.incoherence)},
              {"min_eig_SS", number_or_null(rep.min_eig_SS)}};
}

PDWReport pdw_report_from_json(const json& j) {
  PDWReport rep;
  try {
    rep.restricted_beta = vector_from_json(j.at("restricted_beta"), "restricted_beta");
    rep.gamma = vector_from_json(j.at("gamma"), "gamma");
    rep.dual_feasibility_margin = number_from(j.at("dual_feasibility_margin"));
    rep.full_matches_restricted = j.at("full_matches_restricted").get<bool>();
    rep.incoherence = number_from(j.at("incoherence"));
    rep.min_eig_SS = number_from(j.at("min_eig_SS"));
  } catch (const json::exception& e) {
    throw ParseError(std::string("PDW report: ") + e.what());
  }
  return rep;
}

json to_json(const SupportMetrics& m) {
  return json{{"l2_error", m.l2_error},         {"linf_error", m.linf_error},
              {"fp_pct", m.fp_pct},             {"fn_pct", m.fn_pct},
              {"sign_consistent", m.sign_consistent}};
}

json to_json(const SimReport& rep) {
  return json{{"estimator_label", rep.estimator_label},
              {"lambda", rep.lambda},
              {"alpha", rep.alpha ? json(*rep.alpha) : json(nullptr)},
              {"mean_l2", number_or_null(rep.mean_l2)},
              {"mean_linf", number_or_null(rep.mean_linf)},
              {"mean_fp_pct", number_or_null(rep.mean_fp_pct)},
              {"mean_fn_pct", number_or_null(rep.mean_fn_pct)},
              {"replications", rep.replications},
              {"seed", rep.seed},
              {"failed_replications", rep.failed_replications}};
}

json to_json(const ErrorFamily& f) {
  switch (f.kind) {
    case ErrorFamily::Kind::Normal: return json{{"kind", "normal"}, {"var", f.var}};
    case ErrorFamily::Kind::StudentT:
      return json{{"kind", "student_t"}, {"df", f.df}, {"scale", f.scale}};
    case ErrorFamily::Kind::SkewT:
      return json{{"kind", "skew_t"}, {"loc", f.loc}, {"scale", f.scale}, {"shape", f.shape},
                  {"df", f.df}};
  }
  return json{};
}

json to_json(const Scenario& sc) {
  return json{{"name", sc.name},
              {"n", sc.n},
              {"p", sc.p},
              {"beta_star", vector_json(sc.beta_star)},
              {"error_family", to_json(sc.error_family)},
              {"heteroscedastic", sc.heteroscedastic},
              {"seed", sc.seed}};
}

Vector vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw ParseError(what + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t k = 0; k < j.size(); ++k) {
    if (j[k].is_null()) {
      v[static_cast<Eigen::Index>(k)] = std::numeric_limits<double>::quiet_NaN();
    } else if (j[k].is_number()) {
      v[static_cast<Eigen::Index>(k)] = j[k].get<double>();
    } else {
      throw ParseError(what + ": entry " + std::to_string(k) + " is not a number");
    }
  }
  return v;
}

PenaltyWeights weights_from_json(const json& j) {
  Vector w = vector_from_json(j, "weights");
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (std::isnan(w[k])) w[k] = kInf;
  }
  return PenaltyWeights{std::move(w)};
}

Scenario scenario_from_json(const json& j) {
  std::vector<std::string> problems;
  Scenario sc;
  if (!j.is_object()) throw ConfigError("scenario: expected a JSON object");

  auto get_int = [&](const char* key, long& out, long min) {
    if (!j.contains(key)) return problems.push_back(std::string(key) + ": missing");
    if (!j[key].is_number_integer() || j[key].get<long>() < min) {
      return problems.push_back(std::string(key) + ": must be an integer >= " + std::to_string(min));
    }
    out = j[key].get<long>();
  };
  if (j.contains("name")) {
    if (j["name"].is_string()) {
      sc.name = j["name"].get<std::string>();
    } else {
      problems.push_back("name: must be a string");
    }
  }
  get_int("n", sc.n, 1);
  get_int("p", sc.p, 1);
  if (!j.contains("beta_star")) {
    problems.push_back("beta_star: missing");
  } else {
    try {
      sc.beta_star = vector_from_json(j["beta_star"], "beta_star");
      if (!sc.beta_star.allFinite()) problems.push_back("beta_star: entries must be finite numbers");
      if (sc.beta_star.size() != sc.p) {
        problems.push_back("beta_star: length " + std::to_string(sc.beta_star.size()) +
                           " does not match p");
      }
    } catch (const ParseError& e) {
      problems.push_back(e.what());
    }
  }
  if (!j.contains("heteroscedastic") || !j["heteroscedastic"].is_boolean()) {
    problems.push_back("heteroscedastic: missing or not a boolean");
  } else {
    sc.heteroscedastic = j["heteroscedastic"].get<bool>();
  }
  if (!j.contains("seed") || !j["seed"].is_number_integer() ||
      (j["seed"].is_number_integer() && !j["seed"].is_number_unsigned() && j["seed"].get<long long>() < 0)) {
    problems.push_back("seed: missing or not a non-negative integer");
  } else {
    sc.seed = j["seed"].get<std::uint64_t>();
  }
  if (!j.contains("error_family") || !j["error_family"].is_object()) {
    problems.push_back("error_family: missing or not an object");
  } else {
    const json& f = j["error_family"];
    auto num = [&](const char* key, double& out) {
      if (!f.contains(key) || !f[key].is_number()) {
        problems.push_back(std::string("error_family.") + key + ": missing or not a number");
      } else {
        out = f[key].get<double>();
      }
    };
    const std::string kind = f.value("kind", std::string{});
    if (kind == "normal") {
      sc.error_family.kind = ErrorFamily::Kind::Normal;
      num("var", sc.error_family.var);
    } else if (kind == "student_t") {
      sc.error_family.kind = ErrorFamily::Kind::StudentT;
      num("df", sc.error_family.df);
      num("scale", sc.error_family.scale);
    } else if (kind == "skew_t") {
      sc.error_family.kind = ErrorFamily::Kind::SkewT;
      num("loc", sc.error_family.loc);
      num("scale", sc.error_family.scale);
      num("shape", sc.error_family.shape);
      num("df", sc.error_family.df);
    } else {
      problems.push_back("error_family.kind: expected normal, student_t or skew_t");
    }
    const ErrorFamily& ef = sc.error_family;
    if (kind == "normal" && !(ef.var > 0.0 && std::isfinite(ef.var))) {
      problems.push_back("error_family.var: must be positive");
    }
    if ((kind == "student_t" || kind == "skew_t") && !(ef.df > 2.0 && std::isfinite(ef.df))) {
      problems.push_back("error_family.df: must be > 2 for a finite variance");
    }
    if ((kind == "student_t" || kind == "skew_t") && !(ef.scale > 0.0 && std::isfinite(ef.scale))) {
      problems.push_back("error_family.scale: must be positive");
    }
    if (kind == "skew_t" && !(std::isfinite(ef.loc) && std::isfinite(ef.shape))) {
      problems.push_back("error_family: loc and shape must be finite");
    }
  }
  if (problems.empty() && sc.heteroscedastic && sc.beta_star.squaredNorm() == 0.0) {
    problems.push_back("heteroscedastic: requires a nonzero beta_star");
  }
  if (!problems.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  return sc;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// Tables and plots -------------------------------------------------------------

std::string format_table(const std::vector<SimReport>& reports, const std::string& caption) {
  std::vector<std::string> labels = {"", "lambda", "alpha", "l2 norm", "linf norm", "FP in %",
                                     "FN in %"};
  std::vector<std::vector<std::string>> cols;
  cols.push_back(labels);
  for (const auto& r : reports) {
    cols.push_back({r.estimator_label, format_param(r.lambda),
                    r.alpha ? format_param(*r.alpha) : std::string{},
                    format_number(r.mean_l2, 2), format_number(r.mean_linf, 2),
                    format_number(r.mean_fp_pct, 2), format_number(r.mean_fn_pct, 2)});
  }
  std::vector<std::size_t> width;
  for (const auto& c : cols) {
    std::size_t w = 0;
    for (const auto& cell : c) w = std::max(w, cell.size());
    width.push_back(w);
  }
  std::ostringstream out;
  if (!caption.empty()) out << caption << "\n";
  for (std::size_t row = 0; row < labels.size(); ++row) {
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (c == 0) {
        out << std::left << std::setw(static_cast<int>(width[c])) << cols[c][row];
      } else {
        out << "  " << std::right << std::setw(static_cast<int>(width[c])) << cols[c][row];
      }
    }
    out << "\n";
    if (row == 0) {
      std::size_t total = width[0];
      for (std::size_t c = 1; c < cols.size(); ++c) total += 2 + width[c];
      out << std::string(total, '-') << "\n";
    }
  }
  return out.str();
}

std::string per_replication_csv(const SimReport& rep) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "replication,l2_error,linf_error,fp_pct,fn_pct,sign_consistent\n";
  for (std::size_t r = 0; r < rep.per_replication.size(); ++r) {
    const auto& m = rep.per_replication[r];
    out << r << ',' << m.l2_error << ',' << m.linf_error << ',' << m.fp_pct << ',' << m.fn_pct << ','
        << (m.sign_consistent ? 1 : 0) << "\n";
  }
  return out.str();
}

std::string surface_csv(const GridResult& grid) {
  std::ostringstream out;
  out << std::setprecision(17);
  out << "alpha,lambda,mean_l2,mean_linf,mean_fp_pct,mean_fn_pct,replications,failed_replications\n";
  for (const auto& g : grid.surface) {
    if (std::isnan(g.alpha)) {
      out << "";
    } else {
      out << g.alpha;
    }
    out << ',' << g.lambda << ',' << g.report.mean_l2 << ',' << g.report.mean_linf << ','
        << g.report.mean_fp_pct << ',' << g.report.mean_fn_pct << ',' << g.report.replications << ','
        << g.report.failed_replications << "\n";
  }
  return out.str();
}

std::string surface_svg(const GridResult& grid, const std::string& title) {
  constexpr double kW = 640, kH = 420, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
  double lmin = kInf, lmax = -kInf, emin = kInf, emax = -kInf;
  for (const auto& g : grid.surface) {
    if (g.report.replications == 0 || !(g.lambda > 0.0)) continue;
    lmin = std::min(lmin, std::log10(g.lambda));
    lmax = std::max(lmax, std::log10(g.lambda));
    emin = std::min(emin, g.report.mean_l2);
    emax = std::max(emax, g.report.mean_l2);
  }
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title << "</text>\n";
  if (!std::isfinite(lmin)) {
    out << "</svg>\n";
    return out.str();
  }
  if (lmax == lmin) lmax = lmin + 1.0;
  if (emax == emin) emax = emin + 1.0;
  auto sx = [&](double l) { return kLeft + (std::log10(l) - lmin) / (lmax - lmin) * (kW - kLeft - kRight); };
  auto sy = [&](double e) { return kH - kBottom - (e - emin) / (emax - emin) * (kH - kTop - kBottom); };
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kH - kBottom << "\" x2=\"" << kW - kRight
      << "\" y2=\"" << kH - kBottom << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kH - kBottom << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"" << kH - 12 << "\" text-anchor=\"middle\">lambda (log scale)</text>\n";
  out << "<text x=\"15\" y=\"" << kH / 2 << "\" transform=\"rotate(-90 15 " << kH / 2
      << ")\" text-anchor=\"middle\">mean l2 error</text>\n";
  char buf[64];
  for (int t = 0; t <= 4; ++t) {
    const double l = lmin + (lmax - lmin) * t / 4.0;
    std::snprintf(buf, sizeof buf, "%.3g", std::pow(10.0, l));
    out << "<text x=\"" << sx(std::pow(10.0, l)) << "\" y=\"" << kH - kBottom + 16
        << "\" text-anchor=\"middle\">" << buf << "</text>\n";
    const double e = emin + (emax - emin) * t / 4.0;
    std::snprintf(buf, sizeof buf, "%.3g", e);
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << sy(e) + 4 << "\" text-anchor=\"end\">" << buf
        << "</text>\n";
  }
  static const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::vector<double> alphas;
  for (const auto& g : grid.surface) {
    const bool seen = std::any_of(alphas.begin(), alphas.end(), [&](double a) {
      return a == g.alpha || (std::isnan(a) && std::isnan(g.alpha));
    });
    if (!seen) alphas.push_back(g.alpha);
  }
  for (std::size_t ai = 0; ai < alphas.size(); ++ai) {
    out << "<polyline fill=\"none\" stroke=\"" << kColors[ai % 10] << "\" points=\"";
    for (const auto& g : grid.surface) {
      const bool same = g.alpha == alphas[ai] || (std::isnan(g.alpha) && std::isnan(alphas[ai]));
      if (!same || g.report.replications == 0 || !(g.lambda > 0.0)) continue;
      out << sx(g.lambda) << ',' << sy(g.report.mean_l2) << ' ';
    }
    out << "\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace robreg
