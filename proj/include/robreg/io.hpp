#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "robreg/diagnostics.hpp"
#include "robreg/estimators.hpp"
#include "robreg/simulation.hpp"

namespace robreg {

using nlohmann::json;

// CSV ------------------------------------------------------------------------

/// Reads a comma-separated file with a header row. The last column is the
/// response, all preceding columns are covariates. Quoted fields ("a,b",
/// doubled quotes) are accepted; embedded line breaks are not.
struct CsvTable {
  std::vector<std::string> header;
  Dataset data;
};

CsvTable read_csv_dataset(std::istream& in, const std::string& source = "<input>");
CsvTable read_csv_dataset_file(const std::string& path);

/// Splits one CSV record. Throws ParseError mentioning `line_no` on unbalanced quotes.
std::vector<std::string> split_csv_record(const std::string& line, long line_no);

// JSON -----------------------------------------------------------------------
// NaN and +inf are written as null. Where null appears in a weight vector it
// means +inf (frozen coordinate); elsewhere it means "undefined" (NaN).

json to_json(const FitResult& fit);
json to_json(const AdaptiveFitResult& fit);
json to_json(const PDWReport& rep);
json to_json(const SupportMetrics& m);
json to_json(const SimReport& rep);
json to_json(const Scenario& sc);
json to_json(const ErrorFamily& f);
json to_json(const PenaltyWeights& w);

PDWReport pdw_report_from_json(const json& j);
/// Validates every field and throws ConfigError listing all offending ones.
Scenario scenario_from_json(const json& j);
PenaltyWeights weights_from_json(const json& j);
Vector vector_from_json(const json& j, const std::string& what);

/// Stable text form (2-space indent, trailing newline).
std::string dump(const json& j);

// Tables and plots -----------------------------------------------------------

/// Aligned columns, one per report; rows lambda, alpha, l2 norm, linf norm,
/// FP in %, FN in %.
std::string format_table(const std::vector<SimReport>& reports, const std::string& caption = "");

/// One line per replication: replication,l2_error,linf_error,fp_pct,fn_pct,sign_consistent.
std::string per_replication_csv(const SimReport& rep);

/// alpha,lambda,mean_l2,mean_linf,mean_fp_pct,mean_fn_pct,replications,failed_replications.
std::string surface_csv(const GridResult& grid);

/// Mean l2 error against lambda (log axis), one polyline per alpha.
std::string surface_svg(const GridResult& grid, const std::string& title);

}  // namespace robreg
