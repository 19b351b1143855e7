#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qgraph/bounds.hpp"
#include "qgraph/metric_graph.hpp"
#include "qgraph/nonlinear_eigs.hpp"
#include "qgraph/vertex_conditions.hpp"

namespace qgraph {

/// A parsed problem: the metric graph plus assembled boundary conditions.
struct Problem {
  MetricGraph graph;
  BoundarySpec spec;
};

/// Parses the JSON problem description.  Schema errors raise InputError with
/// the JSON pointer of the offending field.  Complex matrix entries are
/// plain numbers or [re, im] pairs.
Problem parse_problem(const nlohmann::json& j);
Problem load_problem(const std::string& path);

struct ReportOptions {
  bool with_spectrum = true;
  bool with_fem = false;
  int fem_nodes = 1000;
  std::optional<double> fem_truncation;  // default: decay-based choice
  double tol_scale = 1.0;
  bool parallel = false;
};

/// One eigenvalue index: the bound set plus the oracle value when computed.
struct ReportRow {
  int index = 0;
  IndexBounds bounds;
  std::optional<double> kappa;
  std::optional<double> eigenvalue;  // -kappa^2
  std::optional<int> multiplicity;
  std::optional<double> residual;
};

struct Report {
  ValidationReport validation;
  int dimension = 0;
  int negative_count = -1;  // -1: not computed (validate/poincare views)
  bool exact = false;
  std::string note;
  std::vector<ReportRow> rows;
  std::optional<OptimalityCertificates> certificates;
  std::optional<CoarseBounds> coarse;
  std::optional<ThmInterval> growth_bound;
  // compact-graph section
  std::optional<int> zero_modes;
  std::optional<PoincareCheck> poincare;
  std::optional<double> poincare_constant;
  // FEM cross-check section
  std::vector<double> fem_negative;
};

/// Runs the full pipeline (validation, bounds, oracle, compact-graph
/// analysis, optional FEM) on a validated problem.
Report build_report(const Problem& problem, const ReportOptions& options);

std::string emit_table(const Report& report, bool color = false);
nlohmann::json emit_json(const Report& report);
std::string emit_csv(const Report& report);

/// Parsed numeric CSV, for round-trip checks; empty cells are nullopt.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;
};
CsvTable parse_csv(const std::string& text);

namespace cli {

/// Entry point of the command-line tool.  Exit codes: 0 success,
/// 1 file/schema error, 2 boundary conditions not self-adjoint,
/// 3 numerical failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cli

}  // namespace qgraph
