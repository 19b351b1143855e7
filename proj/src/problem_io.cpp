#include "qgraph/problem_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include <CLI11.hpp>

#include "qgraph/fem.hpp"
#include "qgraph/linalg.hpp"
#include "qgraph/spectral_core.hpp"

namespace qgraph {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw InputError("problem file " + path + ": " + what);
}

const json& member(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(path + "/" + key, "missing required field");
  return *it;
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

Complex get_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(path, "expected a number or an [re, im] pair");
}

Matrix get_matrix(const json& j, const std::string& path, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    fail(path, "expected a matrix with " + std::to_string(rows) + " rows");
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[r];
    const std::string row_path = path + "/" + std::to_string(r);
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      fail(row_path, "expected a row of " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c)
      m(r, c) = get_complex(row[c], row_path + "/" + std::to_string(c));
  }
  return m;
}

Matrix get_square_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty square matrix");
  return get_matrix(j, path, static_cast<int>(j.size()), static_cast<int>(j[0].size()));
}

MetricGraph parse_graph(const json& root) {
  const json& jg = member(root, "", "graph");
  const std::string path = "/graph";

  std::vector<std::string> vertices;
  const json& jv = member(jg, path, "vertices");
  if (!jv.is_array() || jv.empty()) fail(path + "/vertices", "expected a nonempty array");
  for (size_t i = 0; i < jv.size(); ++i)
    vertices.push_back(get_string(jv[i], path + "/vertices/" + std::to_string(i)));

  std::vector<InternalEdge> internals;
  if (jg.contains("internal_edges")) {
    const json& ji = jg["internal_edges"];
    if (!ji.is_array()) fail(path + "/internal_edges", "expected an array");
    for (size_t i = 0; i < ji.size(); ++i) {
      const std::string epath = path + "/internal_edges/" + std::to_string(i);
      InternalEdge e;
      e.id = ji[i].contains("id") ? get_string(ji[i]["id"], epath + "/id")
                                  : "i" + std::to_string(i);
      e.from = get_string(member(ji[i], epath, "from"), epath + "/from");
      e.to = get_string(member(ji[i], epath, "to"), epath + "/to");
      e.length = get_number(member(ji[i], epath, "length"), epath + "/length");
      if (!(e.length > 0.0) || !std::isfinite(e.length))
        fail(epath + "/length", "must be a positive finite number");
      internals.push_back(std::move(e));
    }
  }

  std::vector<ExternalEdge> externals;
  if (jg.contains("external_edges")) {
    const json& je = jg["external_edges"];
    if (!je.is_array()) fail(path + "/external_edges", "expected an array");
    for (size_t i = 0; i < je.size(); ++i) {
      const std::string epath = path + "/external_edges/" + std::to_string(i);
      ExternalEdge e;
      e.id = je[i].contains("id") ? get_string(je[i]["id"], epath + "/id")
                                  : "e" + std::to_string(i);
      e.at = get_string(member(je[i], epath, "at"), epath + "/at");
      externals.push_back(std::move(e));
    }
  }

  return MetricGraph(std::move(vertices), std::move(internals), std::move(externals));
}

VertexCondition parse_condition(const json& j, const std::string& path) {
  const std::string type = get_string(member(j, path, "type"), path + "/type");
  if (type == "dirichlet") return VertexCondition::dirichlet();
  if (type == "neumann") return VertexCondition::neumann();
  if (type == "kirchhoff") return VertexCondition::kirchhoff();
  if (type == "delta") {
    const double gamma =
        j.contains("gamma") ? get_number(j["gamma"], path + "/gamma") : 0.0;
    return VertexCondition::delta(gamma);
  }
  if (type == "delta_prime") {
    const double gamma = get_number(member(j, path, "gamma"), path + "/gamma");
    if (gamma == 0.0) fail(path + "/gamma", "delta_prime requires a nonzero gamma");
    return VertexCondition::delta_prime(gamma);
  }
  if (type == "custom") {
    const Matrix a = get_square_matrix(member(j, path, "A"), path + "/A");
    const Matrix b = get_square_matrix(member(j, path, "B"), path + "/B");
    if (a.rows() != b.rows()) fail(path, "custom blocks A and B must have equal size");
    return VertexCondition::custom(a, b);
  }
  fail(path + "/type",
       "unknown condition type '" + type +
           "' (expected dirichlet, neumann, kirchhoff, delta, delta_prime or custom)");
}

std::string fmt(double v, const char* spec = "%.10g") {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

std::string fmt17(double v) { return fmt(v, "%.17g"); }

std::string cell(const std::optional<double>& v, const char* spec = "%.10g") {
  return v ? fmt(*v, spec) : std::string("-");
}

void print_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (const auto& c : cells) {
    os.width(14);
    os << c;
  }
  os << '\n';
}

}  // namespace

Problem parse_problem(const json& j) {
  MetricGraph graph = parse_graph(j);
  const BoundaryLayout layout = boundary_layout(graph);

  const json& jc = member(j, "", "conditions");
  const std::string path = "/conditions";
  const std::string mode = get_string(member(jc, path, "mode"), path + "/mode");

  if (mode == "global") {
    const int d = layout.dimension;
    Matrix a = get_matrix(member(jc, path, "A"), path + "/A", d, d);
    Matrix b = get_matrix(member(jc, path, "B"), path + "/B", d, d);
    return {std::move(graph), make_spec(std::move(a), std::move(b), layout)};
  }
  if (mode == "vertex") {
    const json& jv = member(jc, path, "vertex");
    if (!jv.is_object()) fail(path + "/vertex", "expected an object keyed by vertex id");
    std::map<std::string, VertexCondition> conditions;
    for (const auto& [name, spec] : jv.items()) {
      graph.vertex_index(name);  // rejects unknown vertices
      conditions.emplace(name, parse_condition(spec, path + "/vertex/" + name));
    }
    BoundarySpec spec = assemble(graph, conditions);
    return {std::move(graph), std::move(spec)};
  }
  fail(path + "/mode", "expected \"vertex\" or \"global\"");
}

Problem load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw InputError("invalid JSON in '" + path + "': " + e.what());
  }
  return parse_problem(j);
}

Report build_report(const Problem& problem, const ReportOptions& options) {
  const Tolerances tol{options.tol_scale};
  Report report;
  report.dimension = problem.spec.dimension();
  report.validation = validate(problem.spec, tol);
  if (!report.validation.valid())
    throw NotSelfAdjointError(failure_message(report.validation, report.dimension));

  const CanonicalForm cf = canonical_form(problem.spec, tol);
  const BoundsReport bounds = combined(cf, problem.graph, tol);
  report.negative_count = bounds.negative_count;
  report.exact = bounds.exact;
  report.certificates = bounds.certificates;
  report.coarse = bounds.coarse;
  report.growth_bound = bounds.growth_bound;
  if (bounds.negative_count == 0) report.note = "operator is non-negative";

  std::vector<double> kappas;
  std::vector<int> mults;
  std::vector<double> residuals;
  if (options.with_spectrum && bounds.negative_count > 0) {
    const NegativeSpectrum spectrum =
        negative_spectrum(cf, problem.graph, tol, options.parallel);
    for (const auto& root : spectrum.roots)
      for (int c = 0; c < root.multiplicity; ++c) {
        kappas.push_back(root.kappa);
        mults.push_back(root.multiplicity);
        residuals.push_back(root.residual);
      }
  }
  for (int i = 0; i < bounds.negative_count; ++i) {
    ReportRow row;
    row.index = i + 1;
    row.bounds = bounds.rows[i];
    if (i < static_cast<int>(kappas.size())) {
      row.kappa = kappas[i];
      row.eigenvalue = -kappas[i] * kappas[i];
      row.multiplicity = mults[i];
      row.residual = residuals[i];
    }
    report.rows.push_back(row);
  }

  if (problem.graph.compact()) {
    report.zero_modes = zero_mode_dimension(cf, problem.graph, tol);
    report.poincare = poincare_criterion(cf.P, problem.graph, tol);
    if (options.with_fem && report.poincare->holds)
      report.poincare_constant =
          poincare_constant(problem.graph, cf.P, options.fem_nodes, tol);
  }

  if (options.with_fem && bounds.negative_count > 0) {
    const double truncation =
        problem.graph.compact()
            ? 0.0
            : options.fem_truncation.value_or(default_truncation(problem.graph, cf));
    const Discretization disc =
        discretize(problem.graph, cf, options.fem_nodes, truncation);
    report.fem_negative = fem_spectrum(disc, bounds.negative_count);
  }
  return report;
}

std::string emit_table(const Report& report, bool color) {
  std::ostringstream os;
  const char* green = color ? "\x1b[32m" : "";
  const char* red = color ? "\x1b[31m" : "";
  const char* reset = color ? "\x1b[0m" : "";

  os << "validation: "
     << (report.validation.valid() ? std::string(green) + "valid" + reset
                                   : std::string(red) + "invalid" + reset)
     << "  (rank (A B) = " << report.validation.rank_ab << "/" << report.dimension
     << ", sigma_d = " << fmt(report.validation.smallest_singular_value)
     << ", AB* residual = " << fmt(report.validation.hermiticity_residual) << ")\n";
  if (report.negative_count >= 0) {
    os << "negative eigenvalues: " << report.negative_count;
    if (report.exact) os << "  (star graph: bounds are exact)";
    os << '\n';
  }
  if (!report.note.empty()) os << "note: " << report.note << '\n';

  if (!report.rows.empty()) {
    print_row(os, {"index", "l", "m", "r", "thm1_lo", "thm1_hi", "thm2_lo", "thm2_hi", "thm3_lo",
                   "thm3_hi", "comb_lo", "comb_hi", "kappa", "eigenvalue"});
    for (const auto& row : report.rows) {
      const auto& b = row.bounds;
      print_row(os, {std::to_string(row.index), fmt(b.l), fmt(b.m), fmt(b.r), fmt(b.thm1.lower),
                     fmt(b.thm1.upper), cell(b.thm2.lower), fmt(b.thm2.upper), fmt(b.thm3.lower),
                     fmt(b.thm3.upper), fmt(b.combined.lower), fmt(b.combined.upper),
                     cell(row.kappa), cell(row.eigenvalue)});
    }
  }
  if (report.certificates) {
    os << "certificates: thm1 upper bound attained for kappa_1: "
       << (report.certificates->thm1 ? "yes" : "no") << " (cos "
       << fmt(report.certificates->thm1_cosine) << "), thm2: "
       << (report.certificates->thm2 ? "yes" : "no") << " (cos "
       << fmt(report.certificates->thm2_cosine) << ")\n";
  }
  if (report.coarse) {
    os << "coarse bounds: xi " << fmt(report.coarse->xi_bound);
    if (report.coarse->kuchment) os << ", kuchment " << fmt(*report.coarse->kuchment);
    os << '\n';
  }
  if (report.growth_bound)
    os << "growth bound: [" << fmt(report.growth_bound->lower) << ", "
       << fmt(report.growth_bound->upper) << "]\n";
  if (report.zero_modes)
    os << "zero modes: " << *report.zero_modes << '\n';
  if (report.poincare) {
    if (report.poincare->holds) {
      os << "poincare: criterion holds";
      if (report.poincare_constant) os << ", C = " << fmt(*report.poincare_constant);
      os << '\n';
    } else {
      os << "poincare: criterion fails, defect " << report.poincare->defect
         << " (zero mode present)\n";
    }
  }
  if (!report.fem_negative.empty()) {
    os << "fem negative eigenvalues:";
    for (double v : report.fem_negative) os << ' ' << fmt(v);
    os << '\n';
  }
  return os.str();
}

json emit_json(const Report& report) {
  json j;
  j["validation"] = {{"valid", report.validation.valid()},
                     {"surjective", report.validation.surjective},
                     {"ab_star_hermitian", report.validation.ab_star_hermitian},
                     {"rank_ab", report.validation.rank_ab},
                     {"sigma_d", report.validation.smallest_singular_value},
                     {"hermiticity_residual", report.validation.hermiticity_residual}};
  j["dimension"] = report.dimension;
  if (report.negative_count >= 0) {
    j["negative_count"] = report.negative_count;
    j["exact"] = report.exact;
  }
  if (!report.note.empty()) j["note"] = report.note;

  j["indices"] = json::array();
  for (const auto& row : report.rows) {
    const auto& b = row.bounds;
    json r = {{"index", row.index},
              {"l", b.l},
              {"m", b.m},
              {"r", b.r},
              {"thm1", {b.thm1.lower, b.thm1.upper}},
              {"thm2_upper", b.thm2.upper},
              {"thm3", {b.thm3.lower, b.thm3.upper}},
              {"combined", {b.combined.lower, b.combined.upper}}};
    r["thm2_lower"] = b.thm2.lower ? json(*b.thm2.lower) : json(nullptr);
    r["kappa"] = row.kappa ? json(*row.kappa) : json(nullptr);
    r["eigenvalue"] = row.eigenvalue ? json(*row.eigenvalue) : json(nullptr);
    r["multiplicity"] = row.multiplicity ? json(*row.multiplicity) : json(nullptr);
    r["residual"] = row.residual ? json(*row.residual) : json(nullptr);
    j["indices"].push_back(std::move(r));
  }
  if (report.certificates)
    j["certificates"] = {{"thm1", report.certificates->thm1},
                         {"thm1_cosine", report.certificates->thm1_cosine},
                         {"thm2", report.certificates->thm2},
                         {"thm2_cosine", report.certificates->thm2_cosine}};
  if (report.coarse) {
    j["coarse"] = {{"xi", report.coarse->xi_bound}};
    if (report.coarse->kuchment) j["coarse"]["kuchment"] = *report.coarse->kuchment;
  }
  if (report.growth_bound)
    j["growth_bound"] = {report.growth_bound->lower, report.growth_bound->upper};
  if (report.zero_modes) j["zero_modes"] = *report.zero_modes;
  if (report.poincare) {
    j["poincare"] = {{"holds", report.poincare->holds}, {"defect", report.poincare->defect}};
    if (report.poincare_constant) j["poincare"]["constant"] = *report.poincare_constant;
  }
  if (!report.fem_negative.empty()) j["fem_negative_eigenvalues"] = report.fem_negative;
  return j;
}

std::string emit_csv(const Report& report) {
  std::ostringstream os;
  os << "index,l,m,r,thm1_lo,thm1_hi,thm2_lo,thm2_hi,thm3_lo,thm3_hi,"
        "combined_lo,combined_hi,kappa_oracle,eigenvalue,exact\n";
  for (const auto& row : report.rows) {
    const auto& b = row.bounds;
    os << row.index << ',' << fmt17(b.l) << ',' << fmt17(b.m) << ',' << fmt17(b.r) << ','
       << fmt17(b.thm1.lower) << ',' << fmt17(b.thm1.upper) << ','
       << (b.thm2.lower ? fmt17(*b.thm2.lower) : "") << ',' << fmt17(b.thm2.upper) << ','
       << fmt17(b.thm3.lower) << ',' << fmt17(b.thm3.upper) << ',' << fmt17(b.combined.lower)
       << ',' << fmt17(b.combined.upper) << ',' << (row.kappa ? fmt17(*row.kappa) : "") << ','
       << (row.eigenvalue ? fmt17(*row.eigenvalue) : "") << ','
       << (report.exact ? "true" : "false") << '\n';
  }
  return os.str();
}

CsvTable parse_csv(const std::string& text) {
  CsvTable table;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cellbuf;
    std::istringstream ls(line);
    while (std::getline(ls, cellbuf, ',')) cells.push_back(cellbuf);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    if (first) {
      table.header = cells;
      first = false;
      continue;
    }
    std::vector<std::optional<double>> row;
    for (const auto& c : cells) {
      if (c.empty()) {
        row.push_back(std::nullopt);
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      if (end == c.c_str() + c.size())
        row.push_back(v);
      else
        row.push_back(std::nullopt);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace cli {

namespace {

struct Options {
  std::string input;
  std::string format = "table";
  double tol = 1.0;
  bool fem = false;
  int fem_n = 1000;
  double fem_truncation = 0.0;
  bool parallel = false;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--input", o.input, "problem description (JSON)")->required();
  sub->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember({"table", "json", "csv"}));
  sub->add_option("--tol", o.tol, "scale factor for the root/eigenvalue tolerances")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--fem", o.fem, "run the finite-element cross-check");
  sub->add_option("--fem-n", o.fem_n, "FEM nodes per unit length");
  sub->add_option("--fem-truncation", o.fem_truncation,
                  "truncation length for external edges (default: auto)");
  sub->add_flag("--parallel", o.parallel, "solve eigenvalue curves concurrently");
}

bool want_color(std::ostream& out) {
  return &out == &std::cout && isatty(fileno(stdout)) && std::getenv("NO_COLOR") == nullptr;
}

void print(std::ostream& out, const Report& report, const std::string& format, bool color) {
  if (format == "json")
    out << emit_json(report).dump(2) << '\n';
  else if (format == "csv")
    out << emit_csv(report);
  else
    out << emit_table(report, color);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"two-sided bounds and oracles for the negative spectrum of "
               "self-adjoint Laplacians on metric graphs"};
  app.require_subcommand(1);
  Options o;
  CLI::App* cmd_validate = app.add_subcommand("validate", "check self-adjointness of (A, B)");
  CLI::App* cmd_bounds = app.add_subcommand("bounds", "eigenvalue counts and two-sided bounds");
  CLI::App* cmd_spectrum = app.add_subcommand("spectrum", "negative eigenvalues via the nonlinear solver");
  CLI::App* cmd_poincare = app.add_subcommand("poincare", "Poincare criterion and constant (compact graphs)");
  CLI::App* cmd_report = app.add_subcommand("report", "everything the other subcommands produce");
  for (CLI::App* sub : {cmd_validate, cmd_bounds, cmd_spectrum, cmd_poincare, cmd_report})
    add_common(sub, o);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  const bool color = want_color(out);
  try {
    const Problem problem = load_problem(o.input);

    if (cmd_validate->parsed()) {
      const ValidationReport validation = validate(problem.spec, Tolerances{o.tol});
      Report report;
      report.dimension = problem.spec.dimension();
      report.validation = validation;
      report.negative_count = -1;  // not computed by this subcommand
      if (!validation.valid()) {
        err << failure_message(validation, report.dimension) << '\n';
        return 2;
      }
      report.note = "boundary conditions are self-adjoint";
      print(out, report, o.format, color);
      return 0;
    }

    ReportOptions ro;
    ro.with_fem = o.fem;
    ro.fem_nodes = o.fem_n;
    if (o.fem_truncation > 0.0) ro.fem_truncation = o.fem_truncation;
    ro.tol_scale = o.tol;
    ro.parallel = o.parallel;
    ro.with_spectrum = !cmd_bounds->parsed();

    if (cmd_poincare->parsed()) {
      if (!problem.graph.compact())
        throw InputError("poincare: the graph must be compact (no external edges)");
      const Tolerances tol{o.tol};
      const CanonicalForm cf = canonical_form(problem.spec, tol);
      Report report;
      report.dimension = problem.spec.dimension();
      report.validation = validate(problem.spec, tol);
      report.negative_count = -1;  // not computed by this subcommand
      report.zero_modes = zero_mode_dimension(cf, problem.graph, tol);
      report.poincare = poincare_criterion(cf.P, problem.graph, tol);
      if (report.poincare->holds)
        report.poincare_constant =
            qgraph::poincare_constant(problem.graph, cf.P, o.fem_n, tol);
      print(out, report, o.format, color);
      return 0;
    }

    const Report report = build_report(problem, ro);
    print(out, report, o.format, color);
    return 0;
  } catch (const NotSelfAdjointError& e) {
    err << e.what() << '\n';
    return 2;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace cli

}  // namespace qgraph
