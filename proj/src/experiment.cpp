#include "perron/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

#include "perron/errors.hpp"
#include "perron/vec.hpp"

namespace perron {
namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
// Continuum principal eigenvalue of the inverse Dirichlet Laplacian on the
// unit square: 1 / (2 pi^2).
const double kUnitSquareLimit = 1.0 / (2.0 * kPi * kPi);

std::string fmt6(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// Built-in grids always have integral 1/h; "1/N" reads better in tables.
std::string fmt_h(double h) {
  const double inv = 1.0 / h;
  const long long n = std::llround(inv);
  if (n >= 1 && std::fabs(n * h - 1.0) <= 1e-9) return "1/" + std::to_string(n);
  return fmt6(h);
}

int parse_positive_int(const std::string& s, const char* what) {
  std::istringstream ss(s);
  long long n = 0;
  std::string extra;
  if (!(ss >> n) || (ss >> extra) || n < 1 || n > 1000000000)
    throw InvalidArgumentError(std::string(what) + " must be a positive integer, got '" + s + "'");
  return static_cast<int>(n);
}

double parse_spacing(const std::string& s) {
  const auto slash = s.find('/');
  if (slash != std::string::npos) {
    const int num = parse_positive_int(s.substr(0, slash), "spacing numerator");
    const int den = parse_positive_int(s.substr(slash + 1), "spacing denominator");
    return static_cast<double>(num) / den;
  }
  std::istringstream ss(s);
  double h = 0.0;
  std::string extra;
  if (!(ss >> h) || (ss >> extra) || !(h > 0.0))
    throw InvalidArgumentError("grid spacing must be positive, got '" + s + "'");
  return h;
}

std::vector<double> load_vector_text(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open start-vector file: " + path, 0);
  std::vector<double> v;
  double x;
  while (in >> x) v.push_back(x);
  if (!in.eof())
    throw ParseError("unreadable number in start-vector file: " + path, 0);
  require_dimension(v.size(), static_cast<std::size_t>(dim), "start vector");
  return v;
}

// Per-kind defaults for fields the caller left unset.
ExperimentSpec resolve(const ExperimentSpec& given, bool grid, double grid_h) {
  ExperimentSpec spec = given;
  if (!spec.criterion_set) {
    switch (spec.algo) {
      case AlgorithmKind::CW:
        spec.criterion = grid ? StoppingKind::SC2SolveRatioGap : StoppingKind::LambdaDiff;
        break;
      case AlgorithmKind::Rayleigh:
        spec.criterion = StoppingKind::LambdaDiff;
        break;
      default:
        spec.criterion = StoppingKind::SC1RatioGap;
        break;
    }
  }
  if (!spec.update_set) spec.update = grid ? ShiftUpdate::MuInf : ShiftUpdate::SupRatio;
  if (!spec.v0_set) spec.v0 = grid ? V0Kind::TOne : V0Kind::Ones;
  if (spec.epsilon_quick) {
    if (!grid)
      throw InvalidArgumentError("the quick tolerance h^2/10 applies to grid problems only");
    spec.epsilon = grid_h * grid_h / 10.0;
  }
  if (spec.v0 == V0Kind::TOne && !grid)
    throw InvalidArgumentError("v0 = t-one applies to grid problems only");
  if (spec.algo == AlgorithmKind::FixedShift && !spec.shift_set)
    throw InvalidArgumentError("fixed-shift runs need a shift value");
  if (spec.shift_set && spec.algo != AlgorithmKind::FixedShift)
    throw InvalidArgumentError("a shift value applies to fixed-shift runs only");
  return spec;
}

struct TextTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string render(const TextTable& t, ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      out << (c ? "," : "") << t.columns[c];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
      out << '\n';
    }
  } else if (format == ReportFormat::Markdown) {
    out << "# " << t.name << "\n\n|";
    for (const auto& c : t.columns) out << ' ' << c << " |";
    out << "\n|";
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << "---|";
    out << '\n';
    for (const auto& row : t.rows) {
      out << '|';
      for (const auto& cell : row) out << ' ' << (cell.empty() ? " " : cell) << " |";
      out << '\n';
    }
  } else {
    out << "{\n  \"table\": \"" << t.name << "\",\n  \"columns\": [";
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      out << (c ? ", " : "") << '"' << t.columns[c] << '"';
    out << "],\n  \"rows\": [";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      out << (r ? ",\n    [" : "\n    [");
      for (std::size_t c = 0; c < t.rows[r].size(); ++c)
        out << (c ? ", " : "") << '"' << t.rows[r][c] << '"';
      out << ']';
    }
    out << (t.rows.empty() ? "]" : "\n  ]");
    out << "\n}\n";
  }
  return out.str();
}

std::string order_text(const OrderEstimate& ord, std::size_t row) {
  if (row == 0 || row - 1 >= ord.alpha.size() || !ord.alpha[row - 1]) return "";
  return fmt6(*ord.alpha[row - 1]);
}

SolverConfig table_cw_config(bool grid, double epsilon) {
  SolverConfig c;
  c.stopping.kind = grid ? StoppingKind::SC2SolveRatioGap : StoppingKind::LambdaDiff;
  c.stopping.epsilon = epsilon;
  c.stopping.max_iters = 200;
  c.update = grid ? ShiftUpdate::MuInf : ShiftUpdate::SupRatio;
  return c;
}

void append_matrix_block(TextTable& t, const std::string& tag,
                         const PositiveLinearOperator& op, bool self_reference) {
  const std::vector<double> ones(op.dimension(), 1.0);
  ConvergenceReport rep = variable_lambda_power(op, ones, table_cw_config(false, 1e-14));
  const double ref = self_reference ? rep.final_lambda : reference_eigenpair(op).first;
  attach_reference_errors(rep, ref, ErrorMode::Relative);
  const OrderEstimate ord = report_orders(rep);
  for (std::size_t j = 0; j < rep.steps.size(); ++j) {
    const StepRecord& s = rep.steps[j];
    t.rows.push_back({tag, std::to_string(s.n), fmt6(s.lambda),
                      s.error ? fmt6(*s.error) : "", order_text(ord, j),
                      s.criterion ? fmt6(*s.criterion) : "",
                      s.sc1_gap ? fmt6(*s.sc1_gap) : ""});
  }
}

std::string table_matrix(std::uint64_t seed, ReportFormat format) {
  TextTable t;
  t.name = "matrix";
  t.columns = {"problem", "n", "lambda", "error", "order", "dlambda", "sc1"};
  append_matrix_block(t, "hilbert:1000", hilbert_matrix(1000), false);
  append_matrix_block(t, "tridiagonal:1000",
                      random_tridiagonal(1000, seed), true);
  return render(t, format);
}

const double kMeshSweep[] = {1.0 / 4, 1.0 / 6, 1.0 / 10, 1.0 / 16, 1.0 / 25, 1.0 / 50};

std::string table_mesh_error(ReportFormat format) {
  TextTable t;
  t.name = "mesh-error";
  t.columns = {"h", "lambda_h", "error", "order"};
  std::vector<std::pair<double, double>> pairs;
  for (double h : kMeshSweep) {
    const PositiveLinearOperator op = inverse_laplacian(unit_square(h));
    pairs.emplace_back(h, reference_eigenpair(op).first);
  }
  const std::vector<double> alpha = mesh_order(kUnitSquareLimit, pairs);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    t.rows.push_back({fmt_h(pairs[k].first), fmt6(pairs[k].second),
                      fmt6(std::fabs(kUnitSquareLimit - pairs[k].second)),
                      k ? fmt6(alpha[k - 1]) : ""});
  }
  return render(t, format);
}

std::string table_step_counts(ReportFormat format) {
  TextTable t;
  t.name = "step-counts";
  t.columns = {"h", "mode", "eps", "iters", "error", "criterion"};
  for (double h : kMeshSweep) {
    const PositiveLinearOperator op = inverse_laplacian(unit_square(h));
    const double ref = reference_eigenpair(op).first;
    const std::vector<double> v0 = perron::apply(op, std::vector<double>(op.dimension(), 1.0));
    const double quick = h * h / 10.0;
    for (int mode = 0; mode < 2; ++mode) {
      const double eps = mode ? quick : 1e-14;
      ConvergenceReport rep = variable_lambda_power(op, v0, table_cw_config(true, eps));
      const StepRecord& last = rep.steps.back();
      t.rows.push_back({fmt_h(h), mode ? "quick" : "fixed", fmt6(eps),
                        std::to_string(rep.steps.size()),
                        fmt6(std::fabs(rep.final_lambda - ref)),
                        last.criterion ? fmt6(*last.criterion) : ""});
    }
  }
  return render(t, format);
}

std::string table_grid_order(ReportFormat format) {
  TextTable t;
  t.name = "grid-order";
  t.columns = {"h", "n", "lambda", "error", "order"};
  for (double h : {1.0 / 6, 1.0 / 16, 1.0 / 50}) {
    const PositiveLinearOperator op = inverse_laplacian(unit_square(h));
    const double ref = reference_eigenpair(op).first;
    const std::vector<double> v0 = perron::apply(op, std::vector<double>(op.dimension(), 1.0));
    ConvergenceReport rep = variable_lambda_power(op, v0, table_cw_config(true, 1e-14));
    attach_reference_errors(rep, ref, ErrorMode::Absolute);
    const OrderEstimate ord = report_orders(rep);
    for (std::size_t j = 0; j < rep.steps.size(); ++j) {
      const StepRecord& s = rep.steps[j];
      t.rows.push_back({fmt_h(h), std::to_string(s.n), fmt6(s.lambda),
                        s.error ? fmt6(*s.error) : "", order_text(ord, j)});
    }
  }
  return render(t, format);
}

std::string table_rayleigh_compare(ReportFormat format) {
  TextTable t;
  t.name = "rayleigh-compare";
  t.columns = {"h", "algo", "n", "lambda", "error", "order"};
  for (double h : {1.0 / 10, 1.0 / 16}) {
    const PositiveLinearOperator op = inverse_laplacian(unit_square(h));
    const double ref = reference_eigenpair(op).first;
    const std::vector<double> v0 = perron::apply(op, std::vector<double>(op.dimension(), 1.0));

    ConvergenceReport cw = variable_lambda_power(op, v0, table_cw_config(true, 1e-14));
    attach_reference_errors(cw, ref, ErrorMode::Absolute);
    StoppingRule rl{StoppingKind::LambdaDiff, 1e-12, 200};
    ConvergenceReport rq = rayleigh_quotient_iteration(op, v0, rl);
    attach_reference_errors(rq, ref, ErrorMode::Absolute);

    for (const auto* rep : {&cw, &rq}) {
      const OrderEstimate ord = report_orders(*rep);
      const char* algo = (rep == &cw) ? "cw" : "rayleigh";
      for (std::size_t j = 0; j < rep->steps.size(); ++j) {
        const StepRecord& s = rep->steps[j];
        t.rows.push_back({fmt_h(h), algo, std::to_string(s.n), fmt6(s.lambda),
                          s.error ? fmt6(*s.error) : "", order_text(ord, j)});
      }
    }
  }
  return render(t, format);
}

}  // namespace

ProblemSpec parse_problem(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos || colon + 1 >= text.size())
    throw InvalidArgumentError(
        "problem must be kind:argument (hilbert:N, tridiagonal:N, "
        "matrix-file:PATH, unit-square:H, l-shape:H, mask-file:PATH), got '" +
        text + "'");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  ProblemSpec p;
  if (kind == "hilbert") {
    p.kind = ProblemKind::Hilbert;
    p.n = parse_positive_int(arg, "hilbert dimension");
  } else if (kind == "tridiagonal") {
    p.kind = ProblemKind::Tridiagonal;
    p.n = parse_positive_int(arg, "tridiagonal dimension");
  } else if (kind == "matrix-file") {
    p.kind = ProblemKind::MatrixFile;
    p.path = arg;
  } else if (kind == "unit-square") {
    p.kind = ProblemKind::UnitSquare;
    p.h = parse_spacing(arg);
  } else if (kind == "l-shape") {
    p.kind = ProblemKind::LShape;
    p.h = parse_spacing(arg);
  } else if (kind == "mask-file") {
    p.kind = ProblemKind::MaskFile;
    p.path = arg;
  } else {
    throw InvalidArgumentError("unknown problem kind '" + kind + "'");
  }
  return p;
}

PositiveLinearOperator build_operator(const ProblemSpec& p, std::uint64_t seed) {
  switch (p.kind) {
    case ProblemKind::Hilbert: return hilbert_matrix(p.n);
    case ProblemKind::Tridiagonal: return random_tridiagonal(p.n, seed);
    case ProblemKind::MatrixFile: return load_dense_text(p.path);
    case ProblemKind::UnitSquare: return inverse_laplacian(unit_square(p.h));
    case ProblemKind::LShape: return inverse_laplacian(l_shape(p.h));
    default: return inverse_laplacian(load_mask(p.path));
  }
}

std::vector<double> build_v0(const ExperimentSpec& spec,
                             const PositiveLinearOperator& op) {
  const int dim = op.dimension();
  switch (spec.v0) {
    case V0Kind::Ones: return std::vector<double>(dim, 1.0);
    case V0Kind::TOne: return perron::apply(op, std::vector<double>(dim, 1.0));
    default: return load_vector_text(spec.v0_path, dim);
  }
}

RunOutcome run_experiment(const ExperimentSpec& given) {
  const PositiveLinearOperator op = build_operator(given.problem, given.seed);
  const bool grid = given.problem.is_grid();
  const double grid_h = grid ? op.inverse_laplacian().domain().h() : 0.0;
  const ExperimentSpec spec = resolve(given, grid, grid_h);

  const std::vector<double> v0 = build_v0(spec, op);
  const StoppingRule rule{spec.criterion, spec.epsilon, spec.max_iters};

  const auto t0 = std::chrono::steady_clock::now();
  ConvergenceReport rep;
  switch (spec.algo) {
    case AlgorithmKind::CW: {
      SolverConfig config{rule, spec.update, true};
      rep = variable_lambda_power(op, v0, config);
      break;
    }
    case AlgorithmKind::Rayleigh:
      rep = rayleigh_quotient_iteration(op, v0, rule);
      break;
    case AlgorithmKind::Power:
      rep = plain_power(op, v0, rule);
      break;
    default:
      rep = fixed_shift_power(op, v0, spec.shift, rule);
      break;
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  RunOutcome out;
  if (spec.problem.kind != ProblemKind::Tridiagonal) {
    try {
      const double ref = reference_eigenpair(op).first;
      attach_reference_errors(rep, ref,
                              grid ? ErrorMode::Absolute : ErrorMode::Relative);
    } catch (const NoConvergenceError&) {
      // no reference, no error column
    }
  }
  out.report = std::move(rep);
  out.orders = report_orders(out.report);
  out.text = emit_report(out.report, out.orders, spec.output);
  out.exit_code = out.report.converged() ? 0 : 2;
  return out;
}

std::string bounds_line(const ExperimentSpec& given) {
  const PositiveLinearOperator op = build_operator(given.problem, given.seed);
  const bool grid = given.problem.is_grid();
  const double grid_h = grid ? op.inverse_laplacian().domain().h() : 0.0;
  const ExperimentSpec spec = resolve(given, grid, grid_h);
  const CWBounds b = collatz_wielandt(op, build_v0(spec, op));
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.6f %.6f", b.lower, b.upper);
  return buf;
}

TableId table_from_string(const std::string& s) {
  if (s == "matrix") return TableId::Matrix;
  if (s == "mesh-error") return TableId::MeshError;
  if (s == "step-counts") return TableId::StepCounts;
  if (s == "grid-order") return TableId::GridOrder;
  if (s == "rayleigh-compare") return TableId::RayleighCompare;
  throw InvalidArgumentError(
      "unknown table '" + s +
      "'; expected matrix, mesh-error, step-counts, grid-order, or rayleigh-compare");
}

std::string bench_table(TableId id, std::uint64_t seed, ReportFormat format) {
  switch (id) {
    case TableId::Matrix: return table_matrix(seed, format);
    case TableId::MeshError: return table_mesh_error(format);
    case TableId::StepCounts: return table_step_counts(format);
    case TableId::GridOrder: return table_grid_order(format);
    default: return table_rayleigh_compare(format);
  }
}

}  // namespace perron
