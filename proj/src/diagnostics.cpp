#include "perron/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "perron/errors.hpp"
#include "perron/vec.hpp"

namespace perron {
namespace {

constexpr double kOrderFloorFactor = 1e-13;

std::string fmt(const char* spec, double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::string fmt6(double x) { return fmt("%.6g", x); }
std::string fmt17(double x) { return fmt("%.17g", x); }

OrderEstimate order_core(const std::vector<double>& errors, double floor,
                         bool strict) {
  const std::size_t L = errors.size();
  if (strict) {
    if (L < 3)
      throw InsufficientDataError("order estimation needs at least 3 errors, got " +
                                  std::to_string(L));
    for (double e : errors)
      if (!(e > 0.0) || !std::isfinite(e))
        throw DomainError("order estimation needs positive finite errors");
  }
  OrderEstimate est;
  est.floor = floor;
  est.alpha.assign(L, std::nullopt);
  est.masked.assign(L, 0);
  for (std::size_t i = 1; i + 1 < L; ++i) {
    bool usable = true;
    for (std::size_t k = i - 1; k <= i + 1; ++k)
      if (!(errors[k] > 0.0) || !std::isfinite(errors[k]) || errors[k] < floor)
        usable = false;
    if (!usable) {
      est.masked[i] = 1;
      continue;
    }
    const double den = std::log(errors[i]) - std::log(errors[i - 1]);
    const double num = std::log(errors[i + 1]) - std::log(errors[i]);
    if (den == 0.0 || !std::isfinite(num / den)) {
      est.masked[i] = 1;
      continue;
    }
    est.alpha[i] = num / den;
  }
  return est;
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::CriterionMet: return "criterion-met";
    case StopReason::ShiftCollision: return "shift-collision";
    case StopReason::EigenvectorStart: return "eigenvector-start";
    default: return "max-iters";
  }
}

const char* kind_name(StoppingKind k) {
  switch (k) {
    case StoppingKind::SC1RatioGap: return "sc1";
    case StoppingKind::SC2SolveRatioGap: return "sc2";
    case StoppingKind::LambdaDiff: return "dlambda";
    default: return "residual";
  }
}

StopReason stop_reason_from(const std::string& s) {
  if (s == "criterion-met") return StopReason::CriterionMet;
  if (s == "shift-collision") return StopReason::ShiftCollision;
  if (s == "eigenvector-start") return StopReason::EigenvectorStart;
  if (s == "max-iters") return StopReason::MaxIters;
  throw ParseError("unknown stop reason: " + s, 0);
}

StoppingKind kind_from(const std::string& s) {
  if (s == "sc1") return StoppingKind::SC1RatioGap;
  if (s == "sc2") return StoppingKind::SC2SolveRatioGap;
  if (s == "dlambda") return StoppingKind::LambdaDiff;
  if (s == "residual") return StoppingKind::Residual2Norm;
  throw ParseError("unknown stopping criterion: " + s, 0);
}

ErrorMode mode_from(const std::string& s) {
  if (s == "absolute") return ErrorMode::Absolute;
  if (s == "relative") return ErrorMode::Relative;
  throw ParseError("unknown error mode: " + s, 0);
}

void json_escape(std::ostringstream& out, const std::string& s) {
  out << '"';
  for (char c : s) {
    switch (c) {
      case '"': out << "\\\""; break;
      case '\\': out << "\\\\"; break;
      case '\n': out << "\\n"; break;
      case '\t': out << "\\t"; break;
      case '\r': out << "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x",
                        static_cast<unsigned>(static_cast<unsigned char>(c)));
          out << buf;
        } else {
          out << c;
        }
    }
  }
  out << '"';
}

// Order cell shown on a row is the estimate whose newest error is that
// row's: row j carries alpha[j-1].
std::optional<double> order_cell(const OrderEstimate* order, std::size_t row) {
  if (!order || row == 0 || row - 1 >= order->alpha.size()) return std::nullopt;
  return order->alpha[row - 1];
}

std::string emit_csv(const ConvergenceReport& r, const OrderEstimate* order) {
  std::ostringstream out;
  out << "n,lambda,error,order,criterion,residual\n";
  for (std::size_t j = 0; j < r.steps.size(); ++j) {
    const StepRecord& s = r.steps[j];
    out << s.n << ',' << fmt6(s.lambda) << ',';
    if (s.error) out << fmt6(*s.error);
    out << ',';
    if (auto a = order_cell(order, j)) out << fmt6(*a);
    out << ',';
    if (s.criterion) out << fmt6(*s.criterion);
    out << ',';
    if (s.residual) out << fmt6(*s.residual);
    out << '\n';
  }
  return out.str();
}

std::string emit_markdown(const ConvergenceReport& r, const OrderEstimate* order) {
  std::ostringstream out;
  out << "# " << r.algorithm << "\n\n";
  out << "- stop reason: " << stop_reason_name(r.stop_reason) << "\n";
  out << "- criterion: " << kind_name(r.criterion_kind)
      << ", epsilon = " << fmt6(r.epsilon) << "\n";
  out << "- initial lambda: " << fmt6(r.initial_lambda) << "\n";
  out << "- final lambda: " << fmt6(r.final_lambda) << "\n";
  if (r.reference)
    out << "- reference: " << fmt6(*r.reference) << " ("
        << to_string(r.error_mode) << " errors)\n";
  if (!r.note.empty()) out << "- note: " << r.note << "\n";
  out << "\n| n | lambda | error | order | criterion | residual |\n";
  out << "|---|--------|-------|-------|-----------|----------|\n";
  for (std::size_t j = 0; j < r.steps.size(); ++j) {
    const StepRecord& s = r.steps[j];
    out << "| " << s.n << " | " << fmt6(s.lambda) << " | ";
    if (s.error) out << fmt6(*s.error);
    out << " | ";
    if (auto a = order_cell(order, j)) out << fmt6(*a);
    out << " | ";
    if (s.criterion) out << fmt6(*s.criterion);
    out << " | ";
    if (s.residual) out << fmt6(*s.residual);
    out << " |\n";
  }
  return out.str();
}

std::string emit_json(const ConvergenceReport& r) {
  std::ostringstream out;
  out << "{\n  \"algorithm\": ";
  json_escape(out, r.algorithm);
  out << ",\n  \"stop_reason\": \"" << stop_reason_name(r.stop_reason) << "\"";
  out << ",\n  \"criterion\": \"" << kind_name(r.criterion_kind) << "\"";
  out << ",\n  \"epsilon\": " << fmt17(r.epsilon);
  out << ",\n  \"initial_lambda\": " << fmt17(r.initial_lambda);
  out << ",\n  \"final_lambda\": " << fmt17(r.final_lambda);
  if (!r.note.empty()) {
    out << ",\n  \"note\": ";
    json_escape(out, r.note);
  }
  if (r.reference) {
    out << ",\n  \"reference\": " << fmt17(*r.reference);
    out << ",\n  \"error_mode\": \"" << to_string(r.error_mode) << "\"";
  }
  out << ",\n  \"eigenvector\": [";
  for (std::size_t i = 0; i < r.eigenvector.size(); ++i) {
    if (i) out << ", ";
    out << fmt17(r.eigenvector[i]);
  }
  out << "]";
  out << ",\n  \"steps\": [";
  for (std::size_t j = 0; j < r.steps.size(); ++j) {
    const StepRecord& s = r.steps[j];
    out << (j ? ",\n    {" : "\n    {");
    out << "\"n\": " << s.n << ", \"lambda\": " << fmt17(s.lambda);
    if (s.criterion) out << ", \"criterion\": " << fmt17(*s.criterion);
    if (s.sc1_gap) out << ", \"sc1_gap\": " << fmt17(*s.sc1_gap);
    if (s.residual) out << ", \"residual\": " << fmt17(*s.residual);
    if (s.error) out << ", \"error\": " << fmt17(*s.error);
    out << "}";
  }
  out << (r.steps.empty() ? "]" : "\n  ]");
  out << "\n}\n";
  return out.str();
}

}  // namespace

const char* to_string(StopReason r) { return stop_reason_name(r); }
const char* to_string(StoppingKind k) { return kind_name(k); }
const char* to_string(ErrorMode m) {
  return m == ErrorMode::Absolute ? "absolute" : "relative";
}

double default_order_floor(double lambda_ref) {
  return kOrderFloorFactor * std::max(1.0, std::fabs(lambda_ref));
}

OrderEstimate estimate_order(const std::vector<double>& errors, double floor) {
  return order_core(errors, floor, true);
}

std::vector<double> mesh_order(double lambda_ref,
                               const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 2)
    throw InsufficientDataError("mesh order needs at least 2 (h, lambda) pairs");
  for (const auto& [h, lh] : pairs) {
    if (!(h > 0.0)) throw InvalidArgumentError("mesh spacing must be positive");
    if (lh == lambda_ref)
      throw DomainError("a mesh eigenvalue coincides with the reference");
  }
  std::vector<double> alpha;
  alpha.reserve(pairs.size() - 1);
  for (std::size_t k = 0; k + 1 < pairs.size(); ++k) {
    const auto& [h1, l1] = pairs[k];
    const auto& [h2, l2] = pairs[k + 1];
    if (h1 == h2) throw DomainError("coincident mesh spacings");
    alpha.push_back((std::log(std::fabs(lambda_ref - l1)) -
                     std::log(std::fabs(lambda_ref - l2))) /
                    (std::log(h1) - std::log(h2)));
  }
  return alpha;
}

std::pair<double, std::vector<double>> reference_eigenpair(
    const PositiveLinearOperator& op) {
  const int dim = op.dimension();
  std::vector<double> v(dim, 1.0 / std::sqrt(static_cast<double>(dim)));
  constexpr long kMaxSteps = 1000000;
  constexpr double kGap = 1e-14;
  for (long step = 0; step < kMaxSteps; ++step) {
    const std::vector<double> y = perron::apply(op, v);
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < dim; ++i) {
      if (!(v[i] > 0.0))
        throw PositivityError("power iterate lost positivity at component " +
                              std::to_string(i));
      const double q = y[i] / v[i];
      if (i == 0) { lo = hi = q; }
      else {
        if (q < lo) lo = q;
        if (q > hi) hi = q;
      }
    }
    if (hi - lo < kGap) return {hi, v};
    const double nrm = norm2(y);
    for (int i = 0; i < dim; ++i) v[i] = y[i] / nrm;
  }
  throw NoConvergenceError(
      "power iteration did not reach a 1e-14 ratio gap within 1e6 steps; the "
      "spectral gap is too small for this reference");
}

void attach_reference_errors(ConvergenceReport& report, double lambda_ref,
                             ErrorMode mode) {
  if (mode == ErrorMode::Relative && lambda_ref == 0.0)
    throw InvalidArgumentError("relative errors need a nonzero reference");
  report.reference = lambda_ref;
  report.error_mode = mode;
  for (StepRecord& s : report.steps) {
    double e = std::fabs(s.lambda - lambda_ref);
    if (mode == ErrorMode::Relative) e /= std::fabs(lambda_ref);
    s.error = e;
  }
}

OrderEstimate report_orders(const ConvergenceReport& report) {
  std::vector<double> errors;
  for (const StepRecord& s : report.steps) {
    if (!s.error) break;
    errors.push_back(*s.error);
  }
  const double floor = report.error_mode == ErrorMode::Relative
                           ? kOrderFloorFactor
                           : default_order_floor(report.reference.value_or(0.0));
  return order_core(errors, floor, false);
}

std::string emit_report(const ConvergenceReport& report, ReportFormat format) {
  switch (format) {
    case ReportFormat::Csv: return emit_csv(report, nullptr);
    case ReportFormat::Markdown: return emit_markdown(report, nullptr);
    default: return emit_json(report);
  }
}

std::string emit_report(const ConvergenceReport& report,
                        const OrderEstimate& order, ReportFormat format) {
  switch (format) {
    case ReportFormat::Csv: return emit_csv(report, &order);
    case ReportFormat::Markdown: return emit_markdown(report, &order);
    default: return emit_json(report);
  }
}

ConvergenceReport parse_report_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid report JSON: ") + e.what(), 0);
  }
  try {
    ConvergenceReport r;
    r.algorithm = j.at("algorithm").get<std::string>();
    r.stop_reason = stop_reason_from(j.at("stop_reason").get<std::string>());
    r.criterion_kind = kind_from(j.at("criterion").get<std::string>());
    r.epsilon = j.at("epsilon").get<double>();
    r.initial_lambda = j.at("initial_lambda").get<double>();
    r.final_lambda = j.at("final_lambda").get<double>();
    if (j.contains("note")) r.note = j.at("note").get<std::string>();
    if (j.contains("reference")) {
      r.reference = j.at("reference").get<double>();
      r.error_mode = mode_from(j.at("error_mode").get<std::string>());
    }
    r.eigenvector = j.at("eigenvector").get<std::vector<double>>();
    for (const auto& js : j.at("steps")) {
      StepRecord s;
      s.n = js.at("n").get<int>();
      s.lambda = js.at("lambda").get<double>();
      if (js.contains("criterion")) s.criterion = js.at("criterion").get<double>();
      if (js.contains("sc1_gap")) s.sc1_gap = js.at("sc1_gap").get<double>();
      if (js.contains("residual")) s.residual = js.at("residual").get<double>();
      if (js.contains("error")) s.error = js.at("error").get<double>();
      r.steps.push_back(std::move(s));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("report JSON missing or mistyped field: ") + e.what(), 0);
  }
}

}  // namespace perron
