#include "perron/iteration.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "perron/errors.hpp"
#include "perron/vec.hpp"

namespace perron {
namespace {

struct RatioSummary {
  double min = 0.0;
  double max = 0.0;
  int argmin = 0;
  int argmax = 0;
  double spread() const { return max - min; }
};

// Componentwise num_i / den_i extrema; den must be strictly positive.
// Ties keep the smallest index.
RatioSummary ratio_extrema(const std::vector<double>& num,
                           const std::vector<double>& den) {
  RatioSummary r;
  for (std::size_t i = 0; i < den.size(); ++i) {
    if (!(den[i] > 0.0))
      throw PositivityError("ratio denominator is not positive at component " +
                            std::to_string(i));
    const double q = num[i] / den[i];
    if (i == 0) {
      r.min = r.max = q;
      r.argmin = r.argmax = 0;
    } else {
      if (q < r.min) { r.min = q; r.argmin = static_cast<int>(i); }
      if (q > r.max) { r.max = q; r.argmax = static_cast<int>(i); }
    }
  }
  return r;
}

void require_positive_start(const std::vector<double>& v0,
                            const PositiveLinearOperator& op) {
  require_dimension(v0.size(), static_cast<std::size_t>(op.dimension()),
                    "start vector");
  for (std::size_t i = 0; i < v0.size(); ++i)
    if (!(v0[i] > 0.0))
      throw PositivityError("start vector must be strictly positive; component " +
                            std::to_string(i) + " is not");
}

void validate_rule(const StoppingRule& rule) {
  if (!(rule.epsilon > 0.0))
    throw InvalidArgumentError("stopping tolerance must be positive");
  if (rule.max_iters < 1)
    throw InvalidArgumentError("max_iters must be at least 1");
}

// Entries below -tol mean the shift fell to or below the principal
// eigenvalue; entries in [-tol, 0] are a ratio floor either way. Returns
// true when all entries are strictly positive.
bool solve_output_positive(const std::vector<double>& w, bool* beyond_tolerance) {
  const double tol = kPositivityTolerance * norm_inf(w);
  bool ok = true;
  *beyond_tolerance = false;
  for (double x : w) {
    if (!(x > 0.0)) ok = false;
    if (x < -tol) *beyond_tolerance = true;
  }
  return ok;
}

double residual_from_applied(const std::vector<double>& applied,
                             const std::vector<double>& v, double lambda) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double d = applied[i] - lambda * v[i];
    const double y = d * d - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return std::sqrt(s);
}

const char* update_tag(ShiftUpdate u) {
  return u == ShiftUpdate::SupRatio ? "variable-lambda-power-sup"
                                    : "variable-lambda-power-mu";
}

ConvergenceReport run_variable(const PositiveLinearOperator& op,
                               const std::vector<double>& v0,
                               const SolverConfig& config,
                               std::vector<std::vector<double>>* iterates) {
  require_positive_start(v0, op);
  validate_rule(config.stopping);
  const StoppingRule& rule = config.stopping;
  const bool grid = op.kind() == OperatorKind::InverseLaplacian;

  ConvergenceReport rep;
  rep.algorithm = update_tag(config.update);
  rep.criterion_kind = rule.kind;
  rep.epsilon = rule.epsilon;

  const std::vector<double> av0 = perron::apply(op, v0);
  const RatioSummary r0 = ratio_extrema(av0, v0);
  rep.initial_lambda = r0.max;

  if (r0.spread() <= kShiftFloorFactor * std::fabs(r0.max)) {
    rep.stop_reason = StopReason::EigenvectorStart;
    rep.final_lambda = r0.max;
    rep.eigenvector = normalized(v0);
    rep.note = "start vector is already an eigenvector to working precision";
    return rep;
  }

  double lambda = r0.max;
  std::vector<double> rhs = v0;  // first solve consumes v0 as given
  std::vector<double> v_cur = normalized(v0);

  for (int n = 1; n <= rule.max_iters; ++n) {
    std::vector<double> w, z;
    try {
      ShiftedSystem sys = shifted_factor(op, lambda);
      w = sys.solve(rhs, grid ? &z : nullptr);
    } catch (const ShiftCollisionError&) {
      rep.stop_reason = StopReason::ShiftCollision;
      rep.final_lambda = lambda;
      rep.eigenvector = v_cur;
      rep.note = "shifted system singular at step " + std::to_string(n) +
                 "; shift taken as converged";
      return rep;
    }
    bool beyond = false;
    if (!solve_output_positive(w, &beyond)) {
      rep.stop_reason = StopReason::ShiftCollision;
      rep.final_lambda = lambda;
      rep.eigenvector = v_cur;
      rep.note = std::string(beyond ? "solve output lost positivity"
                                    : "solve output touched zero") +
                 " at step " + std::to_string(n) + "; shift taken as converged";
      return rep;
    }

    // SC2 ratios double as the MuInf decrement.
    const RatioSummary q = ratio_extrema(rhs, w);
    const double sc2 = q.spread();
    const double wnorm = norm2(w);
    std::vector<double> v_next = w;
    scale(v_next, 1.0 / wnorm);

    std::optional<double> sc1;
    double sup_candidate = 0.0;
    std::optional<std::vector<double>> applied;  // op v_next, scaled
    if (grid) {
      const RatioSummary t = ratio_extrema(z, w);  // (T v)_i / v_i
      sc1 = t.spread();
      sup_candidate = t.max;
      applied = z;
      scale(*applied, 1.0 / wnorm);
    } else if (config.update == ShiftUpdate::SupRatio ||
               rule.kind == StoppingKind::SC1RatioGap ||
               rule.kind == StoppingKind::Residual2Norm) {
      applied = perron::apply(op, v_next);
      const RatioSummary t = ratio_extrema(*applied, v_next);
      sc1 = t.spread();
      sup_candidate = t.max;
    }

    const double lambda_next = (config.update == ShiftUpdate::SupRatio)
                                   ? sup_candidate
                                   : lambda - q.min;

    double crit = 0.0;
    switch (rule.kind) {
      case StoppingKind::SC1RatioGap: crit = *sc1; break;
      case StoppingKind::SC2SolveRatioGap: crit = sc2; break;
      case StoppingKind::LambdaDiff: crit = std::fabs(lambda_next - lambda); break;
      case StoppingKind::Residual2Norm:
        crit = residual_from_applied(*applied, v_next, lambda_next);
        break;
    }

    if (config.record_trace) {
      StepRecord rec;
      rec.n = n;
      rec.lambda = lambda_next;
      rec.criterion = crit;
      rec.sc1_gap = sc1;
      if (applied)
        rec.residual = residual_from_applied(*applied, v_next, lambda_next);
      rep.steps.push_back(std::move(rec));
    }
    if (iterates) iterates->push_back(v_next);

    if (crit < rule.epsilon) {
      rep.stop_reason = StopReason::CriterionMet;
      rep.final_lambda = lambda_next;
      rep.eigenvector = std::move(v_next);
      return rep;
    }
    const double floor_gap = sc1 ? *sc1 : sc2;
    if (floor_gap <= kShiftFloorFactor * std::fabs(lambda_next)) {
      rep.stop_reason = StopReason::ShiftCollision;
      rep.final_lambda = lambda_next;
      rep.eigenvector = std::move(v_next);
      rep.note = "ratio spread at step " + std::to_string(n) +
                 " is at the working-precision floor; the next shifted system "
                 "would be singular";
      return rep;
    }

    lambda = lambda_next;
    rhs = v_next;
    v_cur = std::move(v_next);
  }

  rep.stop_reason = StopReason::MaxIters;
  rep.final_lambda = lambda;
  rep.eigenvector = std::move(v_cur);
  rep.note = "stopping rule not met within " + std::to_string(rule.max_iters) +
             " iterations";
  return rep;
}

}  // namespace

CWBounds collatz_wielandt(const PositiveLinearOperator& op,
                          const std::vector<double>& y) {
  require_dimension(y.size(), static_cast<std::size_t>(op.dimension()), "vector");
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!(y[i] > 0.0))
      throw PositivityError("Collatz-Wielandt bounds need a strictly positive "
                            "vector; component " + std::to_string(i) + " is not");
  const std::vector<double> ay = perron::apply(op, y);
  const RatioSummary r = ratio_extrema(ay, y);
  return CWBounds{r.min, r.max, r.argmin, r.argmax};
}

ConvergenceReport variable_lambda_power(const PositiveLinearOperator& op,
                                        const std::vector<double>& v0,
                                        const SolverConfig& config) {
  return run_variable(op, v0, config, nullptr);
}

bool mu_matches_sup(const PositiveLinearOperator& op,
                    const std::vector<double>& v0, int n_steps) {
  if (n_steps < 0) throw InvalidArgumentError("n_steps must be nonnegative");
  SolverConfig config;
  config.stopping.kind = StoppingKind::LambdaDiff;
  config.stopping.epsilon = 1e-300;  // effectively: run n_steps or hit the floor
  config.stopping.max_iters = n_steps > 0 ? n_steps : 1;
  config.record_trace = true;

  std::vector<std::vector<double>> sup_v, mu_v;
  config.update = ShiftUpdate::SupRatio;
  const ConvergenceReport sup = run_variable(op, v0, config, &sup_v);
  config.update = ShiftUpdate::MuInf;
  const ConvergenceReport mu = run_variable(op, v0, config, &mu_v);

  if (sup.initial_lambda != mu.initial_lambda) return false;
  const std::size_t common = std::min({sup.steps.size(), mu.steps.size(),
                                       static_cast<std::size_t>(n_steps)});
  for (std::size_t k = 0; k < common; ++k) {
    const double a = sup.steps[k].lambda;
    const double b = mu.steps[k].lambda;
    if (std::fabs(a - b) > 1e-11 * std::fabs(a)) return false;
    // Both iterates are unit positive vectors; chord angle keeps resolution
    // down to ~1e-16 where acos(dot) floors near 1e-8.
    std::vector<double> diff = sup_v[k];
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= mu_v[k][i];
    const double angle = 2.0 * std::asin(std::min(1.0, 0.5 * norm2(diff)));
    if (angle > 1e-9) return false;
  }
  return true;
}

ConvergenceReport fixed_shift_power(const PositiveLinearOperator& op,
                                    const std::vector<double>& v0, double lambda,
                                    const StoppingRule& stopping) {
  require_positive_start(v0, op);
  validate_rule(stopping);
  if (!std::isfinite(lambda))
    throw InvalidArgumentError("fixed shift must be finite");
  const bool grid = op.kind() == OperatorKind::InverseLaplacian;

  ConvergenceReport rep;
  rep.algorithm = "fixed-shift-power";
  rep.criterion_kind = stopping.kind;
  rep.epsilon = stopping.epsilon;

  const std::vector<double> av0 = perron::apply(op, v0);
  const RatioSummary r0 = ratio_extrema(av0, v0);
  rep.initial_lambda = r0.max;

  ShiftedSystem sys = [&] {
    try {
      return shifted_factor(op, lambda);
    } catch (const ShiftCollisionError&) {
      throw ShiftTooSmallError("fixed shift " + std::to_string(lambda) +
                               " makes the shifted system singular or "
                               "indefinite; it is not above the principal "
                               "eigenvalue");
    }
  }();

  double lambda_est = r0.max;
  std::vector<double> rhs = v0;
  std::vector<double> v_cur = normalized(v0);

  for (int n = 1; n <= stopping.max_iters; ++n) {
    std::vector<double> z;
    std::vector<double> w = sys.solve(rhs, grid ? &z : nullptr);
    bool beyond = false;
    if (!solve_output_positive(w, &beyond))
      throw ShiftTooSmallError("fixed shift " + std::to_string(lambda) +
                               " produced a nonpositive iterate at step " +
                               std::to_string(n) +
                               "; it is not above the principal eigenvalue");

    const RatioSummary q = ratio_extrema(rhs, w);
    const double wnorm = norm2(w);
    std::vector<double> v_next = w;
    scale(v_next, 1.0 / wnorm);

    std::vector<double> applied;
    if (grid) {
      applied = z;
      scale(applied, 1.0 / wnorm);
    } else {
      applied = perron::apply(op, v_next);
    }
    const RatioSummary t = ratio_extrema(applied, v_next);
    const double lambda_next = t.max;

    double crit = 0.0;
    switch (stopping.kind) {
      case StoppingKind::SC1RatioGap: crit = t.spread(); break;
      case StoppingKind::SC2SolveRatioGap: crit = q.spread(); break;
      case StoppingKind::LambdaDiff: crit = std::fabs(lambda_next - lambda_est); break;
      case StoppingKind::Residual2Norm:
        crit = residual_from_applied(applied, v_next, lambda_next);
        break;
    }

    StepRecord rec;
    rec.n = n;
    rec.lambda = lambda_next;
    rec.criterion = crit;
    rec.sc1_gap = t.spread();
    rec.residual = residual_from_applied(applied, v_next, lambda_next);
    rep.steps.push_back(std::move(rec));

    if (crit < stopping.epsilon) {
      rep.stop_reason = StopReason::CriterionMet;
      rep.final_lambda = lambda_next;
      rep.eigenvector = std::move(v_next);
      return rep;
    }
    lambda_est = lambda_next;
    rhs = v_next;
    v_cur = std::move(v_next);
  }

  rep.stop_reason = StopReason::MaxIters;
  rep.final_lambda = lambda_est;
  rep.eigenvector = std::move(v_cur);
  rep.note = "stopping rule not met within " + std::to_string(stopping.max_iters) +
             " iterations";
  return rep;
}

ConvergenceReport plain_power(const PositiveLinearOperator& op,
                              const std::vector<double>& v0,
                              const StoppingRule& stopping) {
  require_positive_start(v0, op);
  validate_rule(stopping);
  if (stopping.kind == StoppingKind::SC2SolveRatioGap)
    throw StateError("the solve-ratio rule needs a shifted-solve output; "
                     "power iteration has none");

  ConvergenceReport rep;
  rep.algorithm = "power";
  rep.criterion_kind = stopping.kind;
  rep.epsilon = stopping.epsilon;

  std::vector<double> v = normalized(v0);
  std::vector<double> measured_v;
  double prev_lambda = std::numeric_limits<double>::quiet_NaN();

  for (int n = 1; n <= stopping.max_iters; ++n) {
    const std::vector<double> y = perron::apply(op, v);
    const RatioSummary t = ratio_extrema(y, v);
    const double lambda_n = t.max;
    if (n == 1) rep.initial_lambda = lambda_n;

    std::optional<double> crit;
    switch (stopping.kind) {
      case StoppingKind::SC1RatioGap: crit = t.spread(); break;
      case StoppingKind::LambdaDiff:
        if (!std::isnan(prev_lambda)) crit = std::fabs(lambda_n - prev_lambda);
        break;
      case StoppingKind::Residual2Norm:
        crit = residual_from_applied(y, v, lambda_n);
        break;
      default: break;
    }

    StepRecord rec;
    rec.n = n;
    rec.lambda = lambda_n;
    rec.criterion = crit;
    rec.sc1_gap = t.spread();
    rec.residual = residual_from_applied(y, v, lambda_n);
    rep.steps.push_back(std::move(rec));

    if (crit && *crit < stopping.epsilon) {
      rep.stop_reason = StopReason::CriterionMet;
      rep.final_lambda = lambda_n;
      rep.eigenvector = std::move(v);
      return rep;
    }
    prev_lambda = lambda_n;
    measured_v = std::move(v);
    std::vector<double> next = y;
    scale(next, 1.0 / norm2(next));
    v = std::move(next);
  }

  rep.stop_reason = StopReason::MaxIters;
  rep.final_lambda = prev_lambda;
  rep.eigenvector = std::move(measured_v);
  rep.note = "stopping rule not met within " + std::to_string(stopping.max_iters) +
             " iterations";
  return rep;
}

ConvergenceReport rayleigh_quotient_iteration(const PositiveLinearOperator& op,
                                              const std::vector<double>& v0,
                                              const StoppingRule& stopping) {
  require_dimension(v0.size(), static_cast<std::size_t>(op.dimension()),
                    "start vector");
  validate_rule(stopping);
  if (stopping.kind == StoppingKind::SC1RatioGap ||
      stopping.kind == StoppingKind::SC2SolveRatioGap)
    throw UnsupportedCriterionError(
        "ratio-gap stopping rules need positive iterates, which Rayleigh "
        "iteration does not preserve; use the shift-difference or residual "
        "rule");
  const bool grid = op.kind() == OperatorKind::InverseLaplacian;

  ConvergenceReport rep;
  rep.algorithm = "rayleigh";
  rep.criterion_kind = stopping.kind;
  rep.epsilon = stopping.epsilon;

  std::vector<double> v = normalized(v0);
  double lambda = dot(v, perron::apply(op, v));
  rep.initial_lambda = lambda;

  for (int n = 1; n <= stopping.max_iters; ++n) {
    std::vector<double> w, z;
    try {
      ShiftedSystem sys = shifted_factor_indefinite(op, lambda);
      w = sys.solve(v, grid ? &z : nullptr);
    } catch (const ShiftCollisionError&) {
      rep.stop_reason = StopReason::ShiftCollision;
      rep.final_lambda = lambda;
      rep.eigenvector = v;
      rep.note = "shifted system singular at step " + std::to_string(n) +
                 "; Rayleigh shift taken as an exact eigenvalue";
      return rep;
    }

    const double wnorm = norm2(w);
    if (wnorm == 0.0)
      throw StateError("Rayleigh solve returned a zero vector");
    std::vector<double> v_next = w;
    scale(v_next, 1.0 / wnorm);

    double lambda_next;
    std::vector<double> applied;
    if (grid) {
      // T v_next = z / ||w||; quotient (w, z)/(w, w) avoids another solve.
      lambda_next = kahan_dot(w, z) / (wnorm * wnorm);
      applied = z;
      scale(applied, 1.0 / wnorm);
    } else {
      applied = perron::apply(op, v_next);
      lambda_next = dot(v_next, applied);
    }

    double crit = (stopping.kind == StoppingKind::LambdaDiff)
                      ? std::fabs(lambda_next - lambda)
                      : residual_from_applied(applied, v_next, lambda_next);

    StepRecord rec;
    rec.n = n;
    rec.lambda = lambda_next;
    rec.criterion = crit;
    rec.residual = residual_from_applied(applied, v_next, lambda_next);
    rep.steps.push_back(std::move(rec));

    if (crit < stopping.epsilon) {
      rep.stop_reason = StopReason::CriterionMet;
      rep.final_lambda = lambda_next;
      rep.eigenvector = std::move(v_next);
      return rep;
    }
    lambda = lambda_next;
    v = std::move(v_next);
  }

  rep.stop_reason = StopReason::MaxIters;
  rep.final_lambda = lambda;
  rep.eigenvector = std::move(v);
  rep.note = "stopping rule not met within " + std::to_string(stopping.max_iters) +
             " iterations";
  return rep;
}

std::pair<bool, double> evaluate_stop(const StoppingRule& rule,
                                      const PositiveLinearOperator& op,
                                      const IterationState& state,
                                      double prev_lambda) {
  validate_rule(rule);
  double value = 0.0;
  switch (rule.kind) {
    case StoppingKind::SC1RatioGap: {
      value = collatz_wielandt(op, state.v).gap();
      break;
    }
    case StoppingKind::SC2SolveRatioGap: {
      if (state.w.empty())
        throw StateError("the solve-ratio rule needs the raw solve output w");
      if (state.prev_v.empty())
        throw StateError("the solve-ratio rule needs the previous iterate");
      require_dimension(state.prev_v.size(), state.w.size(), "previous iterate");
      value = ratio_extrema(state.prev_v, state.w).spread();
      break;
    }
    case StoppingKind::LambdaDiff: {
      if (!std::isfinite(prev_lambda))
        throw StateError("the shift-difference rule needs the previous shift");
      value = std::fabs(state.lambda - prev_lambda);
      break;
    }
    case StoppingKind::Residual2Norm: {
      value = residual(op, state);
      break;
    }
  }
  return {value < rule.epsilon, value};
}

double residual(const PositiveLinearOperator& op, const IterationState& state) {
  if (state.v.empty()) throw StateError("state has no iterate");
  const std::vector<double> av = perron::apply(op, state.v);
  return residual_from_applied(av, state.v, state.lambda);
}

}  // namespace perron
