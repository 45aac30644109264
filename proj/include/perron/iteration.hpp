#ifndef PERRON_ITERATION_HPP
#define PERRON_ITERATION_HPP

#include <utility>
#include <vector>

#include "perron/operators.hpp"
#include "perron/report.hpp"

namespace perron {

// Collatz-Wielandt ratio bounds of a strictly positive vector y:
// lower = min_i (op y)_i / y_i, upper = max_i (op y)_i / y_i. For a
// primitive nonnegative operator these sandwich the spectral radius. Ties go
// to the smallest index.
struct CWBounds {
  double lower = 0.0;
  double upper = 0.0;
  int argmin_index = 0;
  int argmax_index = 0;
  double gap() const { return upper - lower; }
};

CWBounds collatz_wielandt(const PositiveLinearOperator& op,
                          const std::vector<double>& y);

enum class ShiftUpdate { SupRatio, MuInf };

struct StoppingRule {
  StoppingKind kind = StoppingKind::LambdaDiff;
  double epsilon = 1e-14;
  int max_iters = 200;
};

struct SolverConfig {
  StoppingRule stopping;
  ShiftUpdate update = ShiftUpdate::SupRatio;
  bool record_trace = true;
};

// Snapshot of an iteration in progress. w is the raw shifted-solve output
// that produced v (empty before the first solve); prev_v is the iterate the
// solve consumed (what the SC2 ratio spread needs).
struct IterationState {
  int n = 0;
  double lambda = 0.0;
  std::vector<double> v;
  std::vector<double> w;
  std::vector<double> prev_v;
};

// A ratio-spread floor below 1e-13 * lambda means the shift has merged with
// the principal eigenvalue at working precision: the same constant as the
// eigenvector-start test, applied at every step.
constexpr double kShiftFloorFactor = 1e-13;

// Inverse iteration whose shift is re-set every step, either to the upper
// Collatz-Wielandt ratio (SupRatio) or by the equivalent decrement
// mu - min_i v_i / w_i (MuInf). Starts from the upper CW bound of v0 and
// solves the first system against v0 as given (unnormalized). Converges
// globally and quadratically to the principal pair for primitive operators.
ConvergenceReport variable_lambda_power(const PositiveLinearOperator& op,
                                        const std::vector<double>& v0,
                                        const SolverConfig& config);

// Runs the SupRatio and MuInf updates side by side from the same start and
// checks that shifts agree to 1e-11 relative and iterate directions to 1e-9
// radians for every common step up to n_steps.
bool mu_matches_sup(const PositiveLinearOperator& op,
                    const std::vector<double>& v0, int n_steps);

// Classic inverse power iteration with a constant shift; linear convergence.
// A singular factorization or a positivity violation means the shift is at
// or below the principal eigenvalue: ShiftTooSmallError.
ConvergenceReport fixed_shift_power(const PositiveLinearOperator& op,
                                    const std::vector<double>& v0, double lambda,
                                    const StoppingRule& stopping);

// Multiplicative power iteration; per-step lambda is the upper CW bound of
// the current iterate, so with the SC1 rule at epsilon the returned lambda
// has a bracketing interval narrower than epsilon.
ConvergenceReport plain_power(const PositiveLinearOperator& op,
                              const std::vector<double>& v0,
                              const StoppingRule& stopping);

// Rayleigh quotient iteration. Iterates need not stay positive, so the
// ratio-gap rules are rejected (UnsupportedCriterionError); use LambdaDiff
// or Residual2Norm. A singular shifted solve is reported as convergence at
// the current shift. May converge to a non-principal eigenpair.
ConvergenceReport rayleigh_quotient_iteration(const PositiveLinearOperator& op,
                                              const std::vector<double>& v0,
                                              const StoppingRule& stopping);

// Evaluates a stopping rule against a state: returns (fired, value) with
// fired = value < epsilon. SC2 needs state.w and state.prev_v (StateError
// otherwise); LambdaDiff needs a finite prev_lambda.
std::pair<bool, double> evaluate_stop(const StoppingRule& rule,
                                      const PositiveLinearOperator& op,
                                      const IterationState& state,
                                      double prev_lambda);

// ||op v - lambda v||_2 for the state's (lambda, v).
double residual(const PositiveLinearOperator& op, const IterationState& state);

}  // namespace perron

#endif
