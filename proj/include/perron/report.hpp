#ifndef PERRON_REPORT_HPP
#define PERRON_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace perron {

enum class StopReason { CriterionMet, ShiftCollision, EigenvectorStart, MaxIters };

enum class StoppingKind { SC1RatioGap, SC2SolveRatioGap, LambdaDiff, Residual2Norm };

// How the per-step error column relates to the reference eigenvalue.
enum class ErrorMode { Absolute, Relative };

struct StepRecord {
  int n = 0;
  double lambda = 0.0;
  // Left-hand side of the active stopping rule at this step; absent when the
  // rule needs data the step does not have (e.g. a previous shift at n = 1).
  std::optional<double> criterion;
  // Collatz-Wielandt ratio spread at v_n, recorded whenever the iteration
  // computes the ratios anyway.
  std::optional<double> sc1_gap;
  std::optional<double> residual;
  // |lambda - reference| (absolute or relative), filled after the run.
  std::optional<double> error;

  bool operator==(const StepRecord&) const = default;
};

struct ConvergenceReport {
  std::string algorithm;
  StopReason stop_reason = StopReason::MaxIters;
  StoppingKind criterion_kind = StoppingKind::LambdaDiff;
  double epsilon = 0.0;
  double initial_lambda = 0.0;
  double final_lambda = 0.0;
  std::vector<double> eigenvector;
  std::vector<StepRecord> steps;
  std::string note;
  std::optional<double> reference;
  ErrorMode error_mode = ErrorMode::Absolute;
  // Informational only: not serialized and not part of equality.
  double wall_seconds = 0.0;

  bool converged() const { return stop_reason != StopReason::MaxIters; }

  bool operator==(const ConvergenceReport& o) const {
    return algorithm == o.algorithm && stop_reason == o.stop_reason &&
           criterion_kind == o.criterion_kind && epsilon == o.epsilon &&
           initial_lambda == o.initial_lambda && final_lambda == o.final_lambda &&
           eigenvector == o.eigenvector && steps == o.steps && note == o.note &&
           reference == o.reference && error_mode == o.error_mode;
  }
};

// Per-step convergence orders for an error sequence e_0..e_{L-1}:
// alpha[i] = (log e_{i+1} - log e_i) / (log e_i - log e_{i-1}) for interior i.
// An interior entry touching any error below the floor is suppressed and
// flagged in `masked` (orders at the machine floor are noise).
struct OrderEstimate {
  std::vector<std::optional<double>> alpha;
  std::vector<std::uint8_t> masked;
  double floor = 0.0;
};

const char* to_string(StopReason r);
const char* to_string(StoppingKind k);
const char* to_string(ErrorMode m);

}  // namespace perron

#endif
