#ifndef PERRON_DIAGNOSTICS_HPP
#define PERRON_DIAGNOSTICS_HPP

#include <string>
#include <utility>
#include <vector>

#include "perron/operators.hpp"
#include "perron/report.hpp"

namespace perron {

// Default masking floor for order estimates: errors below
// 1e-13 * max(1, |lambda_ref|) are machine noise and poison the log ratios.
double default_order_floor(double lambda_ref);

// Successive log-difference convergence orders of a positive error
// sequence; entries touching any error below the floor (or a flat pair of
// errors) are masked. Needs at least 3 errors.
OrderEstimate estimate_order(const std::vector<double>& errors, double floor);

// Mesh-refinement orders from (h, lambda_h) pairs against a reference:
// alpha_k = (log|ref - l_k| - log|ref - l_{k+1}|) / (log h_k - log h_{k+1}).
std::vector<double> mesh_order(double lambda_ref,
                               const std::vector<std::pair<double, double>>& pairs);

// Power iteration from the ones vector until the Collatz-Wielandt gap drops
// below 1e-14, so the returned lambda brackets the principal eigenvalue to
// that width. Up to 1e6 steps; NoConvergenceError beyond that (tiny spectral
// gap, e.g. random tridiagonal instances).
std::pair<double, std::vector<double>> reference_eigenpair(
    const PositiveLinearOperator& op);

// Fills each step's error column with |lambda_n - ref| (absolute) or
// |lambda_n - ref| / |ref| (relative) and stamps the reference on the report.
void attach_reference_errors(ConvergenceReport& report, double lambda_ref,
                             ErrorMode mode);

// Orders aligned with the report's error column, using the default floor.
OrderEstimate report_orders(const ConvergenceReport& report);

enum class ReportFormat { Csv, Markdown, Json };

// Deterministic rendering. Tables carry 6 significant digits; JSON numbers
// 17 (exact round trip). Wall time is never serialized. In the tabular
// formats the order printed on a row is the estimate whose newest error is
// that row's.
std::string emit_report(const ConvergenceReport& report, ReportFormat format);
std::string emit_report(const ConvergenceReport& report,
                        const OrderEstimate& order, ReportFormat format);

ConvergenceReport parse_report_json(const std::string& text);

}  // namespace perron

#endif
