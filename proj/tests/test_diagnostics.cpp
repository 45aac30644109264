#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "perron/diagnostics.hpp"
#include "perron/errors.hpp"
#include "perron/iteration.hpp"
#include "perron/operators.hpp"
#include "perron/vec.hpp"

using namespace perron;

TEST_CASE("order estimation: squaring and geometric sequences") {
  // alpha is step-aligned: alpha[i] spans errors i-1..i+1, endpoints empty.
  const OrderEstimate sq = estimate_order({1e-1, 1e-2, 1e-4, 1e-8}, 1e-13);
  REQUIRE(sq.alpha.size() == 4);
  CHECK(!sq.alpha[0].has_value());
  CHECK(*sq.alpha[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(*sq.alpha[2] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(!sq.alpha[3].has_value());

  const OrderEstimate geo = estimate_order({1e-1, 1e-2, 1e-3, 1e-4}, 1e-13);
  CHECK(*geo.alpha[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*geo.alpha[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("order estimation: input validation") {
  CHECK_THROWS_AS(estimate_order({1e-1, 1e-2}, 1e-13), InsufficientDataError);
  CHECK_THROWS_AS(estimate_order({1e-1, -1e-2, 1e-3}, 1e-13), DomainError);
  CHECK_THROWS_AS(estimate_order({1e-1, 0.0, 1e-3}, 1e-13), DomainError);
}

TEST_CASE("order estimation: floor masking") {
  const OrderEstimate e = estimate_order({1e-1, 1e-2, 1e-4, 1e-15}, 1e-13);
  REQUIRE(e.alpha.size() == 4);
  CHECK(e.alpha[1].has_value());
  CHECK(!e.alpha[2].has_value());  // touches the 1e-15 outlier
  CHECK(e.masked[2] != 0);
  CHECK(e.masked[0] == 0);  // endpoints are absent, not masked
}

TEST_CASE("order estimation: scale invariance") {
  const std::vector<double> base = {3e-1, 4e-2, 2e-3, 6e-6, 4e-11};
  std::vector<double> scaled(base);
  for (double& x : scaled) x *= 3.14159;
  const OrderEstimate a = estimate_order(base, 0.0);
  const OrderEstimate b = estimate_order(scaled, 0.0);
  REQUIRE(a.alpha.size() == b.alpha.size());
  for (std::size_t i = 1; i + 1 < a.alpha.size(); ++i) {
    REQUIRE(a.alpha[i].has_value());
    CHECK(*a.alpha[i] == doctest::Approx(*b.alpha[i]).epsilon(1e-12));
  }
}

TEST_CASE("mesh order: exact h^2 sequence and the analytic square") {
  const std::vector<double> a = mesh_order(0.0, {{0.5, 0.25}, {0.25, 0.0625}});
  REQUIRE(a.size() == 1);
  CHECK(a[0] == doctest::Approx(2.0).epsilon(1e-12));

  const double limit = 0.050660591821168885;
  std::vector<std::pair<double, double>> pairs;
  for (double h : {0.25, 0.125, 0.0625})
    pairs.emplace_back(h, oracle::unit_square_lambda(h));
  const std::vector<double> alpha = mesh_order(limit, pairs);
  REQUIRE(alpha.size() == 2);
  // The discrete eigenvalue approaches the continuum limit like h^2 with a
  // positive next-order term, so the orders come down toward 2.
  CHECK(alpha[0] > 2.0);
  CHECK(alpha[0] < 2.06);
  CHECK(alpha[1] > 2.0);
  CHECK(alpha[1] < alpha[0]);
}

TEST_CASE("mesh order: validation") {
  CHECK_THROWS_AS(mesh_order(0.0, {{0.5, 0.25}}), InsufficientDataError);
  CHECK_THROWS_AS(mesh_order(0.0, {{0.5, 0.25}, {0.5, 0.125}}), DomainError);
  CHECK_THROWS_AS(mesh_order(0.25, {{0.5, 0.25}, {0.25, 0.1}}), DomainError);
  CHECK_THROWS_AS(mesh_order(0.0, {{0.5, 0.25}, {-0.25, 0.1}}),
                  InvalidArgumentError);
}

TEST_CASE("reference eigenpair: 2x2 analytic") {
  const auto [lambda, v] = reference_eigenpair(dense_operator({2, 1, 1, 2}, 2));
  CHECK(lambda == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(v[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-7));
  CHECK(v[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-7));
  const CWBounds b = collatz_wielandt(dense_operator({2, 1, 1, 2}, 2), v);
  CHECK(b.gap() < 1e-14);
  CHECK(b.lower <= lambda);
  CHECK(lambda <= b.upper);
}

TEST_CASE("reference eigenpair: Hilbert values against the dense oracle") {
  const double l3 = reference_eigenpair(hilbert_matrix(3)).first;
  CHECK(l3 == doctest::Approx(1.4083189271236538).epsilon(1e-12));
  const double oracle3 =
      oracle::symmetric_eigenvalues(hilbert_matrix(3).dense().entries, 3).back();
  CHECK(l3 == doctest::Approx(oracle3).epsilon(1e-12));

  const double l5 = reference_eigenpair(hilbert_matrix(5)).first;
  const double oracle5 =
      oracle::symmetric_eigenvalues(hilbert_matrix(5).dense().entries, 5).back();
  CHECK(l5 == doctest::Approx(oracle5).epsilon(1e-12));
}

TEST_CASE("reference eigenpair: unit-square grids match the sine mode") {
  for (double h : {0.25, 1.0 / 16}) {
    const double lh = reference_eigenpair(inverse_laplacian(unit_square(h))).first;
    CHECK(lh == doctest::Approx(oracle::unit_square_lambda(h)).epsilon(1e-12));
  }
}

TEST_CASE("reference eigenpair: period-2 matrix never settles") {
  // Ones is not an eigenvector here, so the iterates oscillate forever.
  CHECK_THROWS_AS(reference_eigenpair(dense_operator({0, 2, 1, 0}, 2)),
                  NoConvergenceError);
}

TEST_CASE("attach errors and report orders") {
  ConvergenceReport rep;
  rep.algorithm = "variable-lambda-power-sup";
  rep.criterion_kind = StoppingKind::LambdaDiff;
  rep.epsilon = 1e-14;
  rep.final_lambda = 1.0;
  for (int n = 1; n <= 5; ++n) {
    StepRecord s;
    s.n = n;
    s.lambda = 1.0 + std::pow(10.0, -(1 << (n - 1)));  // 1e-1, 1e-2, 1e-4, ...
    rep.steps.push_back(s);
  }
  attach_reference_errors(rep, 1.0, ErrorMode::Relative);
  CHECK(rep.reference == 1.0);
  CHECK(*rep.steps[0].error == doctest::Approx(1e-1).epsilon(1e-12));
  CHECK(*rep.steps[3].error == doctest::Approx(1e-8).epsilon(1e-9));

  const OrderEstimate ord = report_orders(rep);
  REQUIRE(ord.alpha.size() == 5);
  CHECK(!ord.alpha[0].has_value());
  CHECK(ord.masked[0] == 0);
  CHECK(*ord.alpha[1] == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(*ord.alpha[2] == doctest::Approx(2.0).epsilon(1e-6));
  // Next interior touches 1e-16 < the relative floor 1e-13: masked.
  CHECK(!ord.alpha[3].has_value());
  CHECK(ord.masked[3] != 0);
  CHECK(!ord.alpha[4].has_value());
}

TEST_CASE("attach errors: relative mode needs a nonzero reference") {
  ConvergenceReport rep;
  StepRecord s;
  s.n = 1;
  s.lambda = 0.5;
  rep.steps.push_back(s);
  CHECK_THROWS_AS(attach_reference_errors(rep, 0.0, ErrorMode::Relative),
                  InvalidArgumentError);
  attach_reference_errors(rep, 0.0, ErrorMode::Absolute);
  CHECK(*rep.steps[0].error == 0.5);
}

TEST_CASE("emit: empty trace is a header-only CSV") {
  ConvergenceReport rep;
  rep.algorithm = "variable-lambda-power-sup";
  const std::string csv = emit_report(rep, ReportFormat::Csv);
  CHECK(csv == "n,lambda,error,order,criterion,residual\n");
}

TEST_CASE("emit: rows, blank orders, and order-column alignment") {
  ConvergenceReport rep;
  rep.algorithm = "power";
  rep.final_lambda = 2.0;
  for (int n = 1; n <= 3; ++n) {
    StepRecord s;
    s.n = n;
    s.lambda = 2.0 + 1.0 / n;
    s.criterion = 0.1 / n;
    rep.steps.push_back(s);
  }
  attach_reference_errors(rep, 2.0, ErrorMode::Absolute);
  const OrderEstimate ord = report_orders(rep);
  const std::string csv = emit_report(rep, ord, ReportFormat::Csv);

  std::vector<std::string> lines;
  std::string cur;
  for (char c : csv) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  REQUIRE(lines.size() == 4);
  CHECK(lines[1].substr(0, 2) == "1,");
  // One interior estimate; its newest error is row 3's, so rows 1 and 2
  // have blank order cells and row 3 has a filled one.
  CHECK(lines[1].find(",,") != std::string::npos);
  CHECK(lines[2].find(",,") != std::string::npos);
  CHECK(lines[3].find(",,") == std::string::npos);
  REQUIRE(ord.alpha.size() == 3);
  CHECK(!ord.alpha[0].has_value());
  CHECK(ord.alpha[1].has_value());
}

TEST_CASE("emit json round trips") {
  ConvergenceReport rep;
  rep.algorithm = "rayleigh";
  rep.stop_reason = StopReason::CriterionMet;
  rep.criterion_kind = StoppingKind::LambdaDiff;
  rep.epsilon = 1e-12;
  rep.initial_lambda = 2.71828;
  rep.final_lambda = 3.0000000000000004;
  rep.eigenvector = {0.70710678118654746, 0.70710678118654757};
  rep.note = "sample \"note\" with\nnewline";
  rep.reference = 3.0;
  rep.error_mode = ErrorMode::Relative;
  rep.wall_seconds = 1.25;  // must not survive the round trip
  for (int n = 1; n <= 3; ++n) {
    StepRecord s;
    s.n = n;
    s.lambda = 3.0 + std::pow(0.1, n);
    s.criterion = std::pow(0.1, n);
    if (n == 2) s.sc1_gap = 0.125;
    if (n == 3) s.residual = 1e-9;
    s.error = std::pow(0.1, n) / 3.0;
    rep.steps.push_back(s);
  }
  const std::string json = emit_report(rep, ReportFormat::Json);
  const ConvergenceReport back = parse_report_json(json);
  CHECK(back == rep);
  CHECK(back.wall_seconds == 0.0);
}

TEST_CASE("emit markdown shape") {
  ConvergenceReport rep;
  rep.algorithm = "power";
  StepRecord s;
  s.n = 1;
  s.lambda = 1.5;
  rep.steps.push_back(s);
  const std::string md = emit_report(rep, ReportFormat::Markdown);
  CHECK(md.rfind("# power", 0) == 0);
  CHECK(md.find("| n |") != std::string::npos);
  CHECK(md.find("| 1 |") != std::string::npos);
}

TEST_CASE("parse_report_json rejects malformed input") {
  CHECK_THROWS_AS(parse_report_json("{ not json"), ParseError);
  CHECK_THROWS_AS(parse_report_json("[1,2,3]"), ParseError);
}
