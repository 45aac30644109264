#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "perron/errors.hpp"
#include "perron/experiment.hpp"

using namespace perron;

namespace {

std::string fixture(const char* name) {
  return std::string(TEST_DATA_DIR) + "/" + name;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  return lines;
}

ExperimentSpec spec_for(const std::string& problem) {
  ExperimentSpec s;
  s.problem = parse_problem(problem);
  return s;
}

}  // namespace

TEST_CASE("problem parsing") {
  CHECK(parse_problem("hilbert:50").kind == ProblemKind::Hilbert);
  CHECK(parse_problem("hilbert:50").n == 50);
  CHECK(parse_problem("tridiagonal:1000").n == 1000);
  CHECK(parse_problem("matrix-file:/tmp/a.txt").path == "/tmp/a.txt");
  CHECK(parse_problem("unit-square:0.25").h == 0.25);
  CHECK(parse_problem("unit-square:1/16").h == doctest::Approx(0.0625));
  CHECK(parse_problem("l-shape:1/8").kind == ProblemKind::LShape);
  CHECK(parse_problem("mask-file:dom.mask").kind == ProblemKind::MaskFile);

  CHECK_THROWS_AS(parse_problem("hilbert"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_problem("hilbert:"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_problem("hilbert:x"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_problem("hilbert:-3"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_problem("unit-square:0"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_problem("unit-square:1/0"), InvalidArgumentError);
  CHECK_THROWS_AS(parse_problem("mystery:3"), InvalidArgumentError);
}

TEST_CASE("fractional and decimal spacings build the same domain") {
  const PositiveLinearOperator a =
      build_operator(parse_problem("unit-square:1/16"), kDefaultSeed);
  const PositiveLinearOperator b =
      build_operator(parse_problem("unit-square:0.0625"), kDefaultSeed);
  CHECK(a.dimension() == 225);
  CHECK(b.dimension() == 225);
}

TEST_CASE("start vectors") {
  const PositiveLinearOperator h3 = build_operator(parse_problem("hilbert:3"), 1);

  ExperimentSpec ones = spec_for("hilbert:3");
  CHECK(build_v0(ones, h3) == std::vector<double>{1, 1, 1});

  ExperimentSpec file = spec_for("hilbert:3");
  file.v0 = V0Kind::File;
  file.v0_path = fixture("ones3.txt");
  CHECK(build_v0(file, h3) == std::vector<double>{1, 1, 1});

  const PositiveLinearOperator h4 = build_operator(parse_problem("hilbert:4"), 1);
  CHECK_THROWS_AS(build_v0(file, h4), DimensionError);

  file.v0_path = fixture("bad_token.txt");
  CHECK_THROWS_AS(build_v0(file, h3), ParseError);
  file.v0_path = fixture("no-such-file.txt");
  CHECK_THROWS_AS(build_v0(file, h3), ParseError);

  ExperimentSpec tone = spec_for("unit-square:1/2");
  tone.v0 = V0Kind::TOne;
  const PositiveLinearOperator g =
      build_operator(tone.problem, kDefaultSeed);
  const std::vector<double> v = build_v0(tone, g);
  CHECK(v[0] == doctest::Approx(1.0 / 16).epsilon(1e-15));
}

TEST_CASE("kind-specific defaults are applied") {
  const RunOutcome grid = run_experiment(spec_for("unit-square:1/4"));
  CHECK(grid.report.algorithm == "variable-lambda-power-mu");
  CHECK(grid.report.criterion_kind == StoppingKind::SC2SolveRatioGap);
  CHECK(grid.exit_code == 0);

  const RunOutcome mat = run_experiment(spec_for("hilbert:8"));
  CHECK(mat.report.algorithm == "variable-lambda-power-sup");
  CHECK(mat.report.criterion_kind == StoppingKind::LambdaDiff);
  CHECK(mat.exit_code == 0);
}

TEST_CASE("spec validation errors") {
  ExperimentSpec tone_matrix = spec_for("hilbert:4");
  tone_matrix.v0 = V0Kind::TOne;
  tone_matrix.v0_set = true;
  CHECK_THROWS_AS(run_experiment(tone_matrix), InvalidArgumentError);

  ExperimentSpec quick_matrix = spec_for("hilbert:4");
  quick_matrix.epsilon_quick = true;
  quick_matrix.epsilon_set = true;
  CHECK_THROWS_AS(run_experiment(quick_matrix), InvalidArgumentError);

  ExperimentSpec no_shift = spec_for("hilbert:4");
  no_shift.algo = AlgorithmKind::FixedShift;
  CHECK_THROWS_AS(run_experiment(no_shift), InvalidArgumentError);

  ExperimentSpec stray_shift = spec_for("hilbert:4");
  stray_shift.shift = 2.5;
  stray_shift.shift_set = true;
  CHECK_THROWS_AS(run_experiment(stray_shift), InvalidArgumentError);
}

TEST_CASE("grid quick tolerance is h^2/10") {
  ExperimentSpec s = spec_for("unit-square:1/4");
  s.epsilon_quick = true;
  s.epsilon_set = true;
  const RunOutcome out = run_experiment(s);
  CHECK(out.report.epsilon == doctest::Approx(0.00625).epsilon(1e-15));
  CHECK(out.exit_code == 0);
  CHECK(out.report.steps.size() <= 2);
}

TEST_CASE("grid solve example: h = 1/16 converges in a handful of steps") {
  ExperimentSpec s = spec_for("unit-square:0.0625");
  s.v0 = V0Kind::TOne;
  s.v0_set = true;
  s.criterion = StoppingKind::SC2SolveRatioGap;
  s.criterion_set = true;
  s.epsilon = 1e-14;
  s.epsilon_set = true;
  const RunOutcome out = run_experiment(s);
  CHECK(out.exit_code == 0);
  CHECK(out.report.steps.size() <= 5);
  CHECK(out.report.final_lambda ==
        doctest::Approx(oracle::unit_square_lambda(0.0625)).epsilon(1e-10));
}

TEST_CASE("fixed-shift runs carry their shift") {
  ExperimentSpec s = spec_for("hilbert:6");
  s.algo = AlgorithmKind::FixedShift;
  s.shift = 2.0;
  s.shift_set = true;
  const RunOutcome out = run_experiment(s);
  CHECK(out.report.algorithm == "fixed-shift-power");
  CHECK(out.exit_code == 0);
}

TEST_CASE("tridiagonal problems skip the power reference") {
  ExperimentSpec s = spec_for("tridiagonal:50");
  const RunOutcome out = run_experiment(s);
  CHECK(out.exit_code == 0);
  CHECK(!out.report.reference.has_value());
  for (const StepRecord& st : out.report.steps)
    CHECK(!st.error.has_value());
  CHECK(out.orders.alpha.empty());
}

TEST_CASE("matrix files run end to end") {
  ExperimentSpec s;
  s.problem = parse_problem("matrix-file:" + fixture("hilbert3.txt"));
  const RunOutcome out = run_experiment(s);
  CHECK(out.exit_code == 0);
  CHECK(out.report.final_lambda ==
        doctest::Approx(1.4083189271236538).epsilon(1e-12));
  CHECK(out.report.reference.has_value());
}

TEST_CASE("bounds line formatting") {
  CHECK(bounds_line(spec_for("hilbert:3")) == "0.783333 1.833333");
}

TEST_CASE("identical specs render byte-identical reports") {
  ExperimentSpec s = spec_for("unit-square:1/6");
  s.output = ReportFormat::Json;
  const RunOutcome a = run_experiment(s);
  const RunOutcome b = run_experiment(s);
  CHECK(a.text == b.text);
  CHECK(a.report == b.report);
}

TEST_CASE("table id parsing") {
  CHECK(table_from_string("matrix") == TableId::Matrix);
  CHECK(table_from_string("mesh-error") == TableId::MeshError);
  CHECK(table_from_string("step-counts") == TableId::StepCounts);
  CHECK(table_from_string("grid-order") == TableId::GridOrder);
  CHECK(table_from_string("rayleigh-compare") == TableId::RayleighCompare);
  CHECK_THROWS_AS(table_from_string("nope"), InvalidArgumentError);
}

TEST_CASE("hilbert(1000) full run matches the published trace") {
  ExperimentSpec s = spec_for("hilbert:1000");
  s.criterion = StoppingKind::LambdaDiff;
  s.criterion_set = true;
  s.epsilon = 1e-14;
  s.epsilon_set = true;
  const RunOutcome out = run_experiment(s);

  REQUIRE(out.report.steps.size() == 8);
  CHECK(out.exit_code == 0);
  CHECK(out.report.stop_reason == StopReason::ShiftCollision);
  REQUIRE(out.report.reference.has_value());

  const double expected[] = {0.993, 0.441, 0.160, 3.627e-2,
                             2.611e-3, 1.482e-5, 4.689e-10};
  for (int i = 0; i < 7; ++i) {
    REQUIRE(out.report.steps[i].error.has_value());
    CHECK(*out.report.steps[i].error ==
          doctest::Approx(expected[i]).epsilon(0.05));
  }
  CHECK(*out.report.steps[7].error < 1e-13);

  // Ratio-gap value at step 6.
  REQUIRE(out.report.steps[5].sc1_gap.has_value());
  CHECK(*out.report.steps[5].sc1_gap ==
        doctest::Approx(1.213e-4).epsilon(0.03));

  // Orders, late steps quadratic. alpha[i] spans errors i-1..i+1.
  const auto& alpha = out.orders.alpha;
  REQUIRE(alpha.size() == 8);
  CHECK(!alpha[0].has_value());
  const double orders[] = {1.246, 1.474, 1.767, 1.965, 2.004};
  for (int i = 0; i < 5; ++i) {
    REQUIRE(alpha[i + 1].has_value());
    CHECK(*alpha[i + 1] == doctest::Approx(orders[i]).epsilon(0.02));
  }
  CHECK(!alpha[6].has_value());  // floor step masked
  CHECK(out.orders.masked[6] != 0);
  CHECK(!alpha[7].has_value());

  // Quadratic error-ratio boundedness over the trustworthy window.
  const double ref = *out.report.reference;
  std::vector<double> abs_err;
  for (const StepRecord& st : out.report.steps)
    abs_err.push_back(*st.error * std::fabs(ref));
  double rmin = 1e300, rmax = 0.0;
  for (std::size_t i = 0; i + 1 < abs_err.size(); ++i) {
    if (abs_err[i] < 1e-10 || abs_err[i] > 1e-2) continue;
    if (abs_err[i + 1] < 1e-10 || abs_err[i + 1] > 1e-2) continue;
    const double r = abs_err[i + 1] / (abs_err[i] * abs_err[i]);
    rmin = std::min(rmin, r);
    rmax = std::max(rmax, r);
  }
  CHECK(rmax / rmin <= 1e3);
  CHECK(rmax >= rmin);  // window is non-empty
}

TEST_CASE("bench tables have the advertised shapes") {
  const std::string mesh = bench_table(TableId::MeshError, kDefaultSeed,
                                       ReportFormat::Csv);
  const std::vector<std::string> mesh_lines = split_lines(mesh);
  REQUIRE(mesh_lines.size() == 7);
  CHECK(mesh_lines[0] == "h,lambda_h,error,order");
  CHECK(mesh_lines[1].substr(0, 4) == "1/4,");
  CHECK(mesh_lines[6].substr(0, 5) == "1/50,");

  const std::string steps = bench_table(TableId::StepCounts, kDefaultSeed,
                                        ReportFormat::Csv);
  CHECK(split_lines(steps).size() == 13);  // 6 spacings x 2 tolerance modes

  const std::string orders = bench_table(TableId::GridOrder, kDefaultSeed,
                                         ReportFormat::Csv);
  const std::vector<std::string> order_lines = split_lines(orders);
  CHECK(order_lines.size() >= 10);
  CHECK(order_lines[0] == "h,n,lambda,error,order");

  const std::string rq = bench_table(TableId::RayleighCompare, kDefaultSeed,
                                     ReportFormat::Markdown);
  CHECK(rq.find("rayleigh") != std::string::npos);
  CHECK(rq.find("cw") != std::string::npos);
}
