#ifndef PERRON_EXPERIMENT_HPP
#define PERRON_EXPERIMENT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "perron/diagnostics.hpp"
#include "perron/iteration.hpp"
#include "perron/operators.hpp"

namespace perron {

// Seed for the shipped random-tridiagonal tables; any fixed value works, it
// just has to stay fixed so golden outputs are stable.
constexpr std::uint64_t kDefaultSeed = 1729;

enum class ProblemKind { Hilbert, Tridiagonal, MatrixFile, UnitSquare, LShape, MaskFile };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::Hilbert;
  int n = 0;           // matrix problems
  double h = 0.0;      // built-in grid problems
  std::string path;    // file-backed problems
  bool is_grid() const {
    return kind == ProblemKind::UnitSquare || kind == ProblemKind::LShape ||
           kind == ProblemKind::MaskFile;
  }
};

// "hilbert:N", "tridiagonal:N", "matrix-file:PATH", "unit-square:H",
// "l-shape:H", "mask-file:PATH"; H is a decimal or "1/N".
ProblemSpec parse_problem(const std::string& text);

enum class AlgorithmKind { CW, Rayleigh, Power, FixedShift };
enum class V0Kind { Ones, TOne, File };

// Unset fields get kind-appropriate defaults when the experiment runs:
// matrices iterate with the SupRatio update under the shift-difference rule
// from the ones vector; grids with the MuInf update under the solve-ratio
// rule from T*ones; epsilon 1e-14, or h^2/10 in quick mode (grids only).
struct ExperimentSpec {
  ProblemSpec problem;
  AlgorithmKind algo = AlgorithmKind::CW;
  std::uint64_t seed = kDefaultSeed;

  StoppingKind criterion = StoppingKind::LambdaDiff;
  bool criterion_set = false;
  double epsilon = 1e-14;
  bool epsilon_set = false;
  bool epsilon_quick = false;
  int max_iters = 200;

  ShiftUpdate update = ShiftUpdate::SupRatio;
  bool update_set = false;

  V0Kind v0 = V0Kind::Ones;
  bool v0_set = false;
  std::string v0_path;

  double shift = 0.0;
  bool shift_set = false;

  ReportFormat output = ReportFormat::Csv;
};

PositiveLinearOperator build_operator(const ProblemSpec& p, std::uint64_t seed);
std::vector<double> build_v0(const ExperimentSpec& spec,
                             const PositiveLinearOperator& op);

struct RunOutcome {
  ConvergenceReport report;
  OrderEstimate orders;
  std::string text;  // rendered in the requested output format
  int exit_code;     // 0 when the run converged, 2 on max-iters
};

// Build operator -> build v0 -> iterate -> attach reference errors where a
// power-method reference is practical -> render. Random tridiagonal
// problems skip the reference (their spectral gap makes power iteration
// hopeless); their tables use the converged value instead.
RunOutcome run_experiment(const ExperimentSpec& spec);

// "lower upper" of the Collatz-Wielandt bounds at v0, six decimal places.
std::string bounds_line(const ExperimentSpec& spec);

enum class TableId { Matrix, MeshError, StepCounts, GridOrder, RayleighCompare };

// Accepts "matrix", "mesh-error", "step-counts", "grid-order",
// "rayleigh-compare".
TableId table_from_string(const std::string& s);

// Reproduction sweeps over the built-in problems. Deterministic for a given
// (id, seed, format).
std::string bench_table(TableId id, std::uint64_t seed, ReportFormat format);

}  // namespace perron

#endif
