#ifndef PERRON_LINSOLVE_HPP
#define PERRON_LINSOLVE_HPP

#include <variant>
#include <vector>

#include "perron/grid.hpp"

namespace perron {

// A 1-norm condition estimate above this attaches a non-fatal warning flag
// to the factorization.
constexpr double kConditionWarnThreshold = 1e15;

namespace detail {

// Dense LU with partial pivoting, row-major in-place storage.
struct DenseLu {
  int n = 0;
  std::vector<double> lu;
  std::vector<int> piv;
  double pivot_growth = 0.0;
  double cond1 = 0.0;
};

// LU of a tridiagonal matrix with partial pivoting; row swaps put a second
// superdiagonal into play.
struct TridiagLu {
  int n = 0;
  std::vector<double> d, u1, u2, l;
  std::vector<char> swapped;
};

// Cholesky of an SPD banded matrix, lower band storage:
// band[dd * n + j] = L(j + dd, j).
struct BandCholesky {
  int n = 0;
  int bw = 0;
  std::vector<double> band;
};

// LU of a general banded matrix with partial pivoting, LAPACK-style column
// band storage widened for pivot fill: column j keeps rows
// [j - 2 bw, j + bw] at slot i - j + 2 bw.
struct BandLu {
  int n = 0;
  int bw = 0;
  std::vector<double> ab;
  std::vector<int> piv;
};

}  // namespace detail

// A factored linear system. Valid only for the exact matrix it was built
// from; solves are pure (bitwise repeatable) and never modify the object.
class Factorization {
public:
  int dimension() const;

  // Dense factorizations only; zero otherwise.
  double condition_estimate() const;
  double pivot_growth() const;
  bool ill_conditioned() const;

  std::vector<double> solve(const std::vector<double>& b) const;
  // x with M^T x = b; dense only (used by the condition estimator and
  // available for tests).
  std::vector<double> solve_transposed(const std::vector<double>& b) const;

  using Storage = std::variant<detail::DenseLu, detail::TridiagLu,
                               detail::BandCholesky, detail::BandLu>;
  explicit Factorization(Storage s) : s_(std::move(s)) {}

private:
  Storage s_;
};

// Throws SingularMatrixError on an exactly singular matrix. A condition
// estimate above kConditionWarnThreshold only sets the warning flag.
Factorization factor_dense(const std::vector<double>& a, int n);

// (lower, diag, upper) of sizes n-1, n, n-1. Throws SingularMatrixError.
Factorization factor_tridiagonal(const std::vector<double>& lower,
                                 const std::vector<double>& diag,
                                 const std::vector<double>& upper);

// Cholesky of scale*S + diagonal_shift*I. The shifted stencil systems of the
// inverse-iteration family are SPD exactly when the shift stays above the
// principal eigenvalue, so a nonpositive pivot is reported as a shift
// collision (carrying `scale`).
Factorization factor_stencil(const StencilMatrix& s, double scale,
                             double diagonal_shift);

// Same matrix, general banded LU with partial pivoting. For shifted systems
// that are legitimately indefinite (Rayleigh shifts fall inside the
// spectrum). Throws SingularMatrixError on exact singularity.
Factorization factor_stencil_lu(const StencilMatrix& s, double scale,
                                double diagonal_shift);

}  // namespace perron

#endif
