#ifndef PERRON_OPERATORS_HPP
#define PERRON_OPERATORS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "perron/grid.hpp"
#include "perron/linsolve.hpp"

namespace perron {

enum class OperatorKind { Dense, Tridiagonal, InverseLaplacian };

// Row-major nonnegative square matrix. Primitivity (some power entrywise
// positive) is a documented precondition of the iteration algorithms, not
// something this type verifies; for imprimitive matrices the iterations may
// cycle or converge to a non-principal value.
struct DenseMatrix {
  int n = 0;
  std::vector<double> entries;
};

// Symmetric tridiagonal matrix; `off` is used as both sub- and superdiagonal.
struct TridiagonalMatrix {
  int n = 0;
  std::uint64_t seed = 0;  // generator seed when randomly built, else 0
  std::vector<double> diag;
  std::vector<double> off;
};

// T_h = (-Delta_h)^{-1} with zero Dirichlet data on a grid domain. Holds a
// Cholesky factorization of the stencil matrix so apply() is a banded solve.
class InverseLaplacian {
public:
  explicit InverseLaplacian(GridDomain domain);

  const GridDomain& domain() const { return domain_; }
  const StencilMatrix& stencil() const { return stencil_; }
  int dimension() const { return stencil_.m; }

  // T_h v: solves (-Delta_h) u = v.
  std::vector<double> apply(const std::vector<double>& v) const;

private:
  GridDomain domain_;
  StencilMatrix stencil_;
  Factorization base_;
};

// Value-type facade over the three concrete operator kinds. Immutable after
// construction; apply and the shifted solves are pure.
class PositiveLinearOperator {
public:
  explicit PositiveLinearOperator(DenseMatrix m);
  explicit PositiveLinearOperator(TridiagonalMatrix m);
  explicit PositiveLinearOperator(InverseLaplacian op);

  OperatorKind kind() const;
  int dimension() const;

  const DenseMatrix& dense() const;                 // StateError if wrong kind
  const TridiagonalMatrix& tridiagonal() const;     // StateError if wrong kind
  const InverseLaplacian& inverse_laplacian() const;  // StateError if wrong kind

private:
  std::variant<DenseMatrix, TridiagonalMatrix, InverseLaplacian> op_;
};

// entries(i, j) = 1/(i + j + 1), 0-based; symmetric, entrywise positive.
PositiveLinearOperator hilbert_matrix(int n);

// Symmetric tridiagonal with diagonal iid U(0,2) and off-diagonal iid U(0,1),
// drawn from mt19937_64(seed) as 53-bit uniforms, diagonal first, each draw
// repeated on an exact zero so the open-interval ranges hold. Bitwise
// reproducible for a given seed.
PositiveLinearOperator random_tridiagonal(int n, std::uint64_t seed);

PositiveLinearOperator dense_operator(std::vector<double> entries, int n);
PositiveLinearOperator tridiagonal_operator(std::vector<double> diag,
                                            std::vector<double> off);
PositiveLinearOperator inverse_laplacian(GridDomain domain);

// Plain-text dense format: first line "n", then n rows of n whitespace
// separated decimals. Writer emits 17 significant digits.
PositiveLinearOperator load_dense_text(const std::string& path);
void save_dense_text(const DenseMatrix& m, const std::string& path);

// A v (matrix kinds) or T_h v (grid kind).
std::vector<double> apply(const PositiveLinearOperator& op,
                          const std::vector<double>& v);

// Factored shifted system (lambda*I - op). For the grid kind the factored
// matrix is (lambda*A_h - I): solving it against b and applying the stencil
// gives w with (lambda - T_h) w = b, and the intermediate solution is T_h w
// at no extra cost.
class ShiftedSystem {
public:
  double shift() const { return lambda_; }
  int dimension() const { return f_.dimension(); }

  // Solves (shift*I - op) w = b. For the grid kind, *t_of_w (if given)
  // receives T_h w; matrix kinds leave it untouched (apply() is cheap there).
  std::vector<double> solve(const std::vector<double>& b,
                            std::vector<double>* t_of_w = nullptr) const;

  ShiftedSystem(double lambda, OperatorKind kind, Factorization f,
                std::optional<StencilMatrix> stencil)
      : lambda_(lambda), kind_(kind), f_(std::move(f)),
        stencil_(std::move(stencil)) {}

private:
  double lambda_;
  OperatorKind kind_;
  Factorization f_;
  std::optional<StencilMatrix> stencil_;
};

// Shift above the spectrum assumed; a singular or (grid) indefinite system
// throws ShiftCollisionError carrying lambda.
ShiftedSystem shifted_factor(const PositiveLinearOperator& op, double lambda);

// Same system, but factored so that shifts inside the spectrum are
// acceptable (Rayleigh iteration). Only exact singularity throws.
ShiftedSystem shifted_factor_indefinite(const PositiveLinearOperator& op,
                                        double lambda);

// One-shot solve of (lambda*I - op) w = v with the positivity check: entries
// below -1e-12*max|w| throw PositivityError.
std::vector<double> shifted_solve(const PositiveLinearOperator& op,
                                  double lambda, const std::vector<double>& v);

constexpr double kPositivityTolerance = 1e-12;

}  // namespace perron

#endif
