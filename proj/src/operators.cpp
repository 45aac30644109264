#include "perron/operators.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <utility>

#include "perron/errors.hpp"
#include "perron/vec.hpp"

namespace perron {
namespace {

void require_nonnegative(const std::vector<double>& xs, const char* what) {
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (!(xs[i] >= 0.0))
      throw InvalidArgumentError(std::string(what) + " has a negative or NaN entry at position " +
                                 std::to_string(i));
}

double uniform53(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

double uniform_open(std::mt19937_64& gen) {
  double u = uniform53(gen);
  while (u == 0.0) u = uniform53(gen);
  return u;
}

std::vector<double> tridiag_apply(const TridiagonalMatrix& m,
                                  const std::vector<double>& v) {
  const int n = m.n;
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) {
    double s = m.diag[i] * v[i];
    if (i > 0) s += m.off[i - 1] * v[i - 1];
    if (i < n - 1) s += m.off[i] * v[i + 1];
    w[i] = s;
  }
  return w;
}

}  // namespace

InverseLaplacian::InverseLaplacian(GridDomain domain)
    : domain_(std::move(domain)),
      stencil_(assemble(domain_)),
      base_(factor_stencil(stencil_, 1.0, 0.0)) {}

std::vector<double> InverseLaplacian::apply(const std::vector<double>& v) const {
  require_dimension(v.size(), static_cast<std::size_t>(stencil_.m), "vector");
  return base_.solve(v);
}

PositiveLinearOperator::PositiveLinearOperator(DenseMatrix m) : op_(std::move(m)) {}
PositiveLinearOperator::PositiveLinearOperator(TridiagonalMatrix m) : op_(std::move(m)) {}
PositiveLinearOperator::PositiveLinearOperator(InverseLaplacian op) : op_(std::move(op)) {}

OperatorKind PositiveLinearOperator::kind() const {
  if (std::holds_alternative<DenseMatrix>(op_)) return OperatorKind::Dense;
  if (std::holds_alternative<TridiagonalMatrix>(op_)) return OperatorKind::Tridiagonal;
  return OperatorKind::InverseLaplacian;
}

int PositiveLinearOperator::dimension() const {
  switch (kind()) {
    case OperatorKind::Dense: return std::get<DenseMatrix>(op_).n;
    case OperatorKind::Tridiagonal: return std::get<TridiagonalMatrix>(op_).n;
    default: return std::get<InverseLaplacian>(op_).dimension();
  }
}

const DenseMatrix& PositiveLinearOperator::dense() const {
  if (const auto* m = std::get_if<DenseMatrix>(&op_)) return *m;
  throw StateError("operator is not a dense matrix");
}

const TridiagonalMatrix& PositiveLinearOperator::tridiagonal() const {
  if (const auto* m = std::get_if<TridiagonalMatrix>(&op_)) return *m;
  throw StateError("operator is not tridiagonal");
}

const InverseLaplacian& PositiveLinearOperator::inverse_laplacian() const {
  if (const auto* m = std::get_if<InverseLaplacian>(&op_)) return *m;
  throw StateError("operator is not an inverse Laplacian");
}

PositiveLinearOperator hilbert_matrix(int n) {
  if (n < 1) throw DimensionError("Hilbert matrix needs dimension >= 1");
  DenseMatrix m;
  m.n = n;
  m.entries.resize(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      m.entries[static_cast<std::size_t>(i) * n + j] = 1.0 / (i + j + 1);
  return PositiveLinearOperator(std::move(m));
}

PositiveLinearOperator random_tridiagonal(int n, std::uint64_t seed) {
  if (n < 2) throw DimensionError("random tridiagonal matrix needs dimension >= 2");
  std::mt19937_64 gen(seed);
  TridiagonalMatrix m;
  m.n = n;
  m.seed = seed;
  m.diag.resize(n);
  m.off.resize(n - 1);
  for (int i = 0; i < n; ++i) m.diag[i] = 2.0 * uniform_open(gen);
  for (int i = 0; i < n - 1; ++i) m.off[i] = uniform_open(gen);
  return PositiveLinearOperator(std::move(m));
}

PositiveLinearOperator dense_operator(std::vector<double> entries, int n) {
  if (n < 1) throw DimensionError("dense operator needs dimension >= 1");
  if (entries.size() != static_cast<std::size_t>(n) * n)
    throw DimensionError("dense operator storage has " + std::to_string(entries.size()) +
                         " entries, expected " +
                         std::to_string(static_cast<std::size_t>(n) * n));
  require_nonnegative(entries, "dense operator");
  DenseMatrix m;
  m.n = n;
  m.entries = std::move(entries);
  return PositiveLinearOperator(std::move(m));
}

PositiveLinearOperator tridiagonal_operator(std::vector<double> diag,
                                            std::vector<double> off) {
  const int n = static_cast<int>(diag.size());
  if (n < 2) throw DimensionError("tridiagonal operator needs dimension >= 2");
  require_dimension(off.size(), diag.size() - 1, "off-diagonal");
  require_nonnegative(diag, "diagonal");
  require_nonnegative(off, "off-diagonal");
  TridiagonalMatrix m;
  m.n = n;
  m.diag = std::move(diag);
  m.off = std::move(off);
  return PositiveLinearOperator(std::move(m));
}

PositiveLinearOperator inverse_laplacian(GridDomain domain) {
  return PositiveLinearOperator(InverseLaplacian(std::move(domain)));
}

PositiveLinearOperator load_dense_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file: " + path, 0);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty matrix file: " + path, 1);
  int n = 0;
  {
    std::istringstream ss(line);
    std::string extra;
    if (!(ss >> n) || n < 1 || (ss >> extra))
      throw ParseError("expected a single positive dimension on line 1", 1);
  }
  std::vector<double> entries;
  entries.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    if (!std::getline(in, line))
      throw ParseError("expected " + std::to_string(n) + " matrix rows, got " +
                           std::to_string(i), i + 1);
    std::istringstream ss(line);
    double x;
    int count = 0;
    while (ss >> x) {
      entries.push_back(x);
      ++count;
    }
    std::string extra;
    ss.clear();
    if (ss >> extra || count != n)
      throw ParseError("row " + std::to_string(i + 1) + " has " + std::to_string(count) +
                           " readable entries, expected " + std::to_string(n), i + 2);
  }
  return dense_operator(std::move(entries), n);
}

void save_dense_text(const DenseMatrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open matrix file for writing: " + path, 0);
  out << m.n << "\n";
  char buf[40];
  for (int i = 0; i < m.n; ++i) {
    for (int j = 0; j < m.n; ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", m.entries[static_cast<std::size_t>(i) * m.n + j]);
      out << buf << (j + 1 < m.n ? " " : "");
    }
    out << "\n";
  }
  if (!out) throw ParseError("write failed: " + path, 0);
}

std::vector<double> apply(const PositiveLinearOperator& op,
                          const std::vector<double>& v) {
  require_dimension(v.size(), static_cast<std::size_t>(op.dimension()), "vector");
  switch (op.kind()) {
    case OperatorKind::Dense: {
      const DenseMatrix& m = op.dense();
      std::vector<double> w(m.n);
      for (int i = 0; i < m.n; ++i)
        w[i] = kahan_dot(&m.entries[static_cast<std::size_t>(i) * m.n], v.data(), v.size());
      return w;
    }
    case OperatorKind::Tridiagonal:
      return tridiag_apply(op.tridiagonal(), v);
    default:
      return op.inverse_laplacian().apply(v);
  }
}

std::vector<double> ShiftedSystem::solve(const std::vector<double>& b,
                                         std::vector<double>* t_of_w) const {
  if (kind_ != OperatorKind::InverseLaplacian) return f_.solve(b);
  std::vector<double> z = f_.solve(b);
  std::vector<double> w = apply_stencil(*stencil_, z);
  if (t_of_w) *t_of_w = std::move(z);
  return w;
}

namespace {

ShiftedSystem make_shifted(const PositiveLinearOperator& op, double lambda,
                           bool definite) {
  try {
    switch (op.kind()) {
      case OperatorKind::Dense: {
        const DenseMatrix& m = op.dense();
        std::vector<double> a(m.entries.size());
        for (std::size_t k = 0; k < a.size(); ++k) a[k] = -m.entries[k];
        for (int i = 0; i < m.n; ++i) a[static_cast<std::size_t>(i) * m.n + i] += lambda;
        return ShiftedSystem(lambda, OperatorKind::Dense, factor_dense(a, m.n),
                             std::nullopt);
      }
      case OperatorKind::Tridiagonal: {
        const TridiagonalMatrix& m = op.tridiagonal();
        std::vector<double> lower(m.off.size()), diag(m.diag.size()), upper(m.off.size());
        for (std::size_t i = 0; i < m.off.size(); ++i) lower[i] = upper[i] = -m.off[i];
        for (std::size_t i = 0; i < m.diag.size(); ++i) diag[i] = lambda - m.diag[i];
        return ShiftedSystem(lambda, OperatorKind::Tridiagonal,
                             factor_tridiagonal(lower, diag, upper), std::nullopt);
      }
      default: {
        const InverseLaplacian& t = op.inverse_laplacian();
        Factorization f = definite
                              ? factor_stencil(t.stencil(), lambda, -1.0)
                              : factor_stencil_lu(t.stencil(), lambda, -1.0);
        return ShiftedSystem(lambda, OperatorKind::InverseLaplacian, std::move(f),
                             t.stencil());
      }
    }
  } catch (const SingularMatrixError& e) {
    throw ShiftCollisionError("shifted system is singular: " + std::string(e.what()),
                              lambda);
  }
  throw StateError("unreachable operator kind");
}

}  // namespace

ShiftedSystem shifted_factor(const PositiveLinearOperator& op, double lambda) {
  return make_shifted(op, lambda, true);
}

ShiftedSystem shifted_factor_indefinite(const PositiveLinearOperator& op,
                                        double lambda) {
  return make_shifted(op, lambda, false);
}

std::vector<double> shifted_solve(const PositiveLinearOperator& op, double lambda,
                                  const std::vector<double>& v) {
  std::vector<double> w = shifted_factor(op, lambda).solve(v);
  const double tol = kPositivityTolerance * norm_inf(w);
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i] < -tol)
      throw PositivityError("shifted solve produced entry " + std::to_string(w[i]) +
                            " at position " + std::to_string(i) +
                            "; the shift is at or below the principal eigenvalue");
  return w;
}

}  // namespace perron
