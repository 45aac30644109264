#include "perron/linsolve.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>

#include "perron/errors.hpp"
#include "perron/vec.hpp"

namespace perron {
namespace {

using detail::BandCholesky;
using detail::BandLu;
using detail::DenseLu;
using detail::TridiagLu;

double norm1_vec(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += std::fabs(v);
  return s;
}

std::vector<double> dense_solve(const DenseLu& f, std::vector<double> x) {
  const int n = f.n;
  for (int k = 0; k < n - 1; ++k)
    if (f.piv[k] != k) std::swap(x[k], x[f.piv[k]]);
  for (int i = 1; i < n; ++i) {
    double acc = x[i];
    for (int k = 0; k < i; ++k) acc -= f.lu[static_cast<std::size_t>(i) * n + k] * x[k];
    x[i] = acc;
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = x[i];
    const double* row = &f.lu[static_cast<std::size_t>(i) * n];
    for (int k = i + 1; k < n; ++k) acc -= row[k] * x[k];
    x[i] = acc / row[i];
  }
  return x;
}

std::vector<double> dense_solve_transposed(const DenseLu& f, std::vector<double> x) {
  // M^T = (P^T L U)^T = U^T L^T P, so forward with U^T, back with L^T,
  // then undo the row permutation.
  const int n = f.n;
  for (int i = 0; i < n; ++i) {
    double acc = x[i];
    for (int k = 0; k < i; ++k) acc -= f.lu[static_cast<std::size_t>(k) * n + i] * x[k];
    x[i] = acc / f.lu[static_cast<std::size_t>(i) * n + i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = x[i];
    for (int k = i + 1; k < n; ++k) acc -= f.lu[static_cast<std::size_t>(k) * n + i] * x[k];
    x[i] = acc;
  }
  for (int k = n - 2; k >= 0; --k)
    if (f.piv[k] != k) std::swap(x[k], x[f.piv[k]]);
  return x;
}

// Hager's 1-norm estimator for ||M^{-1}||_1, using the factored solves.
double estimate_inverse_norm1(const DenseLu& f) {
  const int n = f.n;
  std::vector<double> x(n, 1.0 / n);
  double est = 0.0;
  for (int iter = 0; iter < 5; ++iter) {
    std::vector<double> y = dense_solve(f, x);
    est = norm1_vec(y);
    std::vector<double> xi(n);
    for (int i = 0; i < n; ++i) xi[i] = (y[i] >= 0.0) ? 1.0 : -1.0;
    std::vector<double> z = dense_solve_transposed(f, std::move(xi));
    int j = 0;
    for (int i = 1; i < n; ++i)
      if (std::fabs(z[i]) > std::fabs(z[j])) j = i;
    if (iter > 0 && std::fabs(z[j]) <= dot(z, x)) break;
    std::fill(x.begin(), x.end(), 0.0);
    x[j] = 1.0;
  }
  return est;
}

std::vector<double> tridiag_solve(const TridiagLu& f, std::vector<double> x) {
  const int n = f.n;
  for (int i = 0; i < n - 1; ++i) {
    if (f.swapped[i]) std::swap(x[i], x[i + 1]);
    x[i + 1] -= f.l[i] * x[i];
  }
  x[n - 1] /= f.d[n - 1];
  if (n >= 2) x[n - 2] = (x[n - 2] - f.u1[n - 2] * x[n - 1]) / f.d[n - 2];
  for (int i = n - 3; i >= 0; --i)
    x[i] = (x[i] - f.u1[i] * x[i + 1] - f.u2[i] * x[i + 2]) / f.d[i];
  return x;
}

std::vector<double> band_chol_solve(const BandCholesky& f, std::vector<double> x) {
  const int n = f.n;
  const int bw = f.bw;
  const double* band = f.band.data();
  for (int i = 0; i < n; ++i) {
    double acc = x[i];
    const int k0 = std::max(0, i - bw);
    for (int k = k0; k < i; ++k) acc -= band[static_cast<std::size_t>(i - k) * n + k] * x[k];
    x[i] = acc / band[i];
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = x[i];
    const int k1 = std::min(n - 1, i + bw);
    for (int k = i + 1; k <= k1; ++k) acc -= band[static_cast<std::size_t>(k - i) * n + i] * x[k];
    x[i] = acc / band[i];
  }
  return x;
}

std::vector<double> band_lu_solve(const BandLu& f, std::vector<double> x) {
  const int n = f.n;
  const int bw = f.bw;
  const int ld = 3 * bw + 1;
  for (int k = 0; k < n - 1; ++k) {
    if (f.piv[k] != k) std::swap(x[k], x[f.piv[k]]);
    const int iend = std::min(n - 1, k + bw);
    for (int i = k + 1; i <= iend; ++i)
      x[i] -= f.ab[static_cast<std::size_t>(k) * ld + (i - k + 2 * bw)] * x[k];
  }
  for (int i = n - 1; i >= 0; --i) {
    double acc = x[i];
    const int jend = std::min(n - 1, i + 2 * bw);
    for (int j = i + 1; j <= jend; ++j)
      acc -= f.ab[static_cast<std::size_t>(j) * ld + (i - j + 2 * bw)] * x[j];
    x[i] = acc / f.ab[static_cast<std::size_t>(i) * ld + 2 * bw];
  }
  return x;
}

// scale*S.value + diagonal contribution at (i, j).
void fill_band_from_stencil(const StencilMatrix& s, double scale,
                            double diagonal_shift, int bw,
                            int rows_per_col, int diag_slot,
                            std::vector<double>& store, bool column_major) {
  // column_major: store[j * rows_per_col + (i - j + diag_slot)]
  // lower band:   store[(i - j) * s.m + j], only i >= j
  const double dv = scale * s.diag + diagonal_shift;
  const double ov = scale * s.offdiag;
  for (int i = 0; i < s.m; ++i) {
    if (column_major)
      store[static_cast<std::size_t>(i) * rows_per_col + diag_slot] = dv;
    else
      store[i] = dv;
    for (int j : s.neighbors[i]) {
      if (j < 0) continue;
      if (column_major)
        store[static_cast<std::size_t>(j) * rows_per_col + (i - j + diag_slot)] = ov;
      else if (i > j)
        store[static_cast<std::size_t>(i - j) * s.m + j] = ov;
    }
  }
  (void)bw;
}

}  // namespace

int Factorization::dimension() const {
  return std::visit([](const auto& f) { return f.n; }, s_);
}

double Factorization::condition_estimate() const {
  if (const auto* f = std::get_if<DenseLu>(&s_)) return f->cond1;
  return 0.0;
}

double Factorization::pivot_growth() const {
  if (const auto* f = std::get_if<DenseLu>(&s_)) return f->pivot_growth;
  return 0.0;
}

bool Factorization::ill_conditioned() const {
  return condition_estimate() > kConditionWarnThreshold;
}

std::vector<double> Factorization::solve(const std::vector<double>& b) const {
  require_dimension(static_cast<int>(b.size()), dimension(), "right-hand side");
  return std::visit(
      [&b](const auto& f) -> std::vector<double> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, DenseLu>) return dense_solve(f, b);
        else if constexpr (std::is_same_v<T, TridiagLu>) return tridiag_solve(f, b);
        else if constexpr (std::is_same_v<T, BandCholesky>) return band_chol_solve(f, b);
        else return band_lu_solve(f, b);
      },
      s_);
}

std::vector<double> Factorization::solve_transposed(const std::vector<double>& b) const {
  require_dimension(static_cast<int>(b.size()), dimension(), "right-hand side");
  if (const auto* f = std::get_if<DenseLu>(&s_)) return dense_solve_transposed(*f, b);
  throw StateError("transposed solve is supported for dense factorizations only");
}

Factorization factor_dense(const std::vector<double>& a, int n) {
  if (n <= 0) throw InvalidArgumentError("matrix dimension must be positive");
  if (a.size() != static_cast<std::size_t>(n) * n)
    throw DimensionError("dense matrix storage has " + std::to_string(a.size()) +
                         " entries, expected " + std::to_string(static_cast<std::size_t>(n) * n));
  DenseLu f;
  f.n = n;
  f.lu = a;
  f.piv.assign(n > 1 ? n - 1 : 0, 0);

  double max_a = 0.0;
  double norm1_a = 0.0;
  for (int j = 0; j < n; ++j) {
    double col = 0.0;
    for (int i = 0; i < n; ++i) {
      const double v = std::fabs(a[static_cast<std::size_t>(i) * n + j]);
      col += v;
      if (v > max_a) max_a = v;
    }
    if (col > norm1_a) norm1_a = col;
  }

  for (int k = 0; k < n - 1; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::fabs(f.lu[static_cast<std::size_t>(i) * n + k]) >
          std::fabs(f.lu[static_cast<std::size_t>(p) * n + k]))
        p = i;
    const double pivot = f.lu[static_cast<std::size_t>(p) * n + k];
    if (pivot == 0.0)
      throw SingularMatrixError("zero pivot in column " + std::to_string(k));
    f.piv[k] = p;
    if (p != k)
      for (int j = 0; j < n; ++j)
        std::swap(f.lu[static_cast<std::size_t>(k) * n + j],
                  f.lu[static_cast<std::size_t>(p) * n + j]);
    const double* rowk = &f.lu[static_cast<std::size_t>(k) * n];
    for (int i = k + 1; i < n; ++i) {
      double* rowi = &f.lu[static_cast<std::size_t>(i) * n];
      const double m = rowi[k] / rowk[k];
      rowi[k] = m;
      for (int j = k + 1; j < n; ++j) rowi[j] -= m * rowk[j];
    }
  }
  if (f.lu[static_cast<std::size_t>(n - 1) * n + (n - 1)] == 0.0)
    throw SingularMatrixError("zero pivot in column " + std::to_string(n - 1));

  double max_u = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = std::fabs(f.lu[static_cast<std::size_t>(i) * n + j]);
      if (v > max_u) max_u = v;
    }
  f.pivot_growth = (max_a > 0.0) ? max_u / max_a : 0.0;
  f.cond1 = norm1_a * estimate_inverse_norm1(f);
  return Factorization(Factorization::Storage(std::move(f)));
}

Factorization factor_tridiagonal(const std::vector<double>& lower,
                                 const std::vector<double>& diag,
                                 const std::vector<double>& upper) {
  const int n = static_cast<int>(diag.size());
  if (n <= 0) throw InvalidArgumentError("matrix dimension must be positive");
  require_dimension(static_cast<int>(lower.size()), n - 1, "subdiagonal");
  require_dimension(static_cast<int>(upper.size()), n - 1, "superdiagonal");

  TridiagLu f;
  f.n = n;
  f.d = diag;
  f.u1.assign(n > 1 ? n - 1 : 0, 0.0);
  std::copy(upper.begin(), upper.end(), f.u1.begin());
  f.u2.assign(n > 2 ? n - 2 : 0, 0.0);
  f.l.assign(n > 1 ? n - 1 : 0, 0.0);
  f.swapped.assign(n > 1 ? n - 1 : 0, 0);

  for (int i = 0; i < n - 1; ++i) {
    const double dl = lower[i];
    if (std::fabs(f.d[i]) >= std::fabs(dl)) {
      if (f.d[i] == 0.0)
        throw SingularMatrixError("zero pivot in column " + std::to_string(i));
      const double m = dl / f.d[i];
      f.l[i] = m;
      f.d[i + 1] -= m * f.u1[i];
      if (i < n - 2) f.u1[i + 1] -= m * f.u2[i];
    } else {
      const double m = f.d[i] / dl;
      const double old_u1 = f.u1[i];
      const double old_u2 = (i < n - 2) ? f.u2[i] : 0.0;
      f.d[i] = dl;
      f.u1[i] = f.d[i + 1];
      if (i < n - 2) {
        f.u2[i] = f.u1[i + 1];
        f.u1[i + 1] = old_u2 - m * f.u2[i];
      }
      f.d[i + 1] = old_u1 - m * f.u1[i];
      f.l[i] = m;
      f.swapped[i] = 1;
    }
  }
  if (f.d[n - 1] == 0.0)
    throw SingularMatrixError("zero pivot in column " + std::to_string(n - 1));
  return Factorization(Factorization::Storage(std::move(f)));
}

Factorization factor_stencil(const StencilMatrix& s, double scale,
                             double diagonal_shift) {
  const int n = s.m;
  const int bw = s.bandwidth;
  BandCholesky f;
  f.n = n;
  f.bw = bw;
  f.band.assign(static_cast<std::size_t>(bw + 1) * n, 0.0);
  fill_band_from_stencil(s, scale, diagonal_shift, bw, 0, 0, f.band, false);

  double* band = f.band.data();
  for (int j = 0; j < n; ++j) {
    double pivot = band[j];
    const int k0 = std::max(0, j - bw);
    for (int k = k0; k < j; ++k) {
      const double ljk = band[static_cast<std::size_t>(j - k) * n + k];
      pivot -= ljk * ljk;
    }
    if (pivot <= 0.0)
      throw ShiftCollisionError(
          "shifted stencil system is not positive definite (pivot " +
              std::to_string(pivot) + " at node " + std::to_string(j) + ")",
          scale);
    const double ljj = std::sqrt(pivot);
    band[j] = ljj;
    const int imax = std::min(n - 1, j + bw);
    for (int i = j + 1; i <= imax; ++i) {
      double acc = band[static_cast<std::size_t>(i - j) * n + j];
      const int kk0 = std::max(0, i - bw);
      for (int k = kk0; k < j; ++k)
        acc -= band[static_cast<std::size_t>(i - k) * n + k] *
               band[static_cast<std::size_t>(j - k) * n + k];
      band[static_cast<std::size_t>(i - j) * n + j] = acc / ljj;
    }
  }
  return Factorization(Factorization::Storage(std::move(f)));
}

Factorization factor_stencil_lu(const StencilMatrix& s, double scale,
                                double diagonal_shift) {
  const int n = s.m;
  const int bw = std::max(1, s.bandwidth);
  const int ld = 3 * bw + 1;
  BandLu f;
  f.n = n;
  f.bw = bw;
  f.ab.assign(static_cast<std::size_t>(ld) * n, 0.0);
  f.piv.assign(n > 1 ? n - 1 : 0, 0);
  fill_band_from_stencil(s, scale, diagonal_shift, bw, ld, 2 * bw, f.ab, true);

  double* ab = f.ab.data();
  const auto at = [&](int i, int j) -> double& {
    return ab[static_cast<std::size_t>(j) * ld + (i - j + 2 * bw)];
  };
  for (int k = 0; k < n; ++k) {
    const int iend = std::min(n - 1, k + bw);
    int p = k;
    for (int i = k + 1; i <= iend; ++i)
      if (std::fabs(at(i, k)) > std::fabs(at(p, k))) p = i;
    const double pivot = at(p, k);
    if (pivot == 0.0)
      throw SingularMatrixError("zero pivot in column " + std::to_string(k));
    if (k < n - 1) f.piv[k] = p;
    const int jend = std::min(n - 1, k + 2 * bw);
    if (p != k)
      for (int j = k; j <= jend; ++j) std::swap(at(k, j), at(p, j));
    for (int i = k + 1; i <= iend; ++i) {
      const double m = at(i, k) / at(k, k);
      at(i, k) = m;
      for (int j = k + 1; j <= jend; ++j) at(i, j) -= m * at(k, j);
    }
  }
  return Factorization(Factorization::Storage(std::move(f)));
}

}  // namespace perron
