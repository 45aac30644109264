#ifndef PERRON_VEC_HPP
#define PERRON_VEC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "perron/errors.hpp"

namespace perron {

// Compensated (Kahan) summation keeps the error of a length-n dot product at
// a few ulps independent of n. The Collatz-Wielandt ratio gaps we feed the
// stopping tests sit near 1e-14 for n = 1000; naive accumulation would eat
// most of that budget.
inline double kahan_dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double y = a[i] * b[i] - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

inline double kahan_dot(const std::vector<double>& a,
                        const std::vector<double>& b) {
  return kahan_dot(a.data(), b.data(), a.size());
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return kahan_dot(a, b);
}

inline double norm2(const std::vector<double>& v) {
  return std::sqrt(kahan_dot(v, v));
}

inline double norm_inf(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

inline void scale(std::vector<double>& v, double s) {
  for (double& x : v) x *= s;
}

inline std::vector<double> normalized(const std::vector<double>& v) {
  double n = norm2(v);
  if (n == 0.0) throw DomainError("cannot normalize a zero vector");
  std::vector<double> out(v);
  scale(out, 1.0 / n);
  return out;
}

inline bool strictly_positive(const std::vector<double>& v) {
  for (double x : v)
    if (!(x > 0.0)) return false;
  return !v.empty();
}

inline void require_dimension(std::size_t got, std::size_t want,
                              const char* what) {
  if (got != want)
    throw DimensionError(std::string(what) + ": expected length " +
                         std::to_string(want) + ", got " +
                         std::to_string(got));
}

}  // namespace perron

#endif
