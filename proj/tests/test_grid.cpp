#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "perron/errors.hpp"
#include "perron/grid.hpp"
#include "perron/linsolve.hpp"
#include "perron/vec.hpp"

using namespace perron;

namespace {
std::string fixture(const char* name) {
  return std::string(TEST_DATA_DIR) + "/" + name;
}
}  // namespace

TEST_CASE("unit square interior counts") {
  CHECK(unit_square(0.5).interior_count() == 1);
  CHECK(unit_square(0.25).interior_count() == 9);
  CHECK(unit_square(1.0 / 50).interior_count() == 2401);
}

TEST_CASE("unit square rejects non-integer reciprocal spacing") {
  CHECK_THROWS_AS(unit_square(0.3), InvalidArgumentError);
  CHECK_THROWS_AS(unit_square(-0.25), InvalidArgumentError);
  CHECK_THROWS_AS(unit_square(0.0), InvalidArgumentError);
}

TEST_CASE("l-shape interior nodes at h = 1/2") {
  const GridDomain d = l_shape(0.5);
  REQUIRE(d.interior_count() == 5);
  // Points (ix+1)h x (iy+1)h: the quadrant [1,2]^2 is removed including its
  // edges.
  CHECK(d.is_interior(0, 0));
  CHECK(d.is_interior(1, 0));
  CHECK(d.is_interior(2, 0));
  CHECK(d.is_interior(0, 1));
  CHECK(d.is_interior(0, 2));
  CHECK(!d.is_interior(1, 1));
  CHECK(!d.is_interior(2, 2));
}

TEST_CASE("l-shape counts match enumeration") {
  for (double h : {0.5, 0.25, 1.0 / 8, 1.0 / 10}) {
    CHECK(l_shape(h).interior_count() == oracle::l_shape_interior_count(h));
  }
  CHECK(l_shape(1.0 / 8).interior_count() == 161);
}

TEST_CASE("l-shape with no strict interior is rejected") {
  CHECK_THROWS_AS(l_shape(1.0), DomainError);
}

TEST_CASE("mask file: minimal single node") {
  const GridDomain d = load_mask(fixture("minimal.mask"));
  CHECK(d.nx() == 1);
  CHECK(d.ny() == 1);
  CHECK(d.h() == 0.5);
  CHECK(d.interior_count() == 1);
}

TEST_CASE("mask file reproducing the h=1/4 unit square") {
  CHECK(load_mask(fixture("square4.mask")) == unit_square(0.25));
}

TEST_CASE("mask file: disconnected interior is rejected") {
  CHECK_THROWS_AS(load_mask(fixture("disconnected.mask")), ConnectivityError);
}

TEST_CASE("mask file: ragged rows are a parse error with a line number") {
  try {
    load_mask(fixture("ragged.mask"));
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("mask file: missing file is a parse error") {
  CHECK_THROWS_AS(load_mask(fixture("no-such-file.mask")), ParseError);
}

TEST_CASE("mask rows are ordered top to bottom") {
  // Top row "11", bottom row "10": the interior node on the bottom row is at
  // iy = 0, ix = 0.
  const GridDomain d = load_mask(fixture("lrow.mask"));
  CHECK(d.is_interior(0, 0));
  CHECK(!d.is_interior(1, 0));
  CHECK(d.is_interior(0, 1));
  CHECK(d.is_interior(1, 1));
}

TEST_CASE("stencil at h = 1/2 is the scalar 16") {
  const StencilMatrix s = assemble(unit_square(0.5));
  CHECK(s.m == 1);
  CHECK(s.diag == 16.0);
}

TEST_CASE("stencil at h = 1/4: diagonal and smallest eigenvalue") {
  const StencilMatrix s = assemble(unit_square(0.25));
  REQUIRE(s.m == 9);
  CHECK(s.diag == 64.0);
  CHECK(s.offdiag == -16.0);
  const std::vector<double> ev = oracle::symmetric_eigenvalues(
      oracle::dense_from_stencil(s), s.m);
  const double pi = 3.141592653589793238462643383279502884;
  const double expected = 128.0 * std::sin(pi / 8) * std::sin(pi / 8);
  CHECK(ev.front() == doctest::Approx(expected).epsilon(1e-12));
  CHECK(ev.front() > 0.0);  // positive definite
}

TEST_CASE("assembled stencil is symmetric") {
  for (const GridDomain& d : {unit_square(0.25), l_shape(0.25)}) {
    const StencilMatrix s = assemble(d);
    const std::vector<double> a = oracle::dense_from_stencil(s);
    for (int i = 0; i < s.m; ++i)
      for (int j = 0; j < s.m; ++j)
        CHECK(a[i * s.m + j] == a[j * s.m + i]);
  }
}

TEST_CASE("discrete maximum principle: stencil solves of nonnegative data are positive") {
  std::mt19937_64 gen(7);
  for (const GridDomain& d : {unit_square(1.0 / 6), l_shape(0.25)}) {
    const StencilMatrix s = assemble(d);
    const Factorization f = factor_stencil(s, 1.0, 0.0);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> b(s.m, 0.0);
      std::uniform_real_distribution<double> u(0.0, 1.0);
      for (double& x : b) x = (gen() % 3 == 0) ? 0.0 : u(gen);
      if (norm_inf(b) == 0.0) b[0] = 1.0;
      const std::vector<double> x = f.solve(b);
      for (double xi : x) CHECK(xi > 0.0);
    }
  }
}

TEST_CASE("unit-square largest inverse-Laplacian eigenvalue matches the sine mode") {
  for (double h : {0.25, 1.0 / 6, 0.1}) {
    const StencilMatrix s = assemble(unit_square(h));
    const std::vector<double> ev = oracle::symmetric_eigenvalues(
        oracle::dense_from_stencil(s), s.m);
    CHECK(1.0 / ev.front() ==
          doctest::Approx(oracle::unit_square_lambda(h)).epsilon(1e-12));
  }
}

TEST_CASE("unit-square eigenvalues decrease toward the continuum limit under refinement") {
  // sin x < x makes the discrete Laplacian eigenvalue undershoot 2 pi^2,
  // so its inverse sits above 1 / (2 pi^2) and shrinks as h does.
  const double limit = 0.050660591821168885;  // 1 / (2 pi^2)
  double prev = 1.0;
  for (double h : {0.25, 1.0 / 6, 0.1, 1.0 / 16, 1.0 / 25, 1.0 / 50}) {
    const double lh = oracle::unit_square_lambda(h);
    CHECK(lh < prev);
    CHECK(lh > limit);
    prev = lh;
  }
  CHECK(prev - limit < 1e-4);
}

TEST_CASE("apply_stencil matches the dense copy") {
  const StencilMatrix s = assemble(l_shape(0.25));
  const std::vector<double> a = oracle::dense_from_stencil(s);
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(s.m);
  for (double& xi : x) xi = u(gen);
  const std::vector<double> y = apply_stencil(s, x);
  for (int i = 0; i < s.m; ++i) {
    double yi = 0.0;
    for (int j = 0; j < s.m; ++j) yi += a[i * s.m + j] * x[j];
    CHECK(y[i] == doctest::Approx(yi).epsilon(1e-13));
  }
}
