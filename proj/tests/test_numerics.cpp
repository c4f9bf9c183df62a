#include <doctest.h>

#include <random>

#include "rh/numerics.hpp"
#include "test_util.hpp"

using namespace rh;
using rhtest::R;
using rhtest::rel;

TEST_CASE("lu_solve: identity and diagonal") {
  PrecisionScope ps(256);
  DenseMatrix I = DenseMatrix::identity(3);
  auto r = lu_solve(I, {Complex(1), Complex(2), Complex(3)});
  for (int i = 0; i < 3; ++i) CHECK(rel(r.solution[i], Complex(i + 1)) == 0.0);
  CHECK(r.log_abs_det.is_zero());

  DenseMatrix D(2, 2);
  D(0, 0) = Complex(2);
  D(1, 1) = Complex(5);
  auto s = lu_solve(D, {Complex(2), Complex(5)});
  CHECK(rel(s.solution[0], Complex(1)) < 1e-70);
  CHECK(rel(s.solution[1], Complex(1)) < 1e-70);
  CHECK(rel(s.log_abs_det, log(Real(10))) < 1e-70);
}

TEST_CASE("lu_solve: Hilbert 6x6 against the exact rational solution") {
  // H x = (1,...,1) solved in exact rational arithmetic
  PrecisionScope ps(256);
  const int n = 6;
  DenseMatrix H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) H(i, j) = Complex(Real(1) / Real(i + j + 1));
  auto r = lu_solve(H, CVec(n, Complex(1)));
  const long exact[n] = {-6, 210, -1680, 5040, -6300, 2772};
  Real tol = ldexp(Real(1), -128) * r.cond_estimate;
  for (int i = 0; i < n; ++i) CHECK(abs(r.solution[i] - Complex(Real(exact[i]))) < tol * 6300);
  // Hilbert 6 condition number (1-norm) is about 2.9e7
  CHECK(r.cond_estimate > 1e7);
  CHECK(r.cond_estimate < 1e8);
}

TEST_CASE("lu_solve: random well-conditioned systems have small residuals") {
  PrecisionScope ps(384);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 3; ++trial) {
    const int n = 20;
    DenseMatrix M(n, n);
    CVec b(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) M(i, j) = Complex(u(rng), u(rng));
      M(i, i) += Complex(Real(n));
      b[i] = Complex(u(rng), u(rng));
    }
    auto r = lu_solve(M, b);
    Real bound = PrecisionContext{384}.tol_rel() * Real(1000) * max_abs(b);
    CHECK(max_abs(residual(M, r.solution, b)) <= bound);
  }
}

TEST_CASE("lu_factor: singular matrix is rejected") {
  PrecisionScope ps(256);
  DenseMatrix M(2, 2);
  M(0, 0) = Complex(1);
  M(0, 1) = Complex(2);
  M(1, 0) = Complex(2);
  M(1, 1) = Complex(4);
  CHECK_THROWS_AS(lu_factor(M), Error);
}

TEST_CASE("gauss_legendre: closed forms") {
  PrecisionScope ps(384);
  auto x = gauss_legendre([](const Real& t) { return Complex(t); }, Real(0), Real(1), 8);
  CHECK(rel(x.value, Complex(0.5)) < 1e-100);
  auto p = gauss_legendre([](const Real& t) { return Complex(Real(4) / (Real(1) + t * t)); }, Real(0), Real(1), 16);
  CHECK(rel(p.value, Complex(pi())) < 1e-100);
  // mass of the uniform density 2/(B-A) on [1,3]
  auto m = gauss_legendre([](const Real&) { return Complex(1); }, Real(1), Real(3), 4);
  CHECK(rel(m.value, Complex(2)) < 1e-100);
  // polynomial of degree 9: exact for 5+ nodes
  auto q = gauss_legendre([](const Real& t) { return Complex(pow(t, 9L)); }, Real(-1), Real(2), 8);
  CHECK(rel(q.value, Complex(Real(1023) / Real(10))) < 1e-100);
}

TEST_CASE("contour_trapezoid: residues on the unit circle") {
  PrecisionScope ps(256);
  Curve c = Curve::circle(Complex(0), Real(1));
  const Complex two_pi_i(Real(0), pi() * 2);
  auto a = contour_trapezoid([](const Complex& z) { return Complex(1) / z; }, c, 16);
  CHECK(rel(a.value, two_pi_i) < 1e-70);
  auto b = contour_trapezoid([](const Complex& z) { return z; }, c, 16, Real(1));
  CHECK(abs(b.value).to_double() < 1e-70);
  auto d = contour_trapezoid([](const Complex& z) { return Complex(1) / (z - Complex(0.3)); }, c, 16);
  CHECK(rel(d.value, two_pi_i) < 1e-70);
  CHECK(winding_number(c, Complex(0.3)) == 1);
  CHECK(winding_number(c, Complex(1.5)) == 0);
}

TEST_CASE("fit_rate: slopes") {
  CHECK(fit_rate({{1, 1}, {2, 0.5}, {4, 0.25}}).slope == doctest::Approx(-1).epsilon(1e-12));
  CHECK(fit_rate({{1, std::exp(-1.0)}, {2, std::exp(-2.0)}, {3, std::exp(-3.0)}}, FitKind::SemiLog).slope ==
        doctest::Approx(-1).epsilon(1e-12));
  std::vector<std::pair<double, double>> pts;
  for (int n : {8, 16, 32, 64}) pts.emplace_back(n, 3.0 / n + 0.01 / (double(n) * n));
  double s = fit_rate(pts).slope;
  CHECK(s >= -1.1);
  CHECK(s <= -0.9);
  CHECK_THROWS_AS(fit_rate({{8, 1.0}}), Error);
}

TEST_CASE("principal branches") {
  PrecisionScope ps(256);
  CHECK(principal_log(Complex(1)).is_zero());
  CHECK(rel(principal_log(Complex(0.0, 1.0)), Complex(Real(0), pi() / 2)) < 1e-70);
  Complex h = principal_pow(Complex(-1.0, 0.0), Real(0.5), Side::Plus);
  CHECK(rel(h, Complex(0.0, 1.0)) < 1e-70);
  Complex hm = principal_pow(Complex(-1.0, 0.0), Real(0.5), Side::Minus);
  CHECK(rel(hm, Complex(0.0, -1.0)) < 1e-70);
  // fourth root round trip off the cut
  for (Complex z : {Complex(2.0, 1.0), Complex(-3.0, 0.5), Complex(-3.0, -0.5), Complex(0.1, -4.0)}) {
    Complex q = principal_pow(z, Real(0.25));
    CHECK(rel(pow_int(q, 4), z) < 1e-70);
  }
}

TEST_CASE("precision scope is per thread and restored") {
  long before = working_bits();
  {
    PrecisionScope ps(512);
    CHECK(working_bits() == 512);
    CHECK(Real(1).bits() == 512);
  }
  CHECK(working_bits() == before);
}

TEST_CASE("determinism at fixed precision") {
  PrecisionScope ps(320);
  auto run = [] {
    DenseMatrix M(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M(i, j) = Complex(Real(1) / Real(i + 2 * j + 1), Real(i - j) / Real(7));
    return lu_solve(M, {Complex(1), Complex(0.0, 1.0), Complex(-2)}).solution;
  };
  CVec a = run(), b = run();
  for (int i = 0; i < 3; ++i) {
    CHECK(a[i].re == b[i].re);
    CHECK(a[i].im == b[i].im);
  }
}
