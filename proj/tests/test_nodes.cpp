#include <doctest.h>

#include <cmath>

#include "rh/nodes.hpp"
#include "test_util.hpp"

using namespace rh;
using rhtest::R;
using rhtest::rel;

TEST_CASE("densities: normalization to mass 2") {
  PrecisionScope ps(256);
  auto u = build_density(DensityKind::Uniform, 1, 3);
  CHECK(u.kappa(2.0) == doctest::Approx(1.0));
  auto u2 = build_density(DensityKind::Uniform, 1, 2);
  CHECK(u2.kappa(1.5) == doctest::Approx(2.0));
  // raw 1 + x on [1,3] has mass 6
  auto p = build_density(DensityKind::Poly, 1, 3, {1, 1});
  CHECK(p.multiplier() == doctest::Approx(1.0 / 3.0));
  CHECK(p.cdf(3.0) == doctest::Approx(2.0));
  auto b = build_density(DensityKind::CosineBump, 1, 3, {2, 1, 0.5});
  CHECK(b.cdf(3.0) == doctest::Approx(2.0));
  CHECK(rel(b.cdf(Real(3)), Real(2)) < 1e-70);
  CHECK(b.kappa_min() > 0);
}

TEST_CASE("densities: invalid inputs") {
  CHECK_THROWS_AS(build_density(DensityKind::Poly, 1, 3, {-5, 1}), Error);
  CHECK(parse_density_kind("cosine_bump") == DensityKind::CosineBump);
  CHECK_THROWS_AS(parse_density_kind("gaussian"), Error);
}

TEST_CASE("densities: cell averages integrate the density") {
  PrecisionScope ps(256);
  auto p = build_density(DensityKind::Poly, 1, 3, {1, 1});
  // (1/3) * average of 1 + x over [1.5, 2] = (1/3) * 2.75
  CHECK(p.cell_average(1.5, 2.0) == doctest::Approx(2.75 / 3.0).epsilon(1e-14));
  CHECK(rel(p.cell_average(Real(1.5), Real(2)), Real(11) / Real(12)) < 1e-70);
}

TEST_CASE("quantile nodes: closed forms") {
  PrecisionScope ps(256);
  auto u = build_density(DensityKind::Uniform, 1, 3);
  auto ns = quantile_nodes(u, 2);
  REQUIRE(ns.alpha.size() == 5);
  const double want[5] = {1, 1.5, 2, 2.5, 3};
  for (int j = 0; j < 5; ++j) CHECK(rel(ns.alpha[j], Real(want[j])) < 1e-70);
  CHECK(rel(ns.a[3], Real(5)) < 1e-70);

  // F(x) = (x + x^2/2 - 3/2) / 3 = j/2  gives  x = sqrt(4 + 3 j) - 1
  auto p = build_density(DensityKind::Poly, 1, 3, {1, 1});
  auto np = quantile_nodes(p, 2);
  for (int j = 0; j < 5; ++j) CHECK(rel(np.alpha[j], sqrt(Real(4 + 3 * j)) - Real(1)) < 1e-70);
  CHECK(np.max_cdf_residual < 1e-70);
}

TEST_CASE("quantile nodes: strictly increasing, endpoints fixed") {
  PrecisionScope ps(256);
  for (auto d : {build_density(DensityKind::Poly, 1, 3, {1, 1}),
                 build_density(DensityKind::CosineBump, 1, 3, {2, 1, 0.5}),
                 build_density(DensityKind::Uniform, 0.5, 7)}) {
    auto ns = quantile_nodes(d, 13);
    CHECK(ns.alpha.front() == Real(d.A()));
    CHECK(ns.alpha.back() == Real(d.B()));
    for (size_t j = 1; j < ns.alpha.size(); ++j) CHECK(ns.alpha[j] > ns.alpha[j - 1]);
  }
}

TEST_CASE("spacing: gaps are between 1/kappa_max and 1/kappa_min") {
  PrecisionScope ps(256);
  auto u = build_density(DensityKind::Uniform, 1, 3);
  auto s = spacing_check(quantile_nodes(u, 8), u);
  CHECK(s.min_gap_n == doctest::Approx(1.0));
  CHECK(s.max_gap_n == doctest::Approx(1.0));
  for (auto d : {build_density(DensityKind::Poly, 1, 3, {1, 1}), build_density(DensityKind::CosineBump, 1, 3, {2, 1, 0.5})}) {
    for (int n : {4, 16, 64}) {
      auto r = spacing_check(quantile_nodes(d, n), d);
      CHECK(r.min_gap_n >= r.lower_bound * (1 - 1e-12));
      CHECK(r.max_gap_n <= r.upper_bound * (1 + 1e-12));
    }
  }
}

TEST_CASE("riemann sums") {
  PrecisionScope ps(256);
  auto u = build_density(DensityKind::Uniform, 1, 3);
  // (1/n) * (2n + 1) - 2 = 1/n exactly
  auto one = riemann_sum_check(u, {4, 8, 16}, [](const Real&) { return Real(1); });
  for (auto [n, e] : one.errors) CHECK(e == doctest::Approx(1.0 / n).epsilon(1e-14));
  CHECK(one.slope == doctest::Approx(-1).epsilon(1e-10));
  auto lg = riemann_sum_check(build_density(DensityKind::Poly, 1, 3, {1, 1}), {8, 16, 32, 64},
                              [](const Real& x) { return log(x); });
  CHECK(lg.slope <= -0.8);
}

TEST_CASE("omega: log of the node polynomial") {
  PrecisionScope ps(256);
  auto u = build_density(DensityKind::Uniform, 1, 3);
  auto n1 = quantile_nodes(u, 1);  // nodes 1, 2, 3
  CHECK(rel(omega_log_eval(n1, Complex(4)), Complex(log(Real(6)))) < 1e-70);
  // exp of the log sum reproduces the product off the real axis
  auto n3 = quantile_nodes(u, 3);
  Complex z(2.2, 0.7), prod(1);
  for (const auto& a : n3.alpha) prod = prod * (z - Complex(a));
  CHECK(rel(exp(omega_log_eval(n3, z)), prod) < 1e-70);

  auto lp = logpot_check(build_density(DensityKind::Poly, 1, 3, {1, 1}), {8, 16, 32, 64}, Complex(2.0, 2.0));
  CHECK(lp.slope <= -0.8);
}

TEST_CASE("omega_prime: brute-force product") {
  PrecisionScope ps(256);
  auto p = build_density(DensityKind::Poly, 1, 3, {1, 1});
  auto ns = quantile_nodes(p, 3);
  const int m = static_cast<int>(ns.alpha.size());
  for (int j = 0; j < m; ++j) {
    Real scaled(1);
    Complex full(1);
    for (int k = 0; k < m; ++k)
      if (k != j) {
        scaled *= ns.alpha[j] - ns.alpha[k];
        full = full * Complex(ns.a[j] - ns.a[k]);
      }
    CHECK(rel(omega_prime_scaled(ns, j), scaled) < 1e-70);
    CHECK(rel(omega_prime(ns, j).value(), full) < 1e-70);
  }
}

TEST_CASE("log integrals: closed forms") {
  PrecisionScope ps(256);
  // int_0^1 int_0^1 log|x - y| = -3/2
  CHECK(static_cast<double>(log_abs_pair_integral(0, 1, 0, 1)) == doctest::Approx(-1.5).epsilon(1e-15));
  // int_{-1}^{1} log|t| = -2
  CHECK(log_abs_cell_integral(0.0, -1.0, 1.0) == doctest::Approx(-2.0));
  CHECK(rel(log_abs_cell_integral(Real(0), Real(-1), Real(1)), Real(-2)) < 1e-70);
  // agreement with quadrature away from the cell
  Real x(5), t0(1), t1(2);
  auto q = gauss_legendre([&](const Real& t) { return Complex(log(abs(x - t))); }, t0, t1, 16);
  CHECK(rel(log_abs_cell_integral(x, t0, t1), q.value.re) < 1e-60);
  Complex z(1.5, 0.3);
  auto qc = gauss_legendre([&](const Real& t) { return principal_log(z - Complex(t)); }, t0, t1, 32);
  CHECK(rel(log_cell_integral(z, t0, t1), qc.value) < 1e-30);
}

TEST_CASE("field: node-density potential") {
  PrecisionScope ps(256);
  auto u = build_density(DensityKind::Uniform, 1, 3);
  FieldEvaluator fe(u);
  // V(2) = -2 int_{-1}^{1} log|t| dt = 4
  CHECK(fe.external_field(2.0) == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(rel(log_potential(u, Complex(5)), log(Real(4)) * 4 - log(Real(2)) * 2 - Real(2)) < 1e-60);
  for (double x : {1.1, 1.5, 1.9, 2.7})
    CHECK(fe.external_field(2.0 + (x - 2.0)) == doctest::Approx(fe.external_field(2.0 - (x - 2.0))).epsilon(1e-13));
  // Schwarz symmetry of the continuation
  for (Complex z : {Complex(2.0, 0.5), Complex(0.3, 1.0), Complex(5.0, -2.0)}) {
    Complex a = fe.analytic_field(z), b = fe.analytic_field(conj(z));
    CHECK(rel(conj(b), a) < 1e-12);
  }
  // real part of the continuation is the field off the cut
  Complex z(4.0, 0.0);
  CHECK(fe.analytic_field(z).re.to_double() == doctest::Approx(fe.external_field(4.0)).epsilon(1e-12));
  CHECK_THROWS_AS(fe.analytic_field(Complex(2.0, 0.0)), Error);

  auto q = FieldEvaluator::quadratic(u, 1.5, 2.0);
  CHECK(q.external_field(3.0) == doctest::Approx(1.5));
  CHECK(q.field_cell_integral(2.0, 3.0) == doctest::Approx(0.5));
}
