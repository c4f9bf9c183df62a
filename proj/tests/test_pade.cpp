#include <doctest.h>

#include <algorithm>

#include "rh/pade.hpp"
#include "test_util.hpp"

using namespace rh;
using rhtest::R;
using rhtest::rel;

namespace {

const DensitySpec& uni() {
  static const DensitySpec d = build_density(DensityKind::Uniform, 1, 3);
  return d;
}

Real tiny(long bits) { return ldexp(Real(1), -bits / 2); }

}  // namespace

TEST_CASE("system: dimensions and right-hand side") {
  PrecisionScope ps(256);
  auto ns = quantile_nodes(uni(), 4);
  auto f = sample_at_nodes(ns, hurwitz_sampler(Complex(2)));
  auto sys = assemble_system(ns, f);
  CHECK(sys.M.rows() == 9);
  CHECK(sys.M.cols() == 9);
  CHECK(sys.b.size() == 9);
  // row j: -alpha_j^n f_j on the right
  for (int j = 0; j < 9; ++j) CHECK(rel(sys.b[j], -(f[j] * Complex(pow(ns.alpha[j], 4L)))) < 1e-70);
}

TEST_CASE("solve: interpolation conditions hold") {
  PrecisionScope ps(384);
  for (int n : {2, 4, 8}) {
    auto run = run_pade(uni(), hurwitz_sampler(Complex(2)), n, 384);
    REQUIRE(run.solved);
    CHECK(run.nd.nd_holds);
    CHECK(run.pair.Qhat.degree() == n);
    CHECK(run.pair.Qhat.coeff(n).re == Real(1));
    CHECK(run.pair.Phat.degree() <= n);
    PrecisionScope at(run.bits_used);
    for (int j = 0; j <= 2 * n; ++j) {
      Complex z(run.ns.alpha[j]);
      Complex r = run.pair.Qhat(z) * run.f[j] - run.pair.Phat(z);
      CHECK(abs(r) <= tiny(run.bits_used) * abs(run.f[j]) * Real(1e6));
    }
  }
}

TEST_CASE("solve: invariant under scaling of the data") {
  PrecisionScope ps(384);
  auto ns = quantile_nodes(uni(), 4);
  auto f = sample_at_nodes(ns, hurwitz_sampler(Complex(3)));
  CVec g = f;
  const Complex c(2.5, -1.0);
  for (auto& x : g) x = x * c;
  auto a = solve_pade(assemble_system(ns, f));
  auto b = solve_pade(assemble_system(ns, g));
  for (int k = 0; k <= 4; ++k) {
    CHECK(abs(a.Qhat.coeff(k) - b.Qhat.coeff(k)) < tiny(384));
    CHECK(abs(a.Phat.coeff(k) * c - b.Phat.coeff(k)) < tiny(384));
  }
}

TEST_CASE("solve: independent of node ordering") {
  PrecisionScope ps(384);
  auto ns = quantile_nodes(uni(), 5);
  auto f = sample_at_nodes(ns, hurwitz_sampler(Complex(2.0, 1.0)));
  NodeSet perm = ns;
  CVec fp = f;
  std::reverse(perm.alpha.begin(), perm.alpha.end());
  std::reverse(perm.a.begin(), perm.a.end());
  std::reverse(fp.begin(), fp.end());
  std::swap(perm.alpha[1], perm.alpha[4]);
  std::swap(perm.a[1], perm.a[4]);
  std::swap(fp[1], fp[4]);
  auto a = solve_pade(assemble_system(ns, f));
  auto b = solve_pade(assemble_system(perm, fp));
  for (int k = 0; k <= 5; ++k) {
    CHECK(abs(a.Qhat.coeff(k) - b.Qhat.coeff(k)) < tiny(384));
    CHECK(abs(a.Phat.coeff(k) - b.Phat.coeff(k)) < tiny(384));
  }
}

TEST_CASE("solve: zero data is degenerate") {
  PrecisionScope ps(256);
  auto ns = quantile_nodes(uni(), 3);
  CVec zero(ns.alpha.size(), Complex(0));
  auto sys = assemble_system(ns, zero);
  CHECK_FALSE(check_nd(sys).nd_holds);
  CHECK_THROWS_AS(solve_pade(sys), Error);
}

TEST_CASE("reduced solve: rational data of type (1,1)") {
  PrecisionScope ps(256);
  auto ns = quantile_nodes(uni(), 3);
  auto f = sample_at_nodes(ns, [](const Complex& a) { return (a + Real(1)) / (a + Real(2)); });
  CHECK_FALSE(check_nd(assemble_system(ns, f)).nd_holds);
  auto pp = solve_pade_reduced(ns, f);
  CHECK(pp.reduced_degree == 1);
  // Qhat = zeta + 2/n, Phat = zeta + 1/n
  CHECK(rel(pp.Qhat.coeff(0), Complex(Real(2) / Real(3))) < 1e-60);
  CHECK(rel(pp.Phat.coeff(0), Complex(Real(1) / Real(3))) < 1e-60);
  CHECK(rel(pp.Phat.coeff(1), Complex(1)) < 1e-60);
}

TEST_CASE("discrete orthogonality of Qhat against lower powers") {
  PrecisionScope ps(384);
  auto run = run_pade(uni(), hurwitz_sampler(Complex(2)), 6, 384);
  REQUIRE(run.solved);
  PrecisionScope at(run.bits_used);
  auto o = discrete_orthogonality_check(run.pair, run.weights, run.ns);
  CHECK(o.normalized.size() == 6);
  CHECK(o.max_normalized < ldexp(Real(1), -150));
  // the degree-n moment is cancellation-prone but far from the k < n level
  CHECK(o.degree_n_normalized > o.max_normalized * 1e10);
}

TEST_CASE("weights: split form matches the scaled form") {
  PrecisionScope ps(256);
  auto ns = quantile_nodes(uni(), 3);
  auto f = sample_at_nodes(ns, hurwitz_sampler(Complex(2)));
  auto ws = build_weights(ns, f);
  // w_j = n^{-2n} w~_j
  Real scale = pow(Real(3), -6L);
  for (int j = 0; j < 7; ++j) CHECK(rel(ws.value(j), ws.w_scaled[j] * scale) < 1e-70);
}

TEST_CASE("barycentric form equals the Lagrange interpolant") {
  PrecisionScope ps(384);
  auto ns = quantile_nodes(uni(), 8);
  auto f = sample_at_nodes(ns, hurwitz_sampler(Complex(2)));
  auto ws = build_weights(ns, f);
  for (Complex z : {Complex(2.0, 0.5), Complex(0.2, 0.0), Complex(3.7, -1.1)}) {
    auto v = eval_Wn_Ln(ws, ns, f, z);
    CHECK(v.residual < 1e-100);
    CHECK(rel(v.L, lagrange_eval(ns, f, z)) < 1e-100);
  }
  CHECK_THROWS_AS(eval_Wn_Ln(ws, ns, f, Complex(ns.alpha[3])), Error);
}

TEST_CASE("lagrange: reproduces polynomials of degree <= 2n") {
  PrecisionScope ps(256);
  auto ns = quantile_nodes(build_density(DensityKind::Poly, 1, 3, {1, 1}), 3);
  auto p = [](const Complex& a) { return pow_int(a, 6) - a * Real(3) + Complex(0.0, 2.0); };
  auto f = sample_at_nodes(ns, p);
  for (Complex zeta : {Complex(0.5, 0.5), Complex(4.0)}) {
    Complex want = p(zeta * Real(3));
    CHECK(rel(lagrange_eval(ns, f, zeta), want) < 1e-60);
  }
}

TEST_CASE("hermite contour formula") {
  PrecisionScope ps(256);
  auto ns = quantile_nodes(uni(), 4);
  Curve gamma = default_contour(uni()).curve();
  // constant data interpolates to the constant
  auto one = hermite_walsh_eval(ns, [](const Complex&) { return Complex(1); }, gamma, Complex(2.0, 0.1));
  CHECK(rel(one.value, Complex(1)) < 1e-60);
  // inside and outside the contour against the Lagrange form
  auto sampler = hurwitz_sampler(Complex(2));
  auto f = sample_at_nodes(ns, sampler);
  for (Complex z : {Complex(2.2, 0.3), Complex(5.0, 2.0)}) {
    auto hw = hermite_walsh_eval(ns, sampler, gamma, z);
    CHECK(rel(hw.value, lagrange_eval(ns, f, z)) < 1e-50);
  }
  // a contour that misses the nodes is rejected
  CHECK_THROWS_AS(hermite_walsh_eval(ns, sampler, Curve::circle(Complex(10), Real(1)), Complex(2)), Error);
}

TEST_CASE("Y: residues and determinant") {
  PrecisionScope ps(384);
  auto run = run_pade(uni(), hurwitz_sampler(Complex(2)), 4, 384);
  REQUIRE(run.solved);
  PrecisionScope at(run.bits_used);
  YEvaluator Y(run.pair, run.weights, run.ns);
  for (int j : {0, 3, 8}) {
    auto r = Y.residue_check(j, Real(0.5));
    CHECK(r.rel12 < 1e-60);
    CHECK(r.rel22 < 1e-60);
  }
  for (Complex z : {Complex(20.0, 5.0), Complex(8.0, 0.5), Complex(-3.0, -2.0)})
    CHECK(rel(Y.det(z), Complex(1)) < 1e-60);
}

TEST_CASE("recovering P from the interpolant of Q f") {
  PrecisionScope ps(384);
  auto run = run_pade(uni(), hurwitz_sampler(Complex(2)), 4, 384);
  REQUIRE(run.solved);
  PrecisionScope at(run.bits_used);
  auto rec = recover_P_interpolant(run.pair, run.ns, run.f);
  CHECK(rec.tail_ratio < ldexp(Real(1), -150));
  CHECK(rec.p_mismatch < ldexp(Real(1), -150));
  CHECK(rec.interpolant.degree() <= 8);
}
