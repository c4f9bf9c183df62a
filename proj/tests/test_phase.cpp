#include <doctest.h>

#include <cmath>

#include "rh/phase.hpp"
#include "test_util.hpp"

using namespace rh;
using rhtest::rel;

namespace {

struct Setup {
  DensitySpec d;
  FieldEvaluator fe;
  EnergyGrid g;
  EquilibriumSolution sol;
  double delta = 0;
};

// regular engineered case: uniform kappa on [1,4], V = 1.5 (x - 2.5)^2
const Setup& setup() {
  static const Setup s = [] {
    Setup s;
    s.d = build_density(DensityKind::Uniform, 1, 4);
    s.fe = FieldEvaluator::quadratic(s.d, 1.5, 2.5);
    s.g = assemble_grid(s.d, s.fe, 256);
    s.sol = solve_equilibrium(s.g);
    s.delta = disk_radius(s.sol.c, s.sol.d, 1, 4);
    return s;
  }();
  return s;
}

const GPhaseEvaluator& ev() {
  static const GPhaseEvaluator e = [] {
    PrecisionScope ps(256);
    return GPhaseEvaluator(setup().sol, setup().g, setup().fe);
  }();
  return e;
}

Real fro_diff(const DenseMatrix& a, const DenseMatrix& b) { return frobenius(a - b); }

DenseMatrix band_jump() {
  return DenseMatrix::two_by_two(Complex(0), Complex(1), Complex(-1), Complex(0));
}

}  // namespace

TEST_CASE("helpers: disk radius and K points") {
  CHECK(disk_radius(1.5, 3.5, 1, 4) == doctest::Approx(0.2));
  CHECK(disk_radius(1.1, 3.5, 1, 4) == doctest::Approx(0.05));
  PrecisionScope ps(128);
  auto k = k_points(1, 3);
  REQUIRE(k.size() == 3);
  CHECK(rel(k[0], Complex(4)) == 0.0);
  CHECK(rel(k[1], Complex(2.0, 2.0)) == 0.0);
  CHECK(rel(k[2], Complex(6)) == 0.0);
}

TEST_CASE("g: logarithmic growth, jump and real part on the support") {
  PrecisionScope ps(256);
  const auto& e = ev();
  // unit mass: g(z) = log z + O(1/z)
  Complex z(1e6, 1e6);
  CHECK(abs(e.g(z) - principal_log(z)).to_double() < 1e-5);
  for (double x : {1.6, 2.5, 3.3}) {
    Complex gp = e.g(Complex(x), Side::Plus), gm = e.g(Complex(x), Side::Minus);
    Complex jump = gp - gm;
    // the cell data is double precision, so the two routes agree to that level
    CHECK(rel(jump, Complex(Real(0), pi() * 2 * e.mu_right(Real(x)))) < 1e-14);
    CHECK(rel(gp.re, e.log_abs_potential(Real(x))) < 1e-14);
    CHECK(rel(gm.re, e.log_abs_potential(Real(x))) < 1e-14);
  }
  CHECK(rel(e.mu_right(Real(e.support_left())), Real(1)) < 1e-12);
  CHECK(e.mu_right(Real(e.support_right())).is_zero());
}

TEST_CASE("phase: zero real part on the band, positive in the void") {
  PrecisionScope ps(256);
  const auto& e = ev();
  for (double x : {2.0, 2.5, 3.1}) {
    CHECK(std::abs(e.phase(Complex(x), Side::Plus).re.to_double()) < 1e-4);
    CHECK(std::abs(e.phase(Complex(x), Side::Minus).re.to_double()) < 1e-4);
  }
  // left of the band is still on the cut of g; Re phi is the same on both sides
  for (double x : {1.05, 1.2, 3.8, 3.95}) CHECK(e.phase(Complex(x), Side::Plus).re > 1e-3);
  // Schwarz symmetry
  for (Complex z : {Complex(2.0, 0.3), Complex(5.0, -1.0), Complex(0.5, 2.0)})
    CHECK(rel(e.phase(conj(z)), conj(e.phase(z))) < 1e-60);
}

TEST_CASE("outer parametrix: det, band jump, normalization") {
  PrecisionScope ps(256);
  OuterParametrix op(Real(1.5), Real(3.5));
  for (Complex z : {Complex(2.0, 0.5), Complex(4.0), Complex(-1.0, -3.0)}) CHECK(rel(det2(op.N(z)), Complex(1)) < 1e-70);
  for (double x : {1.7, 2.5, 3.4}) {
    DenseMatrix np = op.N(Complex(x), Side::Plus), nm = op.N(Complex(x), Side::Minus);
    CHECK(fro_diff(np, nm * band_jump()).to_double() < 1e-70);
  }
  CHECK_THROWS_AS(op.N(Complex(2.5)), Error);
  // N - I = O(1/z)
  Real e1 = fro_diff(op.N(Complex(1e3, 1e3)), DenseMatrix::identity(2));
  Real e2 = fro_diff(op.N(Complex(1e4, 1e4)), DenseMatrix::identity(2));
  CHECK((e1 / e2).to_double() == doctest::Approx(10).epsilon(0.01));
}

TEST_CASE("airy model: det, jump, asymptotics") {
  PrecisionScope ps(256);
  for (Complex xi : {Complex(1.0, 0.5), Complex(-2.0, 1.0), Complex(0.3, -2.0), Complex(-4.0, -0.2)})
    CHECK(rel(det2(airy_model(xi)), Complex(1)) < 1e-60);
  // A_+ = A_- [[0,1],[-1,0]] on the negative axis
  const Real eps = ldexp(Real(1), -100);
  for (double x : {-0.5, -3.0}) {
    DenseMatrix ap = airy_model(Complex(Real(x), eps)), am = airy_model(Complex(Real(x), -eps));
    CHECK(fro_diff(ap, am * band_jump()).to_double() < 1e-25);
  }
  CHECK_THROWS_AS(airy_model(Complex(2.0)), Error);
  // residual decays like |xi|^{-3/2}
  for (double t : {0.4, 1.5, -1.2, 2.6}) {
    Real r1 = airy_asymptotic_residual(polar(Real(20), Real(t))).middle;
    Real r2 = airy_asymptotic_residual(polar(Real(80), Real(t))).middle;
    CHECK((r1 / r2).to_double() == doctest::Approx(8).epsilon(0.3));
  }
}

TEST_CASE("conformal map at both endpoints") {
  PrecisionScope ps(256);
  const auto& s = setup();
  for (bool left : {true, false}) {
    ConformalMap cm(ev(), left ? s.sol.c : s.sol.d, left, s.delta);
    CHECK(abs(cm.xi(Complex(cm.endpoint()))).to_double() < 1e-12);
    CHECK(cm.h0() > 0);
    // real and increasing away from the band on the void side
    double sgn = left ? -1 : 1, prev = 0;
    for (double t : {0.1, 0.3, 0.6, 0.9}) {
      Complex x = cm.xi(Complex(cm.endpoint() + sgn * t * s.delta));
      CHECK(std::abs(x.im.to_double()) < 1e-10);
      CHECK(x.re.to_double() > prev);
      prev = x.re.to_double();
    }
    // fit and direct forms agree just inside the fit circle
    Complex z = Complex(cm.endpoint()) + Complex(0.0, 0.45 * s.delta);
    CHECK(rel(cm.xi_fit(z), cm.xi_direct(z)) < 5e-2);
    // xi^{3/2} versus phi_loc on the fit circle: limited by the discrete band edge
    CHECK(cm.relation_residual() < 5e-2);
  }
}

TEST_CASE("local parametrix: E has no jumps and matching improves with n") {
  PrecisionScope ps(256);
  const auto& s = setup();
  OuterParametrix op(Real(s.sol.c), Real(s.sol.d));
  for (bool left : {true, false}) {
    ConformalMap cm(ev(), left ? s.sol.c : s.sol.d, left, s.delta);
    LocalParametrix p16(cm, op, 16), p32(cm, op, 32);
    CHECK(p16.e_jump_band_side().to_double() < 1e-10);
    CHECK(p16.e_jump_void_side().to_double() < 1e-10);
    double m16 = p16.matching_error(s.delta).to_double();
    double m32 = p32.matching_error(s.delta).to_double();
    CHECK(m16 / m32 >= 1.5);
    CHECK(m16 / m32 <= 3.0);
    // a smaller circle worsens matching by a bounded factor
    double half = p32.matching_error(0.5 * s.delta).to_double();
    CHECK(half / m32 <= 10.0);
  }
}

TEST_CASE("lens lips: jumps decay geometrically") {
  PrecisionScope ps(256);
  const auto& s = setup();
  auto lips = make_lips(s.sol.c, s.sol.d, 0.5 * s.delta, s.delta);
  CHECK(!lips.upper.empty());
  CHECK(lips.upper.size() == lips.lower.size());
  auto dec = lens_jump_norms(ev(), lips, {8, 16, 32});
  REQUIRE(dec.sup_norms.size() == 3);
  double l8 = std::log(dec.sup_norms[0].second), l16 = std::log(dec.sup_norms[1].second);
  CHECK(l16 == doctest::Approx(2 * l8).epsilon(1e-6));
  CHECK(dec.c0 > 0);
  // excluding more of the endpoints raises the decay rate
  auto small = phase_sign_scan(ev(), make_lips(s.sol.c, s.sol.d, 0.5 * s.delta, 0.5 * s.delta));
  auto big = phase_sign_scan(ev(), lips);
  CHECK(big.c0 >= small.c0);
  CHECK(big.max_re_phi < 0);
}

TEST_CASE("E_n: weight form and barycentric form agree") {
  PrecisionScope ps(384);
  auto d = build_density(DensityKind::Uniform, 1, 3);
  FieldEvaluator fe(d);
  auto run = run_pade(d, hurwitz_sampler(Complex(2)), 8, 384);
  REQUIRE(run.solved);
  PrecisionScope at(run.bits_used);
  for (Complex z : {Complex(4.0), Complex(2.0, 2.0), Complex(6.0)}) {
    double a = log_En_over_n(run.weights, run.ns, fe, z);
    double b = log_En_over_n_barycentric(run.ns, run.f, fe, z);
    CHECK(a == doctest::Approx(b).epsilon(1e-12));
  }
}

TEST_CASE("wn factorization fit") {
  std::vector<std::pair<int, double>> v;
  for (int n : {8, 16, 32, 64}) v.emplace_back(n, -2.0 * std::log(n) / n);
  auto f = wn_factorization_check(v);
  CHECK(f.C == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.worst_ratio == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.monotone);
}
