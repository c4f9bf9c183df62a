#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rh/equilibrium.hpp"
#include "test_util.hpp"

using namespace rh;

namespace {

struct Case {
  DensitySpec d;
  FieldEvaluator fe;
  EnergyGrid g;
  EquilibriumSolution sol;
};

// uniform kappa on [1,4] with V = 1.5 (x - 2.5)^2: one band strictly inside
Case regular(int m) {
  Case c;
  c.d = build_density(DensityKind::Uniform, 1, 4);
  c.fe = FieldEvaluator::quadratic(c.d, 1.5, 2.5);
  c.g = assemble_grid(c.d, c.fe, m);
  c.sol = solve_equilibrium(c.g);
  return c;
}

Case node_field(DensityKind k, std::vector<double> params, int m) {
  Case c;
  c.d = build_density(k, 1, 3, std::move(params));
  c.fe = FieldEvaluator(c.d);
  c.g = assemble_grid(c.d, c.fe, m);
  c.sol = solve_equilibrium(c.g);
  return c;
}

const Case& regular128() {
  static const Case c = regular(128);
  return c;
}

const Case& uniform128() {
  static const Case c = node_field(DensityKind::Uniform, {}, 128);
  return c;
}

}  // namespace

TEST_CASE("kernel: self cell closed form") {
  CHECK(self_cell_kernel(1.0) == doctest::Approx(1.5));
  // against the pair integral
  for (double h : {0.5, 0.01, 2.0})
    CHECK(self_cell_kernel(h) == doctest::Approx(-static_cast<double>(log_abs_pair_integral(0, h, 0, h))).epsilon(1e-13));
}

TEST_CASE("kernel: far cells behave like h^2 log(1/distance)") {
  const double h = 1e-3;
  double k = -static_cast<double>(log_abs_pair_integral(0, h, 10, 10 + h)) / (h * h);
  CHECK(k == doctest::Approx(-std::log(10.0)).epsilon(1e-6));
}

TEST_CASE("grid: kernel symmetric, cells exact") {
  const auto& g = uniform128().g;
  CHECK(g.m == 128);
  CHECK(g.edges.front() == 1.0);
  CHECK(g.edges.back() == 3.0);
  for (int i = 0; i < g.m; i += 7)
    for (int j = 0; j < g.m; j += 5) CHECK(g.kernel(i, j) == doctest::Approx(g.kernel(j, i)).epsilon(1e-14));
  for (double kb : g.kappa_bar) CHECK(kb == doctest::Approx(1.0));
  CHECK(g.kernel(3, 3) == doctest::Approx(self_cell_kernel(g.h[3])).epsilon(1e-14));
}

TEST_CASE("qp: feasible output and nonincreasing energy") {
  for (const Case* c : {&uniform128(), &regular128()}) {
    const auto& s = c->sol;
    CHECK(s.converged);
    double mass = 0;
    for (int i = 0; i < c->g.m; ++i) {
      CHECK(s.rho.rho[i] >= 0.0);
      CHECK(s.rho.rho[i] <= c->g.kappa_bar[i] * (1 + 1e-14));
      mass += c->g.h[i] * s.rho.rho[i];
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    for (size_t k = 1; k < s.energy_trace.size(); ++k)
      CHECK(s.energy_trace[k] <= s.energy_trace[k - 1] + 1e-13 * std::abs(s.energy_trace[k - 1]));
  }
}

TEST_CASE("qp: two starts reach the same minimum") {
  const auto& c = regular128();
  QpOptions opt;
  auto a = solve_qp(c.g, default_start(c.g), opt);
  auto b = solve_qp(c.g, ramp_start(c.g), opt);
  CHECK(std::abs(a.energy - b.energy) <= 10 * opt.qp_tol);
  double diff = 0;
  for (int i = 0; i < c.g.m; ++i) diff = std::max(diff, std::abs(a.rho.rho[i] - b.rho.rho[i]));
  CHECK(diff < 1e-4);
}

TEST_CASE("qp: symmetric data gives a symmetric minimizer") {
  for (const Case* c : {&uniform128(), &regular128()}) {
    const auto& r = c->sol.rho.rho;
    const int m = c->g.m;
    for (int i = 0; i < m / 2; ++i) CHECK(r[i] == doctest::Approx(r[m - 1 - i]).epsilon(1e-5));
  }
}

TEST_CASE("qp: random feasible perturbations do not lower the energy") {
  const auto& c = regular128();
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> nd(0, 1);
  const auto& rho = c.sol.rho.rho;
  const double e0 = energy(c.g, rho);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> y(rho);
    double eps = 1e-3 * (1 + t % 10);
    for (auto& v : y) v += eps * nd(rng);
    auto p = project_feasible(c.g, y);
    CHECK(energy(c.g, p.rho) >= e0 - 1e-9);
  }
}

TEST_CASE("projection: lands in the feasible set") {
  const auto& g = uniform128().g;
  std::vector<double> y(g.m);
  for (int i = 0; i < g.m; ++i) y[i] = std::sin(0.3 * i) * 3;
  auto p = project_feasible(g, y);
  double mass = 0;
  for (int i = 0; i < g.m; ++i) {
    CHECK(p.rho[i] >= 0.0);
    CHECK(p.rho[i] <= g.kappa_bar[i]);
    mass += g.h[i] * p.rho[i];
  }
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  // idempotent
  auto q = project_feasible(g, p.rho);
  for (int i = 0; i < g.m; ++i) CHECK(q.rho[i] == doctest::Approx(p.rho[i]).epsilon(1e-12));
}

TEST_CASE("kkt: class inequalities") {
  for (const Case* c : {&uniform128(), &regular128()}) {
    const auto& s = c->sol;
    for (int i = 0; i < c->g.m; ++i) {
      switch (s.classes[i]) {
        case CellClass::Void: CHECK(s.slack[i] >= -s.kkt_tol); break;
        case CellClass::Saturated: CHECK(s.slack[i] <= s.kkt_tol); break;
        case CellClass::Band: CHECK(std::abs(s.slack[i]) <= s.kkt_tol); break;
      }
    }
    CHECK(s.max_violation <= s.kkt_tol);
  }
}

TEST_CASE("regime: node-density field saturates, engineered field is regular") {
  const auto& u = uniform128().sol;
  CHECK_FALSE(u.flags.all());
  CHECK(u.flags.saturated_cells > 0);

  const auto& r = regular128();
  CHECK(r.sol.flags.r1);
  CHECK(r.sol.flags.r2);
  CHECK(r.sol.flags.r3);
  CHECK(r.sol.flags.r4);
  CHECK(r.sol.flags.band_runs == 1);
  CHECK(r.sol.c > r.g.A);
  CHECK(r.sol.d < r.g.B);
  CHECK(r.sol.c < r.sol.d);
  // symmetric about the field center
  CHECK(r.sol.c + r.sol.d == doctest::Approx(5.0).epsilon(2 * r.g.h[0] / 5.0));
  CHECK(r.sol.c == doctest::Approx(1.345).epsilon(0.01));
}

TEST_CASE("band edges converge as the grid is refined") {
  auto c64 = regular(64);
  const auto& c128 = regular128();
  auto c256 = regular(256);
  double e1 = std::abs(c64.sol.c - c256.sol.c) + std::abs(c64.sol.d - c256.sol.d);
  double e2 = std::abs(c128.sol.c - c256.sol.c) + std::abs(c128.sol.d - c256.sol.d);
  CHECK(e1 < 4 * c64.g.h[0]);
  CHECK(e2 < 4 * c128.g.h[0]);
  CHECK(std::abs(c64.sol.energy - c256.sol.energy) > std::abs(c128.sol.energy - c256.sol.energy));
}

TEST_CASE("effective potential is constant on the band") {
  const auto& r = regular128();
  auto e = effective_potential(r.g, r.sol.rho.rho);
  for (int i = r.sol.band_first + 2; i < r.sol.band_last - 1; ++i)
    CHECK(e[i] == doctest::Approx(r.sol.ell).epsilon(1e-7));
}
