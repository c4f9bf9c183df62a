#pragma once

#include <string>
#include <vector>

#include "rh/nodes.hpp"

namespace rh {

// Piecewise-constant discretization of the weighted log energy on m uniform
// cells of [A,B]. For cell densities rho:
//   I(rho) = rho^T K rho + v^T rho,  K_ij = int_i int_j log(1/|x-y|),  v_i = int_i V.
struct EnergyGrid {
  int m = 0;
  double A = 0, B = 0;
  std::vector<double> edges;      // m+1
  std::vector<double> h;          // cell widths
  std::vector<double> centers;
  std::vector<double> kappa_bar;  // exact cell averages of kappa
  std::vector<double> K;          // row-major m x m
  std::vector<double> v;
  double field_scale = 1;         // max(1, max_i |v_i / h_i|)

  double kernel(int i, int j) const { return K[static_cast<size_t>(i) * m + j]; }
};

EnergyGrid assemble_grid(const DensitySpec& d, const FieldEvaluator& fe, int m);

// int_0^h int_0^h log(1/|x-y|) dx dy
double self_cell_kernel(double h);

struct ConstrainedMeasure {
  std::vector<double> rho;
  double mass = 0;
};

// rho = kappa/2 (mass 1, inside the box)
ConstrainedMeasure default_start(const EnergyGrid& g);
// A different feasible start: kappa-weighted ramp projected onto the feasible set.
ConstrainedMeasure ramp_start(const EnergyGrid& g);
// Euclidean (h-weighted) projection onto {0 <= rho <= kappa_bar, sum h rho = 1}.
ConstrainedMeasure project_feasible(const EnergyGrid& g, const std::vector<double>& y);

double energy(const EnergyGrid& g, const std::vector<double>& rho);
// e_i = (2 K rho + v)_i / h_i = cell average of 2U + V
std::vector<double> effective_potential(const EnergyGrid& g, const std::vector<double>& rho);

struct QpOptions {
  double qp_tol = 1e-10;
  int max_iter = 100000;
  bool polish = true;
};

enum class CellClass { Void, Band, Saturated };
const char* cell_class_name(CellClass c);

struct RegimeFlags {
  bool r1 = false, r2 = false, r3 = false, r4 = false;
  int band_runs = 0;
  int saturated_cells = 0;
  double r2_margin = 0;
  double r3_misfit_c = 1, r3_misfit_d = 1;
  double r4_margin = 0;
  double r4_delta = 0;
  bool all() const { return r1 && r2 && r3 && r4; }
};

struct EquilibriumSolution {
  ConstrainedMeasure rho;
  double energy = 0;
  std::vector<double> energy_trace;
  int iterations = 0;
  int polish_steps = 0;
  double pg_norm = 0;         // ||rho - P(rho - e)||_inf at exit
  double min_curvature = 0;   // min s^T K s / |s|^2 over accepted steps
  bool converged = false;

  // filled by kkt_certify
  double ell = 0;
  std::vector<double> e;       // effective potential per cell
  std::vector<double> slack;   // e_i - ell
  std::vector<CellClass> classes;
  double kkt_tol = 0, sat_tol = 0;
  double max_violation = 0;

  // filled by classify_regime / extract_band
  RegimeFlags flags;
  double c = 0, d = 0, band_uncertainty = 0;
  int band_first = -1, band_last = -1;
};

// Throws NoConvergence after max_iter iterations.
EquilibriumSolution solve_qp(const EnergyGrid& g, const ConstrainedMeasure& start, const QpOptions& opt = {});

// Classifies cells and computes ell; throws InconsistentKKT if any cell
// violates its class inequality by more than kkt_tol = 10 qp_tol field_scale.
void kkt_certify(EquilibriumSolution& sol, const EnergyGrid& g, double qp_tol = 1e-10);

RegimeFlags classify_regime(EquilibriumSolution& sol, const EnergyGrid& g);

struct EdgeFit {
  double edge = 0;
  double coeff = 0;   // C in C |x - e|^{1/2}
  double misfit = 1;  // relative l2 misfit of the cell averages
};
// Square-root fit at the left (c) or right (d) end of the band run.
EdgeFit fit_sqrt_edge(const EquilibriumSolution& sol, const EnergyGrid& g, bool left);

// Endpoints from the square-root fits, clamped to the first/last band cell.
void extract_band(EquilibriumSolution& sol, const EnergyGrid& g);

// assemble + solve + certify + classify + extract
EquilibriumSolution solve_equilibrium(const EnergyGrid& g, const QpOptions& opt = {});

}  // namespace rh
