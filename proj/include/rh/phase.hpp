#pragma once

#include <vector>

#include "rh/equilibrium.hpp"
#include "rh/pade.hpp"

namespace rh {

// g(zeta) = int log(zeta - x) dmu(x) for the piecewise-constant equilibrium
// density, with exact per-cell antiderivatives; phi = -2 g + V^an - ell.
// g has its cut on (-inf, x_max] (x_max = right end of the support); points on
// that cut need an explicit side.
class GPhaseEvaluator {
 public:
  GPhaseEvaluator(const EquilibriumSolution& sol, const EnergyGrid& grid, const FieldEvaluator& fe);

  Complex g(const Complex& z, Side side = Side::None) const;
  Complex phase(const Complex& z, Side side = Side::None) const;
  // mu([x, +inf)) and int log|x - t| dmu(t), by direct cell sums
  Real mu_right(const Real& x) const;
  Real log_abs_potential(const Real& x) const;

  double c() const { return c_; }
  double d() const { return d_; }
  double ell() const { return ell_; }
  double support_left() const { return edges_.front(); }
  double support_right() const { return edges_.back(); }
  const FieldEvaluator& field() const { return fe_; }

 private:
  std::vector<double> edges_;  // support cells only
  std::vector<double> rho_;
  double c_ = 0, d_ = 0, ell_ = 0;
  FieldEvaluator fe_;
};

// a(zeta) = ((zeta-d)/(zeta-c))^{1/4}, N = (1/2)[[a+1/a, (a-1/a)/i], [-(a-1/a)/i, a+1/a]]
class OuterParametrix {
 public:
  OuterParametrix(const Real& c, const Real& d) : c_(c), d_(d) {}
  // On (c,d) a side is required (OnBand otherwise); Plus is the upper side.
  Complex a(const Complex& z, Side side = Side::None) const;
  DenseMatrix N(const Complex& z, Side side = Side::None) const;
  const Real& c() const { return c_; }
  const Real& d() const { return d_; }

 private:
  Real c_, d_;
};

// Airy model matrix with det = 1, band jump A_+ = A_- [[0,1],[-1,0]] on the
// negative axis, lower-triangular jumps on arg = +-2pi/3, and
//   A(xi) = xi^{-sigma3/4} M (I + O(xi^{-3/2})) e^{-(2/3) xi^{3/2} sigma3},
//   M = (1/sqrt2) [[1, i], [i, 1]].
// Throws SectorBoundary within 2^{-bits/2} (relative) of arg in {0, +-2pi/3, pi}.
DenseMatrix airy_model(const Complex& xi);
DenseMatrix airy_constant_M();
DenseMatrix airy_constant_M_inverse();

struct AiryResidual {
  Real middle;  // ||M^{-1} xi^{sigma3/4} A e^{(2/3)xi^{3/2} sigma3} - I||_F
  Real left;    // ||A e^{(2/3)xi^{3/2} sigma3} M^{-1} xi^{sigma3/4} - I||_F (diagnostic)
};
AiryResidual airy_asymptotic_residual(const Complex& xi);

// xi(zeta) = s (zeta - e) h(zeta) with s = +1 at d and -1 at c, so that xi > 0
// on the void side and (2/3) xi^{3/2} = phi_loc / 2, phi_loc = phi - phi_pm(e).
class ConformalMap {
 public:
  ConformalMap(const GPhaseEvaluator& ev, double endpoint, bool left_endpoint, double delta, int degree = 8,
               int samples = 64);

  bool left() const { return left_; }
  const Real& endpoint() const { return e_; }
  double delta() const { return delta_; }
  double fit_radius() const { return 0.5 * delta_; }

  Complex phi_loc(const Complex& z, Side side = Side::None) const;
  // direct: from phi_loc at z; fit: from the circle fit of the cofactor
  Complex xi_direct(const Complex& z, Side side = Side::None) const;
  Complex xi_fit(const Complex& z, Side side = Side::None) const;
  // fit inside the fit circle, direct outside
  Complex xi(const Complex& z, Side side = Side::None) const;

  Real h0() const { return h0_; }          // xi'(e) in the outward direction
  Real fit_residual() const { return fit_residual_; }
  // max |(4/3) xi_fit^{3/2} - phi_loc| / |phi_loc| on the fit circle
  Real relation_residual() const { return relation_residual_; }

  // Side of the band (z real) that needs explicit side selection.
  bool on_band_side(const Complex& z) const;

 private:
  Complex cofactor_direct(const Complex& z, Side side) const;
  const GPhaseEvaluator* ev_;
  Real e_;
  bool left_;
  double delta_;
  Complex phi_e_plus_, phi_e_minus_;
  std::vector<Complex> coeffs_;  // cofactor F = sum b_k (z-e)^k
  Real h0_, fit_residual_, relation_residual_;
};

// P(zeta) = E(zeta) A(n^{2/3} xi(zeta)) e^{n phi_loc sigma3 / 2} at d and
// P = E sigma3 A sigma3 e^{n phi_loc sigma3/2} at c; E = N M^{-1} xi~^{sigma3/4}
// at d and N M xi~^{sigma3/4} at c.
class LocalParametrix {
 public:
  LocalParametrix(const ConformalMap& cm, const OuterParametrix& op, int n) : cm_(&cm), op_(&op), n_(n) {}
  DenseMatrix E(const Complex& z, Side side = Side::None, bool use_fit = false) const;
  DenseMatrix P(const Complex& z, Side side = Side::None) const;
  // sup over samples on |z - e| = radius of ||P N^{-1} - I||_F
  Real matching_error(double radius, int samples = 64) const;
  // max ||E_+ - E_-||_F / ||E|| at points of the band side inside the fit circle
  Real e_jump_band_side(int samples = 8) const;
  Real e_jump_void_side(int samples = 8) const;
  int n() const { return n_; }

 private:
  const ConformalMap* cm_;
  const OuterParametrix* op_;
  int n_;
};

// Lens lips: circular arcs through c, d and (mid, +-height).
struct LensLips {
  std::vector<Complex> upper, lower;  // samples outside both endpoint disks
};
LensLips make_lips(double c, double d, double height, double delta, int samples = 200);

struct PhaseSignScan {
  double min_re_phi = 0;
  double max_re_phi = 0;
  double c0 = 0;  // -max Re phi on the lips (decay rate of e^{n phi})
};
PhaseSignScan phase_sign_scan(const GPhaseEvaluator& ev, const LensLips& lips);

struct LipDecay {
  std::vector<std::pair<int, double>> sup_norms;  // n, sup |e^{n phi}|
  double slope = 0;                               // semi-log
  double c0 = 0;
};
LipDecay lens_jump_norms(const GPhaseEvaluator& ev, const LensLips& lips, const std::vector<int>& n_list);

// E_n(zeta) = W~_n(zeta) e^{-(n/2) V^an(zeta)}, W~_n = n^{-2n-1} sum_j w~_j / (zeta - alpha_j).
// Returns (1/n) log|E_n(zeta)|.
double log_En_over_n(const WeightSet& ws, const NodeSet& ns, const FieldEvaluator& fe, const Complex& zeta);
// Same quantity from the barycentric form L~_n / (n^{2n+1} Omega_n e^{(n/2)V^an}).
double log_En_over_n_barycentric(const NodeSet& ns, const CVec& f, const FieldEvaluator& fe,
                                 const Complex& zeta);

struct WnFactorization {
  std::vector<std::pair<int, double>> values;  // n, (1/n) log|E_n|
  bool monotone = false;
  double C = 0;            // least-squares fit of |q| ~ C log n / n
  double worst_ratio = 0;  // max_n |q_n| / (C log n / n)
  bool pass = false;
};
WnFactorization wn_factorization_check(const std::vector<std::pair<int, double>>& values);

// |Qhat_n(zeta) e^{-n g(zeta)} - N_11(zeta)|
Real strong_asymptotics_residual(const PadePair& pp, const GPhaseEvaluator& ev, const OuterParametrix& op,
                                 const Complex& zeta);

// Disk radius delta = min(0.1 (d-c), 0.5 dist({c,d}, {A,B})).
double disk_radius(double c, double d, double A, double B);

// K points {B+1, (A+B)/2 + i(B-A), 2B}
std::vector<Complex> k_points(double A, double B);

}  // namespace rh
