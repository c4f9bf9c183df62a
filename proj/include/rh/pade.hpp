#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rh/nodes.hpp"
#include "rh/specialfn.hpp"

namespace rh {

// f(a) for a = n alpha (complex a allowed for contour work).
using SampleFn = std::function<Complex(const Complex&)>;

SampleFn hurwitz_sampler(const Complex& s);
CVec sample_at_nodes(const NodeSet& ns, const SampleFn& f);

// Unknowns (q_0..q_{n-1}, p_0..p_n) of Qhat = zeta^n + sum q_k zeta^k and
// Phat = sum p_k zeta^k; row j encodes Qhat(alpha_j) f_j - Phat(alpha_j) = 0.
struct PadeSystem {
  int n = 0;
  DenseMatrix M;
  CVec b;
  std::vector<Real> alpha;
  CVec f;
};

PadeSystem assemble_system(const NodeSet& ns, const CVec& f);

struct NdCheck {
  bool nd_holds = false;
  bool singular = false;
  Real log_abs_det;
  Real cond_estimate;
  long bits = 0;
};

NdCheck check_nd(const PadeSystem& sys);

struct PadePair {
  int n = 0;
  Polynomial Qhat;  // monic, degree n in zeta = z/n
  Polynomial Phat;  // degree <= n
  CVec interp_residuals;      // Qhat(alpha_j) f_j - Phat(alpha_j)
  Real max_abs_residual;      // max_j |residual_j|
  Real max_normwise_residual; // max_j |residual_j| / (|row_j| |x| + |b_j|)
  Real log_abs_det;
  Real cond_estimate;
  int reduced_degree = -1;    // set when the solve fell back to a lower type (m,m)
};

// Throws Degenerate when (ND)_n fails.
PadePair solve_pade(const PadeSystem& sys);

// For data whose type-(n,n) system is singular (e.g. lower-type rational f):
// smallest m <= n whose (m,m) approximant on 2m+1 of the nodes interpolates
// all 2n+1 data values. Throws Degenerate if none exists.
PadePair solve_pade_reduced(const NodeSet& ns, const CVec& f);

// w_{n,j} = f(a_j) / omega_n'(a_j) = n^{-2n} f_j / Omega_n'(alpha_j).
struct WeightSet {
  int n = 0;
  std::vector<SplitValue> log_w;  // full weights, split form
  CVec w_scaled;                  // f_j / Omega_n'(alpha_j)
  Complex value(int j) const { return log_w[j].value(); }
};

WeightSet build_weights(const NodeSet& ns, const CVec& f);

struct OrthogonalityResult {
  std::vector<Real> normalized;  // k = 0..n-1
  Real max_normalized;
  Real degree_n_normalized;  // k = n, outside the lemma's range (report only)
};

OrthogonalityResult discrete_orthogonality_check(const PadePair& pp, const WeightSet& ws, const NodeSet& ns);

struct BarycentricValue {
  Complex W;       // W_n(n zeta)
  Complex L;       // L_n(n zeta) (Lagrange form)
  Complex omega;   // omega_n(n zeta)
  Real residual;   // |W omega - L| / |L|
};

// Throws AtNode if zeta coincides with a node.
BarycentricValue eval_Wn_Ln(const WeightSet& ws, const NodeSet& ns, const CVec& f, const Complex& zeta);

// Lagrange interpolant of f at the nodes, evaluated at z = n zeta.
Complex lagrange_eval(const NodeSet& ns, const CVec& f, const Complex& zeta);

struct HermiteWalshResult {
  Complex value;
  int samples = 0;
};

// Interpolant of g(xi) = f(n xi) at the scaled nodes, evaluated at zeta by the
// Hermite contour formula. zeta may lie inside or outside the contour; the
// contour must wind once around every node. Throws ContourInvalid otherwise.
HermiteWalshResult hermite_walsh_eval(const NodeSet& ns, const SampleFn& f, const Curve& contour,
                                      const Complex& zeta, int m0 = 256);

// Contour Gamma: ellipse with real vertices A - 0.25(B-A), B + 0.25(B-A)
// (left vertex clipped to >= A/2) and semi-minor axis 0.5(B-A).
struct EllipseSpec {
  Real cx, ax, by;
  Curve curve() const { return Curve::ellipse(Complex(cx), ax, by); }
};
EllipseSpec default_contour(const DensitySpec& d);

class YEvaluator {
 public:
  YEvaluator(const PadePair& pp, const WeightSet& ws, const NodeSet& ns);

  int n() const { return n_; }
  const Polynomial& Qprev() const { return qprev_; }  // monic, degree n-1 in zeta
  const Complex& gamma_prev() const { return gamma_; }

  // Y(z) in the unscaled variable z.
  DenseMatrix operator()(const Complex& z) const;
  // Y(z) z^{-n sigma3}, evaluated in scaled form (no n^n growth).
  DenseMatrix normalized(const Complex& z) const;

  // Contour-integral residues of Y12 and Y22 at a_j on a circle of radius
  // r (in z units), compared with Y11(a_j) w_j and Y21(a_j) w_j.
  struct ResidueCheck {
    Complex res12, expect12, res22, expect22;
    Real rel12, rel22;
  };
  ResidueCheck residue_check(int j, const Real& radius) const;

  Complex det(const Complex& z) const;

 private:
  int n_;
  Polynomial qhat_, qprev_;
  std::vector<Real> alpha_;
  CVec w_scaled_;
  CVec qa_, qpa_;   // Qhat(alpha_j), Qprev(alpha_j)
  Real log_n_;
  Complex gamma_;   // gamma_{n-1} in z units
  Complex hhat_;    // sum Qprev(alpha_j) alpha_j^{n-1} w~_j
  std::vector<SplitValue> w_full_;
};

struct InterpolantRecovery {
  Polynomial interpolant;  // interpolant of Qhat f at the nodes (degree <= 2n)
  Real tail_ratio;         // max_{k>n} |c_k| / max_k |c_k|
  Real p_mismatch;         // max_k |c_k - p_k| / max_k |p_k|  (k <= n)
};

// Throws DegreeCollapseFailed if tail_ratio exceeds 2^{-bits/4}.
InterpolantRecovery recover_P_interpolant(const PadePair& pp, const NodeSet& ns, const CVec& f);

// Precision-escalating driver for one n: nodes, samples, system, solve.
struct PadeRun {
  int n = 0;
  long bits_used = 0;
  std::vector<long> bits_tried;
  NodeSet ns;
  CVec f;
  NdCheck nd;
  bool solved = false;
  PadePair pair;
  WeightSet weights;
};

PadeRun run_pade(const DensitySpec& d, const SampleFn& f, int n, long bits, long bits_cap = 8192);

}  // namespace rh
