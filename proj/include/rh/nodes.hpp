#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rh/numerics.hpp"

namespace rh {

enum class DensityKind { Uniform, Poly, CosineBump };

// Node density kappa on [A,B], normalized so that its mass is 2.
// Raw densities (before the multiplier):
//   uniform      1
//   poly         sum_k params[k] x^k
//   cosine_bump  base + cos^2(pi (x - center) / (2 width)), params = (center, width, base)
class DensitySpec {
 public:
  DensitySpec() = default;
  DensitySpec(DensityKind kind, double A, double B, std::vector<double> params);

  DensityKind kind() const { return kind_; }
  double A() const { return A_; }
  double B() const { return B_; }
  const std::vector<double>& params() const { return params_; }
  double multiplier() const { return multiplier_; }
  double kappa_min() const { return kappa_min_; }
  double kappa_max() const { return kappa_max_; }
  std::string describe() const;

  double kappa(double x) const { return multiplier_ * raw(x); }
  Real kappa(const Real& x) const;
  // F(x) = int_A^x kappa
  double cdf(double x) const;
  Real cdf(const Real& x) const;
  // exact cell average of kappa over [x0, x1]
  double cell_average(double x0, double x1) const;
  Real cell_average(const Real& x0, const Real& x1) const;

  double raw(double x) const;
  Real raw(const Real& x) const;
  double raw_antiderivative(double x) const;
  Real raw_antiderivative(const Real& x) const;

 private:
  friend DensitySpec build_density(DensityKind, double, double, std::vector<double>);
  DensityKind kind_ = DensityKind::Uniform;
  double A_ = 1, B_ = 3;
  std::vector<double> params_;
  double multiplier_ = 1;
  double kappa_min_ = 1, kappa_max_ = 1;
};

DensityKind parse_density_kind(const std::string& s);
const char* density_kind_name(DensityKind k);

// Throws NonPositiveDensity if the raw density is <= 0 on a 10^3-point probe grid.
DensitySpec build_density(DensityKind kind, double A, double B, std::vector<double> params = {});

struct NodeSet {
  int n = 0;
  std::vector<Real> alpha;    // 2n+1 quantiles
  std::vector<Real> a;        // n * alpha
  std::vector<Real> F_values; // j / n
  Real max_cdf_residual;
};

NodeSet quantile_nodes(const DensitySpec& d, int n);

struct SpacingResult {
  double min_gap_n = 0;
  double max_gap_n = 0;
  double lower_bound = 0;  // 1 / kappa_max
  double upper_bound = 0;  // 1 / kappa_min
  double second_diff_n2 = 0;  // max n^2 |Delta^2 alpha| (diagnostic only)
};

SpacingResult spacing_check(const NodeSet& ns, const DensitySpec& d);

struct SweepFit {
  std::vector<std::pair<int, double>> errors;
  double slope = 0;
};

// |(1/n) sum_j psi(alpha_j) - int psi kappa| over the sweep.
SweepFit riemann_sum_check(const DensitySpec& d, const std::vector<int>& n_list,
                           const std::function<Real(const Real&)>& psi);

// sum_j log(zeta - alpha_j), principal branches.
Complex omega_log_eval(const NodeSet& ns, const Complex& z);

// int_A^B log|z - t| kappa(t) dt by doubling Gauss-Legendre.
Real log_potential(const DensitySpec& d, const Complex& z);

// |(1/n) log|Omega_n(z)| - int log|z - t| kappa| over the sweep.
SweepFit logpot_check(const DensitySpec& d, const std::vector<int>& n_list, const Complex& z);

struct SplitValue {
  Real log_abs;
  Complex phase;  // unit modulus
  Complex value() const { return phase * exp(log_abs); }
};

// omega_n'(a_j) = n^{2n} prod_{k != j} (alpha_j - alpha_k), in split form.
SplitValue omega_prime(const NodeSet& ns, int j);
// Omega_n'(alpha_j) = prod_{k != j} (alpha_j - alpha_k) at working precision.
Real omega_prime_scaled(const NodeSet& ns, int j);

enum class FieldKind { KappaPotential, Quadratic };

// External field V and its continuation V^an.
//   KappaPotential: V(x) = -2 int log|x-t| kappa(t) dt, evaluated against
//                   kappa cell averages on 2^10 cells with exact log antiderivatives.
//   Quadratic:      V(x) = strength (x - center)^2 (engineered test field).
class FieldEvaluator {
 public:
  FieldEvaluator() = default;
  explicit FieldEvaluator(const DensitySpec& d, int cells = 1024);
  static FieldEvaluator quadratic(const DensitySpec& d, double strength, double center);

  FieldKind kind() const { return kind_; }
  const DensitySpec& density() const { return d_; }
  double strength() const { return strength_; }
  double center() const { return center_; }

  Real external_field(const Real& x) const;
  double external_field(double x) const;
  // off-cut analytic continuation; throws OnCut on [A,B] for the kappa field
  Complex analytic_field(const Complex& z, Side side = Side::None) const;
  // int_{x0}^{x1} V(x) dx (exact for both kinds, given the cell averages)
  double field_cell_integral(double x0, double x1) const;

  const std::vector<double>& cell_edges() const { return edges_; }
  const std::vector<double>& cell_kappa() const { return kbar_; }

 private:
  FieldKind kind_ = FieldKind::KappaPotential;
  DensitySpec d_;
  std::vector<double> edges_;
  std::vector<double> kbar_;
  double strength_ = 0, center_ = 0;
};

// Exact integrals of logarithms over intervals.
//   int_{t0}^{t1} log|x - t| dt
double log_abs_cell_integral(double x, double t0, double t1);
Real log_abs_cell_integral(const Real& x, const Real& t0, const Real& t1);
//   int_{t0}^{t1} log(z - t) dt with principal branches (z off the segment)
Complex log_cell_integral(const Complex& z, const Real& t0, const Real& t1, Side side = Side::None);
//   int_a^b int_c^d log|x - y| dy dx
long double log_abs_pair_integral(long double a, long double b, long double c, long double d);

}  // namespace rh
