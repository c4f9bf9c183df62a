#include "rh/nodes.hpp"

#include <cmath>
#include <sstream>

namespace rh {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

DensityKind parse_density_kind(const std::string& s) {
  if (s == "uniform") return DensityKind::Uniform;
  if (s == "poly") return DensityKind::Poly;
  if (s == "cosine_bump") return DensityKind::CosineBump;
  throw Error(ErrorKind::Config, "unknown density kind '" + s + "'");
}

const char* density_kind_name(DensityKind k) {
  switch (k) {
    case DensityKind::Uniform: return "uniform";
    case DensityKind::Poly: return "poly";
    case DensityKind::CosineBump: return "cosine_bump";
  }
  return "?";
}

DensitySpec::DensitySpec(DensityKind kind, double A, double B, std::vector<double> params)
    : kind_(kind), A_(A), B_(B), params_(std::move(params)) {
  if (kind_ == DensityKind::Poly && params_.empty())
    throw Error(ErrorKind::Config, "poly density needs coefficients");
  if (kind_ == DensityKind::CosineBump && params_.size() != 3)
    throw Error(ErrorKind::Config, "cosine_bump density needs (center, width, base)");
  if (kind_ == DensityKind::CosineBump && !(params_[1] > 0))
    throw Error(ErrorKind::Config, "cosine_bump width must be positive");
  multiplier_ = 2.0 / (raw_antiderivative(B_) - raw_antiderivative(A_));
}

std::string DensitySpec::describe() const {
  std::ostringstream os;
  os << density_kind_name(kind_) << "[" << A_ << "," << B_ << "]";
  if (!params_.empty()) {
    os << "(";
    for (size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "") << params_[i];
    os << ")";
  }
  return os.str();
}

double DensitySpec::raw(double x) const {
  switch (kind_) {
    case DensityKind::Uniform: return 1.0;
    case DensityKind::Poly: {
      double s = 0;
      for (size_t k = params_.size(); k-- > 0;) s = s * x + params_[k];
      return s;
    }
    case DensityKind::CosineBump: {
      double c = std::cos(kPi * (x - params_[0]) / (2 * params_[1]));
      return params_[2] + c * c;
    }
  }
  return 0;
}

Real DensitySpec::raw(const Real& x) const {
  switch (kind_) {
    case DensityKind::Uniform: return Real(1);
    case DensityKind::Poly: {
      Real s(0);
      for (size_t k = params_.size(); k-- > 0;) s = s * x + Real(params_[k]);
      return s;
    }
    case DensityKind::CosineBump: {
      Real c = cos(pi() * (x - Real(params_[0])) / (Real(params_[1]) * 2));
      return Real(params_[2]) + c * c;
    }
  }
  return Real(0);
}

double DensitySpec::raw_antiderivative(double x) const {
  switch (kind_) {
    case DensityKind::Uniform: return x;
    case DensityKind::Poly: {
      double s = 0;
      for (size_t k = params_.size(); k-- > 0;) s = s * x + params_[k] / static_cast<double>(k + 1);
      return s * x;
    }
    case DensityKind::CosineBump: {
      double c = params_[0], w = params_[1], b = params_[2];
      return b * x + (x - c) / 2 + w / (2 * kPi) * std::sin(kPi * (x - c) / w);
    }
  }
  return 0;
}

Real DensitySpec::raw_antiderivative(const Real& x) const {
  switch (kind_) {
    case DensityKind::Uniform: return x;
    case DensityKind::Poly: {
      Real s(0);
      for (size_t k = params_.size(); k-- > 0;) s = s * x + Real(params_[k]) / Real(static_cast<long>(k + 1));
      return s * x;
    }
    case DensityKind::CosineBump: {
      Real c(params_[0]), w(params_[1]), b(params_[2]);
      return b * x + (x - c) / 2 + w / (pi() * 2) * sin(pi() * (x - c) / w);
    }
  }
  return Real(0);
}

Real DensitySpec::kappa(const Real& x) const {
  // multiplier recomputed at working precision so that the CDF hits 2 exactly
  Real m = Real(2) / (raw_antiderivative(Real(B_)) - raw_antiderivative(Real(A_)));
  return m * raw(x);
}

double DensitySpec::cdf(double x) const { return multiplier_ * (raw_antiderivative(x) - raw_antiderivative(A_)); }

Real DensitySpec::cdf(const Real& x) const {
  Real lo = raw_antiderivative(Real(A_));
  Real m = Real(2) / (raw_antiderivative(Real(B_)) - lo);
  return m * (raw_antiderivative(x) - lo);
}

double DensitySpec::cell_average(double x0, double x1) const {
  return multiplier_ * (raw_antiderivative(x1) - raw_antiderivative(x0)) / (x1 - x0);
}

Real DensitySpec::cell_average(const Real& x0, const Real& x1) const {
  Real m = Real(2) / (raw_antiderivative(Real(B_)) - raw_antiderivative(Real(A_)));
  return m * (raw_antiderivative(x1) - raw_antiderivative(x0)) / (x1 - x0);
}

DensitySpec build_density(DensityKind kind, double A, double B, std::vector<double> params) {
  if (!(A > 0 && B > A)) throw Error(ErrorKind::Config, "density interval must satisfy 0 < A < B");
  DensitySpec d(kind, A, B, std::move(params));
  double lo = INFINITY, hi = -INFINITY;
  const int probes = 1000;
  for (int i = 0; i <= probes; ++i) {
    double x = A + (B - A) * i / probes;
    double r = d.raw(x);
    if (!(r > 0)) throw Error(ErrorKind::NonPositiveDensity, "raw density not positive at x=" + std::to_string(x));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  if (!(d.multiplier() > 0)) throw Error(ErrorKind::NonPositiveDensity, "density has non-positive mass");
  // kappa_min / kappa_max from the probe grid, refined by golden-section search
  // around the extreme probes for the smooth kinds.
  auto refine = [&](bool want_max) {
    int best_i = 0;
    double best = want_max ? -INFINITY : INFINITY;
    for (int i = 0; i <= probes; ++i) {
      double r = d.raw(A + (B - A) * i / probes);
      if (want_max ? r > best : r < best) {
        best = r;
        best_i = i;
      }
    }
    double a = A + (B - A) * std::max(0, best_i - 1) / probes;
    double b = A + (B - A) * std::min(probes, best_i + 1) / probes;
    const double g = 0.5 * (std::sqrt(5.0) - 1);
    for (int it = 0; it < 80; ++it) {
      double x1 = b - g * (b - a), x2 = a + g * (b - a);
      double f1 = d.raw(x1), f2 = d.raw(x2);
      bool left = want_max ? f1 > f2 : f1 < f2;
      if (left) b = x2; else a = x1;
    }
    double v = d.raw(0.5 * (a + b));
    return want_max ? std::max(best, v) : std::min(best, v);
  };
  lo = refine(false);
  hi = refine(true);
  d.kappa_min_ = d.multiplier() * lo;
  d.kappa_max_ = d.multiplier() * hi;
  return d;
}

// ---------------------------------------------------------------- nodes

NodeSet quantile_nodes(const DensitySpec& d, int n) {
  if (n < 1) throw Error(ErrorKind::DomainError, "quantile_nodes: n >= 1 required");
  NodeSet ns;
  ns.n = n;
  const int count = 2 * n + 1;
  ns.alpha.resize(count);
  ns.a.resize(count);
  ns.F_values.resize(count);
  const Real A(d.A()), B(d.B());
  const Real width_stop = ldexp(Real(1), -40);
  const Real tol = ldexp(Real(1), -working_bits() + 6);
  ns.max_cdf_residual = Real(0);
  Real lo_prev = A;
  for (int j = 0; j < count; ++j) {
    Real target = Real(j) / Real(n);
    ns.F_values[j] = target;
    Real x;
    if (j == 0) {
      x = A;
    } else if (j == count - 1) {
      x = B;
    } else {
      Real lo = lo_prev, hi = B;
      Real flo = d.cdf(lo) - target, fhi = d.cdf(hi) - target;
      if (flo.sign() > 0 || fhi.sign() < 0)
        throw Error(ErrorKind::RootNotBracketed, "quantile " + std::to_string(j) + " not bracketed");
      while (hi - lo > width_stop) {
        Real mid = (lo + hi) / 2;
        if ((d.cdf(mid) - target).sign() <= 0) lo = mid; else hi = mid;
      }
      x = (lo + hi) / 2;
      for (int it = 0; it < 60; ++it) {
        Real r = d.cdf(x) - target;
        Real step = r / d.kappa(x);
        x -= step;
        if (abs(step) <= tol * abs(x)) break;
      }
      lo_prev = x;
    }
    ns.alpha[j] = x;
    ns.a[j] = x * Real(n);
    ns.max_cdf_residual = max(ns.max_cdf_residual, abs(d.cdf(x) - target));
  }
  for (int j = 1; j < count; ++j)
    if (!(ns.alpha[j] > ns.alpha[j - 1]))
      throw Error(ErrorKind::RootNotBracketed, "quantiles not strictly increasing");
  return ns;
}

SpacingResult spacing_check(const NodeSet& ns, const DensitySpec& d) {
  SpacingResult r;
  r.min_gap_n = INFINITY;
  r.max_gap_n = 0;
  for (size_t j = 1; j < ns.alpha.size(); ++j) {
    double g = ((ns.alpha[j] - ns.alpha[j - 1]) * Real(ns.n)).to_double();
    r.min_gap_n = std::min(r.min_gap_n, g);
    r.max_gap_n = std::max(r.max_gap_n, g);
  }
  for (size_t j = 2; j < ns.alpha.size(); ++j) {
    Real d2 = ns.alpha[j] - ns.alpha[j - 1] * 2 + ns.alpha[j - 2];
    r.second_diff_n2 = std::max(r.second_diff_n2, abs(d2 * Real(ns.n) * Real(ns.n)).to_double());
  }
  r.lower_bound = 1.0 / d.kappa_max();
  r.upper_bound = 1.0 / d.kappa_min();
  return r;
}

SweepFit riemann_sum_check(const DensitySpec& d, const std::vector<int>& n_list,
                           const std::function<Real(const Real&)>& psi) {
  Real exact = gauss_legendre([&](const Real& x) { return Complex(psi(x) * d.kappa(x)); }, Real(d.A()),
                              Real(d.B()), 16)
                   .value.re;
  SweepFit out;
  std::vector<std::pair<double, double>> pts;
  for (int n : n_list) {
    NodeSet ns = quantile_nodes(d, n);
    Real s(0);
    for (const auto& a : ns.alpha) s += psi(a);
    double err = abs(s / Real(n) - exact).to_double();
    out.errors.emplace_back(n, err);
    pts.emplace_back(n, err);
  }
  out.slope = fit_rate(pts).slope;
  return out;
}

Complex omega_log_eval(const NodeSet& ns, const Complex& z) {
  if (z.im.is_zero() && z.re >= ns.alpha.front() && z.re <= ns.alpha.back())
    throw Error(ErrorKind::OnCut, "omega_log_eval on [A,B]");
  Complex s(0);
  for (const auto& a : ns.alpha) s += principal_log(z - a);
  return s;
}

Real log_potential(const DensitySpec& d, const Complex& z) {
  auto f = [&](const Real& t) { return Complex(log(abs(z - t)) * d.kappa(t)); };
  return gauss_legendre(f, Real(d.A()), Real(d.B()), 32, Real(1)).value.re;
}

SweepFit logpot_check(const DensitySpec& d, const std::vector<int>& n_list, const Complex& z) {
  Real pot = log_potential(d, z);
  SweepFit out;
  std::vector<std::pair<double, double>> pts;
  for (int n : n_list) {
    NodeSet ns = quantile_nodes(d, n);
    Real lhs = omega_log_eval(ns, z).re / Real(n);
    double err = abs(lhs - pot).to_double();
    out.errors.emplace_back(n, err);
    pts.emplace_back(n, err);
  }
  out.slope = fit_rate(pts).slope;
  return out;
}

Real omega_prime_scaled(const NodeSet& ns, int j) {
  Real p(1);
  for (size_t k = 0; k < ns.alpha.size(); ++k)
    if (static_cast<int>(k) != j) p *= ns.alpha[j] - ns.alpha[k];
  return p;
}

SplitValue omega_prime(const NodeSet& ns, int j) {
  const int count = static_cast<int>(ns.alpha.size());
  if (j < 0 || j >= count) throw Error(ErrorKind::DomainError, "omega_prime: index out of range");
  SplitValue v;
  v.log_abs = log(Real(ns.n)) * Real(2 * ns.n);
  for (int k = 0; k < count; ++k)
    if (k != j) v.log_abs += log(abs(ns.alpha[j] - ns.alpha[k]));
  // factors with k > j are negative
  v.phase = Complex(((count - 1 - j) % 2) ? -1 : 1);
  return v;
}

// ---------------------------------------------------------------- log integrals

namespace {
// H(u) = u log|u| - u, H(0) = 0
double H(double u) { return u == 0 ? 0.0 : u * std::log(std::fabs(u)) - u; }
Real H(const Real& u) { return u.is_zero() ? Real(0) : u * log(abs(u)) - u; }
long double F2(long double u) {
  if (u == 0) return 0.0L;
  return u * u * 0.5L * std::log(std::fabs(u)) - 0.75L * u * u;
}
}  // namespace

double log_abs_cell_integral(double x, double t0, double t1) { return H(x - t0) - H(x - t1); }

Real log_abs_cell_integral(const Real& x, const Real& t0, const Real& t1) { return H(x - t0) - H(x - t1); }

Complex log_cell_integral(const Complex& z, const Real& t0, const Real& t1, Side side) {
  auto G = [&](const Complex& u) {
    if (u.is_zero()) return Complex(0);
    return u * principal_log(u, side) - u;
  };
  return G(z - t0) - G(z - t1);
}

long double log_abs_pair_integral(long double a, long double b, long double c, long double d) {
  return F2(b - c) - F2(a - c) - F2(b - d) + F2(a - d);
}

// ---------------------------------------------------------------- field

FieldEvaluator::FieldEvaluator(const DensitySpec& d, int cells) : kind_(FieldKind::KappaPotential), d_(d) {
  edges_.resize(cells + 1);
  kbar_.resize(cells);
  for (int i = 0; i <= cells; ++i) edges_[i] = d.A() + (d.B() - d.A()) * i / cells;
  for (int i = 0; i < cells; ++i) kbar_[i] = d.cell_average(edges_[i], edges_[i + 1]);
}

FieldEvaluator FieldEvaluator::quadratic(const DensitySpec& d, double strength, double center) {
  FieldEvaluator f;
  f.kind_ = FieldKind::Quadratic;
  f.d_ = d;
  f.strength_ = strength;
  f.center_ = center;
  return f;
}

double FieldEvaluator::external_field(double x) const {
  if (kind_ == FieldKind::Quadratic) return strength_ * (x - center_) * (x - center_);
  double s = 0;
  for (size_t i = 0; i < kbar_.size(); ++i) s += kbar_[i] * log_abs_cell_integral(x, edges_[i], edges_[i + 1]);
  return -2 * s;
}

Real FieldEvaluator::external_field(const Real& x) const {
  if (kind_ == FieldKind::Quadratic) return Real(strength_) * (x - Real(center_)) * (x - Real(center_));
  // telescoped: sum_i kbar_i (H(x - e_i) - H(x - e_{i+1}))
  std::vector<Real> h(edges_.size());
  for (size_t i = 0; i < edges_.size(); ++i) h[i] = H(x - Real(edges_[i]));
  Real s(0);
  for (size_t i = 0; i < kbar_.size(); ++i) s += Real(kbar_[i]) * (h[i] - h[i + 1]);
  return s * Real(-2);
}

Complex FieldEvaluator::analytic_field(const Complex& z, Side side) const {
  if (kind_ == FieldKind::Quadratic) {
    Complex u = z - Real(center_);
    return u * u * Real(strength_);
  }
  if (side == Side::None && z.im.is_zero() && z.re >= d_.A() && z.re <= d_.B())
    throw Error(ErrorKind::OnCut, "analytic_field on [A,B] without side");
  std::vector<Complex> g(edges_.size());
  for (size_t i = 0; i < edges_.size(); ++i) {
    Complex u = z - Real(edges_[i]);
    g[i] = u.is_zero() ? Complex(0) : u * principal_log(u, side) - u;
  }
  Complex s(0);
  for (size_t i = 0; i < kbar_.size(); ++i) s += (g[i] - g[i + 1]) * Real(kbar_[i]);
  return s * Real(-2);
}

double FieldEvaluator::field_cell_integral(double x0, double x1) const {
  if (kind_ == FieldKind::Quadratic) {
    auto P = [&](double x) { return strength_ * std::pow(x - center_, 3) / 3.0; };
    return P(x1) - P(x0);
  }
  long double s = 0;
  for (size_t i = 0; i < kbar_.size(); ++i)
    s += static_cast<long double>(kbar_[i]) * log_abs_pair_integral(x0, x1, edges_[i], edges_[i + 1]);
  return static_cast<double>(-2 * s);
}

}  // namespace rh
