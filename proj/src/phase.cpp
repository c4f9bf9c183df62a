#include "rh/phase.hpp"

#include <algorithm>
#include <cmath>

namespace rh {

namespace {

Complex Gfun(const Complex& u, Side side) {
  if (u.is_zero()) return Complex(0);
  return u * principal_log(u, side) - u;
}

Side flip(Side s) {
  if (s == Side::Plus) return Side::Minus;
  if (s == Side::Minus) return Side::Plus;
  return s;
}

DenseMatrix diag2(const Complex& a, const Complex& b) {
  return DenseMatrix::two_by_two(a, Complex(0), Complex(0), b);
}

const Complex& omega() {
  thread_local long bits = 0;
  thread_local Complex w;
  if (bits != working_bits()) {
    bits = working_bits();
    w = Complex(Real(-0.5), sqrt(Real(3)) / Real(2));
  }
  return w;
}

}  // namespace

// ---------------------------------------------------------------- g, phi

GPhaseEvaluator::GPhaseEvaluator(const EquilibriumSolution& sol, const EnergyGrid& grid, const FieldEvaluator& fe)
    : c_(sol.c), d_(sol.d), ell_(sol.ell), fe_(fe) {
  int first = -1, last = -1;
  for (int i = 0; i < grid.m; ++i)
    if (sol.rho.rho[i] > 0) {
      if (first < 0) first = i;
      last = i;
    }
  if (first < 0) throw Error(ErrorKind::Degenerate, "equilibrium density vanishes");
  for (int i = first; i <= last + 1; ++i) edges_.push_back(grid.edges[i]);
  for (int i = first; i <= last; ++i) rho_.push_back(sol.rho.rho[i]);
}

Complex GPhaseEvaluator::g(const Complex& z, Side side) const {
  if (side == Side::None && z.im.is_zero() && z.re < edges_.back())
    throw Error(ErrorKind::OnCut, "g on its cut without side");
  // sum_i rho_i (G(z - x_i) - G(z - x_{i+1})) regrouped by edge
  Complex s(0);
  const size_t K = rho_.size();
  for (size_t k = 0; k <= K; ++k) {
    double w = (k < K ? rho_[k] : 0.0) - (k > 0 ? rho_[k - 1] : 0.0);
    if (w == 0.0) continue;
    s += Gfun(z - Real(edges_[k]), side) * Real(w);
  }
  return s;
}

Complex GPhaseEvaluator::phase(const Complex& z, Side side) const {
  return g(z, side) * Real(-2) + fe_.analytic_field(z, side) - Real(ell_);
}

Real GPhaseEvaluator::mu_right(const Real& x) const {
  Real s(0);
  for (size_t i = 0; i < rho_.size(); ++i) {
    Real lo = max(x, Real(edges_[i]));
    Real hi(edges_[i + 1]);
    if (hi > lo) s += (hi - lo) * Real(rho_[i]);
  }
  return s;
}

Real GPhaseEvaluator::log_abs_potential(const Real& x) const {
  Real s(0);
  for (size_t i = 0; i < rho_.size(); ++i)
    s += log_abs_cell_integral(x, Real(edges_[i]), Real(edges_[i + 1])) * Real(rho_[i]);
  return s;
}

// ---------------------------------------------------------------- N

Complex OuterParametrix::a(const Complex& z, Side side) const {
  if (z.im.is_zero() && z.re > c_ && z.re < d_ && side == Side::None)
    throw Error(ErrorKind::OnBand, "outer parametrix on the band without side");
  Complex ratio = (z - d_) / (z - c_);
  return principal_pow(ratio, Real(0.25), side);
}

DenseMatrix OuterParametrix::N(const Complex& z, Side side) const {
  Complex av = a(z, side);
  Complex inv = Complex(1) / av;
  Complex s = (av + inv) * Real(0.5);
  Complex t = (av - inv) * Real(0.5);
  Complex t_over_i = mul_i(t) * Real(-1);
  return DenseMatrix::two_by_two(s, t_over_i, t_over_i * Real(-1), s);
}

// ---------------------------------------------------------------- Airy model

DenseMatrix airy_constant_M() {
  Real r = Real(1) / sqrt(Real(2));
  return DenseMatrix::two_by_two(Complex(r), Complex(Real(0), r), Complex(Real(0), r), Complex(r));
}

DenseMatrix airy_constant_M_inverse() {
  Real r = Real(1) / sqrt(Real(2));
  return DenseMatrix::two_by_two(Complex(r), Complex(Real(0), -r), Complex(Real(0), -r), Complex(r));
}

DenseMatrix airy_model(const Complex& xi) {
  if (xi.is_zero()) throw Error(ErrorKind::SectorBoundary, "Airy model at the origin");
  const Real th = arg(xi);
  const Real tol = ldexp(Real(1), -working_bits() / 2);
  const Real two_thirds_pi = pi() * Real(2) / Real(3);
  const Real dist = min(min(abs(th), abs(abs(th) - two_thirds_pi)), pi() - abs(th));
  if (dist < tol) throw Error(ErrorKind::SectorBoundary, "Airy model on a sector boundary");
  const Complex& w = omega();
  const Complex w2 = conj(w);
  const Real root2pi = sqrt(pi() * Real(2));
  AiryValue a0 = airy_ai(xi);
  const bool upper = th > 0;
  // second solution: e^{i pi/3} Ai(w^2 xi) above the axis, e^{2 pi i/3} Ai(w xi) below
  Complex col2_y, col2_dy;
  if (upper) {
    AiryValue a2 = airy_ai(w2 * xi);
    Complex k = expi(pi() / Real(3));
    col2_y = k * a2.ai;
    col2_dy = k * w2 * a2.ai_prime;
  } else {
    AiryValue a1 = airy_ai(w * xi);
    Complex k = w;  // e^{2 pi i/3}
    col2_y = k * a1.ai;
    col2_dy = k * w * a1.ai_prime;
  }
  // diag(1, -i) scaling of the second row
  Complex y11 = a0.ai * root2pi;
  Complex y12 = col2_y * root2pi;
  Complex y21 = mul_i(a0.ai_prime) * (-root2pi);
  Complex y22 = mul_i(col2_dy) * (-root2pi);
  if (abs(th) > two_thirds_pi) {
    // sectors II and III: right factor [[1,0],[-+1,1]]
    if (upper) {
      y11 = y11 - y12;
      y21 = y21 - y22;
    } else {
      y11 = y11 + y12;
      y21 = y21 + y22;
    }
  }
  return DenseMatrix::two_by_two(y11, y12, y21, y22);
}

AiryResidual airy_asymptotic_residual(const Complex& xi) {
  DenseMatrix A = airy_model(xi);
  Complex theta = principal_pow(xi, Real(1.5)) * (Real(2) / Real(3));
  DenseMatrix ex = diag2(exp(theta), exp(theta * Real(-1)));
  Complex q = principal_pow(xi, Real(0.25));
  DenseMatrix xq = diag2(q, Complex(1) / q);
  DenseMatrix I = DenseMatrix::identity(2);
  AiryResidual r;
  r.middle = frobenius(airy_constant_M_inverse() * xq * A * ex - I);
  r.left = frobenius(A * ex * airy_constant_M_inverse() * xq - I);
  return r;
}

// ---------------------------------------------------------------- conformal map

ConformalMap::ConformalMap(const GPhaseEvaluator& ev, double endpoint, bool left_endpoint, double delta,
                           int degree, int samples)
    : ev_(&ev), e_(endpoint), left_(left_endpoint), delta_(delta) {
  phi_e_plus_ = ev.phase(Complex(e_), Side::Plus);
  phi_e_minus_ = ev.phase(Complex(e_), Side::Minus);
  const Real r(fit_radius());
  std::vector<Complex> zk(samples), Fk(samples), wk(samples);
  for (int k = 0; k < samples; ++k) {
    Real t = pi() * Real(2 * k + 1) / Real(samples);
    wk[k] = polar(r, t);
    zk[k] = Complex(e_) + wk[k];
    Fk[k] = cofactor_direct(zk[k], Side::None);
  }
  // equispaced samples on the circle: least squares in the monomials is the DFT
  coeffs_.assign(degree + 1, Complex(0));
  for (int j = 0; j <= degree; ++j) {
    Complex s(0);
    for (int k = 0; k < samples; ++k) s += Fk[k] / pow_int(wk[k], j);
    coeffs_[j] = s / Real(samples);
  }
  Real fmax(0), res(0);
  for (int k = 0; k < samples; ++k) {
    Complex fit(0), p(1);
    for (int j = 0; j <= degree; ++j) {
      fit += coeffs_[j] * p;
      p = p * wk[k];
    }
    fmax = max(fmax, abs(Fk[k]));
    res = max(res, abs(Fk[k] - fit));
  }
  fit_residual_ = res / fmax;
  if (!(fit_residual_ < Real(5e-2)))
    throw Error(ErrorKind::FitIllConditioned, "cofactor fit residual " + fit_residual_.str(6));
  const Complex& b0 = coeffs_[0];
  if (!(b0.re > 0.0) || abs(b0.im) > abs(b0) * Real(1e-6))
    throw Error(ErrorKind::NegativeDerivative, "conformal map has the wrong local branch");
  h0_ = principal_pow(b0, Real(2) / Real(3)).re;
  relation_residual_ = Real(0);
  for (int k = 0; k < samples; ++k) {
    Complex x = xi_fit(zk[k]);
    Complex lhs = principal_pow(x, Real(1.5)) * (Real(4) / Real(3));
    Complex ph = phi_loc(zk[k]);
    relation_residual_ = max(relation_residual_, abs(lhs - ph) / abs(ph));
  }
}

bool ConformalMap::on_band_side(const Complex& z) const {
  return z.im.is_zero() && (left_ ? z.re > e_ : z.re < e_);
}

Complex ConformalMap::phi_loc(const Complex& z, Side side) const {
  bool upper = z.im.is_zero() ? side != Side::Minus : z.im > 0.0;
  Side sd = side == Side::None && z.im.is_zero() ? Side::Plus : side;
  return ev_->phase(z, sd) - (upper ? phi_e_plus_ : phi_e_minus_);
}

Complex ConformalMap::cofactor_direct(const Complex& z, Side side) const {
  Complex u = left_ ? Complex(e_) - z : z - Complex(e_);
  Side su = left_ ? flip(side) : side;
  Complex den = principal_pow(u, Real(1.5), su);
  return phi_loc(z, side) * (Real(3) / Real(4)) / den;
}

Complex ConformalMap::xi_direct(const Complex& z, Side side) const {
  Complex u = left_ ? Complex(e_) - z : z - Complex(e_);
  Complex x = u * principal_pow(cofactor_direct(z, side), Real(2) / Real(3));
  if (z.im.is_zero()) x.im = Real(0);  // real on the real axis by symmetry
  return x;
}

Complex ConformalMap::xi_fit(const Complex& z, Side) const {
  Complex w = z - Complex(e_);
  Complex F(0), p(1);
  for (const auto& b : coeffs_) {
    F += b * p;
    p = p * w;
  }
  Complex u = left_ ? w * Real(-1) : w;
  Complex x = u * principal_pow(F, Real(2) / Real(3));
  if (z.im.is_zero()) x.im = Real(0);
  return x;
}

Complex ConformalMap::xi(const Complex& z, Side side) const {
  if (abs(z - Complex(e_)) <= Real(fit_radius())) return xi_fit(z, side);
  return xi_direct(z, side);
}

// ---------------------------------------------------------------- local parametrix

DenseMatrix LocalParametrix::E(const Complex& z, Side side, bool use_fit) const {
  Complex x = use_fit ? cm_->xi_fit(z, side) : cm_->xi(z, side);
  Complex xt = x * pow(Real(n_), Real(2) / Real(3));
  // side of xi: the map preserves half-planes at d and swaps them at c
  Side sx = cm_->left() ? flip(side) : side;
  if (!z.im.is_zero()) sx = Side::None;
  Complex q = principal_pow(xt, Real(0.25), sx);
  DenseMatrix mid = cm_->left() ? airy_constant_M() : airy_constant_M_inverse();
  return op_->N(z, side) * mid * diag2(q, Complex(1) / q);
}

DenseMatrix LocalParametrix::P(const Complex& z, Side side) const {
  Complex x = cm_->xi(z, side);
  Complex xt = x * pow(Real(n_), Real(2) / Real(3));
  DenseMatrix A = airy_model(xt);
  if (cm_->left()) {
    A(0, 1) = A(0, 1) * Real(-1);
    A(1, 0) = A(1, 0) * Real(-1);
  }
  Complex ex = cm_->phi_loc(z, side) * Real(n_) * Real(0.5);
  return E(z, side) * A * diag2(exp(ex), exp(ex * Real(-1)));
}

Real LocalParametrix::matching_error(double radius, int samples) const {
  Real worst(0);
  const DenseMatrix I = DenseMatrix::identity(2);
  for (int k = 0; k < samples; ++k) {
    Complex z = Complex(cm_->endpoint()) + polar(Real(radius), pi() * Real(2 * k + 1) / Real(samples));
    DenseMatrix r = P(z) * inverse2(op_->N(z)) - I;
    worst = max(worst, frobenius(r));
  }
  return worst;
}

namespace {

Real e_jump(const LocalParametrix& lp, const ConformalMap& cm, bool band_side, int samples) {
  Real worst(0);
  const double r = cm.fit_radius();
  // band side: toward the other endpoint
  const double dir = (cm.left() == band_side) ? 1.0 : -1.0;
  for (int k = 1; k <= samples; ++k) {
    Real x = cm.endpoint() + Real(dir * r * k / (samples + 1));
    Complex z(x);
    DenseMatrix ep = lp.E(z, Side::Plus, true);
    DenseMatrix em = lp.E(z, Side::Minus, true);
    worst = max(worst, frobenius(ep - em) / frobenius(ep));
  }
  return worst;
}

}  // namespace

Real LocalParametrix::e_jump_band_side(int samples) const { return e_jump(*this, *cm_, true, samples); }
Real LocalParametrix::e_jump_void_side(int samples) const { return e_jump(*this, *cm_, false, samples); }

// ---------------------------------------------------------------- lips

LensLips make_lips(double c, double d, double height, double delta, int samples) {
  const double w = 0.5 * (d - c), mid = 0.5 * (c + d);
  const double y0 = (height * height - w * w) / (2 * height);
  const double R = height - y0;
  const double ac = std::atan2(-y0, -w), ad = std::atan2(-y0, w);
  LensLips lips;
  for (int k = 1; k < samples; ++k) {
    double t = ac + (ad - ac) * k / samples;
    double x = mid + R * std::cos(t), y = y0 + R * std::sin(t);
    if (std::hypot(x - c, y) <= delta || std::hypot(x - d, y) <= delta) continue;
    lips.upper.emplace_back(Real(x), Real(y));
    lips.lower.emplace_back(Real(x), Real(-y));
  }
  return lips;
}

PhaseSignScan phase_sign_scan(const GPhaseEvaluator& ev, const LensLips& lips) {
  PhaseSignScan s;
  s.min_re_phi = INFINITY;
  s.max_re_phi = -INFINITY;
  for (const auto* side : {&lips.upper, &lips.lower})
    for (const auto& z : *side) {
      double r = ev.phase(z).re.to_double();
      s.min_re_phi = std::min(s.min_re_phi, r);
      s.max_re_phi = std::max(s.max_re_phi, r);
    }
  s.c0 = -s.max_re_phi;
  return s;
}

LipDecay lens_jump_norms(const GPhaseEvaluator& ev, const LensLips& lips, const std::vector<int>& n_list) {
  LipDecay out;
  PhaseSignScan scan = phase_sign_scan(ev, lips);
  out.c0 = scan.c0;
  std::vector<double> re;
  for (const auto* side : {&lips.upper, &lips.lower})
    for (const auto& z : *side) re.push_back(ev.phase(z).re.to_double());
  std::vector<std::pair<double, double>> pts;
  for (int n : n_list) {
    double sup = 0;
    for (double r : re) sup = std::max(sup, std::exp(n * r));
    out.sup_norms.emplace_back(n, sup);
    pts.emplace_back(n, sup);
  }
  out.slope = fit_rate(pts, FitKind::SemiLog).slope;
  return out;
}

// ---------------------------------------------------------------- E_n

double log_En_over_n(const WeightSet& ws, const NodeSet& ns, const FieldEvaluator& fe, const Complex& zeta) {
  const int n = ns.n;
  Complex s(0);
  for (size_t j = 0; j < ns.alpha.size(); ++j) s += ws.w_scaled[j] / (zeta - ns.alpha[j]);
  Real logE = log(abs(s)) - Real(2 * n + 1) * log(Real(n)) - fe.analytic_field(zeta).re * Real(0.5 * n);
  return (logE / Real(n)).to_double();
}

double log_En_over_n_barycentric(const NodeSet& ns, const CVec& f, const FieldEvaluator& fe,
                                 const Complex& zeta) {
  const int n = ns.n;
  Complex L = lagrange_eval(ns, f, zeta);
  Real logOmega(0);
  for (const auto& a : ns.alpha) logOmega += log(abs(zeta - a));
  Real logE = log(abs(L)) - logOmega - Real(2 * n + 1) * log(Real(n)) - fe.analytic_field(zeta).re * Real(0.5 * n);
  return (logE / Real(n)).to_double();
}

WnFactorization wn_factorization_check(const std::vector<std::pair<int, double>>& values) {
  WnFactorization w;
  w.values = values;
  w.monotone = true;
  for (size_t i = 1; i < values.size(); ++i)
    if (!(std::abs(values[i].second) < std::abs(values[i - 1].second))) w.monotone = false;
  double num = 0, den = 0;
  for (const auto& [n, q] : values) {
    double x = std::log(n) / n;
    num += std::abs(q) * x;
    den += x * x;
  }
  w.C = den > 0 ? num / den : 0;
  w.worst_ratio = 0;
  for (const auto& [n, q] : values) {
    double x = std::log(n) / n;
    w.worst_ratio = std::max(w.worst_ratio, std::abs(q) / (w.C * x));
  }
  w.pass = w.monotone && w.worst_ratio <= 1.5;
  return w;
}

Real strong_asymptotics_residual(const PadePair& pp, const GPhaseEvaluator& ev, const OuterParametrix& op,
                                 const Complex& zeta) {
  Complex q = pp.Qhat(zeta) * exp(ev.g(zeta) * Real(-pp.n));
  return abs(q - op.N(zeta)(0, 0));
}

double disk_radius(double c, double d, double A, double B) {
  return std::min(0.1 * (d - c), 0.5 * std::min(c - A, B - d));
}

std::vector<Complex> k_points(double A, double B) {
  return {Complex(Real(B + 1)), Complex(Real(0.5 * (A + B)), Real(B - A)), Complex(Real(2 * B))};
}

}  // namespace rh
