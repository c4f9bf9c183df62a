#include "rh/pade.hpp"

#include <cmath>

namespace rh {

SampleFn hurwitz_sampler(const Complex& s) {
  return [s](const Complex& a) {
    HurwitzParams p;
    p.s = s.at_working();
    return hurwitz_zeta(p, a);
  };
}

CVec sample_at_nodes(const NodeSet& ns, const SampleFn& f) {
  CVec out;
  out.reserve(ns.a.size());
  for (const auto& a : ns.a) out.push_back(f(Complex(a)));
  return out;
}

PadeSystem assemble_system(const NodeSet& ns, const CVec& f) {
  const int n = ns.n;
  const int dim = 2 * n + 1;
  if (static_cast<int>(f.size()) != dim) throw Error(ErrorKind::DomainError, "assemble_system: sample count");
  PadeSystem sys;
  sys.n = n;
  sys.M = DenseMatrix(dim, dim);
  sys.b.assign(dim, Complex(0));
  sys.alpha = ns.alpha;
  sys.f = f;
  for (int j = 0; j < dim; ++j) {
    Real pw(1);
    for (int k = 0; k <= n; ++k) {
      if (k < n) sys.M(j, k) = f[j] * pw;
      sys.M(j, n + k) = Complex(-pw);
      if (k == n) sys.b[j] = -(f[j] * pw);
      pw *= ns.alpha[j];
    }
  }
  return sys;
}

NdCheck check_nd(const PadeSystem& sys) {
  NdCheck r;
  r.bits = working_bits();
  try {
    LuFactor lu = lu_factor(sys.M);
    r.log_abs_det = lu.log_abs_det;
    r.cond_estimate = cond_estimate_1(sys.M, lu);
    Real limit = ldexp(Real(1), working_bits() / 2);
    r.nd_holds = r.cond_estimate <= limit;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    r.singular = true;
    r.nd_holds = false;
    r.log_abs_det = Real(-INFINITY);
    r.cond_estimate = Real(INFINITY);
  }
  return r;
}

namespace {

void fill_residuals(PadePair& pp, const DenseMatrix& M, const CVec& x, const CVec& b, const std::vector<Real>& alpha,
                    const CVec& f) {
  const int dim = static_cast<int>(alpha.size());
  pp.interp_residuals.assign(dim, Complex(0));
  pp.max_abs_residual = Real(0);
  pp.max_normwise_residual = Real(0);
  Real xnorm = max_abs(x);
  for (int j = 0; j < dim; ++j) {
    Complex r = pp.Qhat(Complex(alpha[j])) * f[j] - pp.Phat(Complex(alpha[j]));
    pp.interp_residuals[j] = r;
    pp.max_abs_residual = max(pp.max_abs_residual, abs(r));
    if (M.rows() > 0) {
      Real row(0);
      for (int k = 0; k < M.cols(); ++k) row += abs(M(j, k));
      Real den = row * xnorm + abs(b[j]);
      if (!den.is_zero()) pp.max_normwise_residual = max(pp.max_normwise_residual, abs(r) / den);
    }
  }
}

PadePair pair_from_solution(int n, const CVec& x) {
  PadePair pp;
  pp.n = n;
  CVec q(n + 1), p(n + 1);
  for (int k = 0; k < n; ++k) q[k] = x[k];
  q[n] = Complex(1);
  for (int k = 0; k <= n; ++k) p[k] = x[n + k];
  pp.Qhat = Polynomial(q);
  pp.Phat = Polynomial(p);
  return pp;
}

}  // namespace

PadePair solve_pade(const PadeSystem& sys) {
  NdCheck nd = check_nd(sys);
  if (!nd.nd_holds) throw Error(ErrorKind::Degenerate, "(ND) fails for n=" + std::to_string(sys.n));
  LuSolveResult r = lu_solve(sys.M, sys.b);
  PadePair pp = pair_from_solution(sys.n, r.solution);
  pp.log_abs_det = r.log_abs_det;
  pp.cond_estimate = r.cond_estimate;
  fill_residuals(pp, sys.M, r.solution, sys.b, sys.alpha, sys.f);
  return pp;
}

PadePair solve_pade_reduced(const NodeSet& ns, const CVec& f) {
  const int n = ns.n;
  const Real accept = ldexp(Real(1), -working_bits() / 2);
  for (int m = 0; m <= n; ++m) {
    // 2m+1 nodes spread over the full set
    NodeSet sub;
    sub.n = m;
    CVec fs;
    const int total = 2 * n + 1;
    for (int i = 0; i < 2 * m + 1; ++i) {
      int j = (2 * m == 0) ? total / 2 : static_cast<int>(std::lround(static_cast<double>(i) * (total - 1) / (2 * m)));
      sub.alpha.push_back(ns.alpha[j]);
      sub.a.push_back(ns.a[j]);
      fs.push_back(f[j]);
    }
    PadeSystem sys = assemble_system(sub, fs);
    NdCheck nd = check_nd(sys);
    if (!nd.nd_holds) continue;
    LuSolveResult r = lu_solve(sys.M, sys.b);
    PadePair pp = pair_from_solution(m, r.solution);
    pp.log_abs_det = r.log_abs_det;
    pp.cond_estimate = r.cond_estimate;
    pp.reduced_degree = m;
    DenseMatrix none;
    fill_residuals(pp, none, r.solution, {}, ns.alpha, f);
    Real scale(0);
    for (int j = 0; j < total; ++j) scale = max(scale, abs(pp.Phat(Complex(ns.alpha[j]))) + abs(f[j]));
    if (pp.max_abs_residual <= accept * max(scale, Real(1)) * r.cond_estimate) return pp;
  }
  throw Error(ErrorKind::Degenerate, "no reduced-type approximant interpolates the data");
}

WeightSet build_weights(const NodeSet& ns, const CVec& f) {
  WeightSet ws;
  ws.n = ns.n;
  const int dim = static_cast<int>(ns.alpha.size());
  for (int j = 0; j < dim; ++j) {
    Real op = omega_prime_scaled(ns, j);
    ws.w_scaled.push_back(f[j] / op);
    SplitValue om = omega_prime(ns, j);
    SplitValue w;
    Real fa = abs(f[j]);
    if (fa.is_zero()) {
      w.log_abs = Real(-INFINITY);
      w.phase = Complex(1);
    } else {
      w.log_abs = log(fa) - om.log_abs;
      w.phase = (f[j] / fa) / om.phase;
    }
    ws.log_w.push_back(w);
  }
  return ws;
}

OrthogonalityResult discrete_orthogonality_check(const PadePair& pp, const WeightSet& ws, const NodeSet& ns) {
  const int n = ns.n;
  const int dim = static_cast<int>(ns.alpha.size());
  CVec base(dim);
  for (int j = 0; j < dim; ++j) base[j] = pp.Qhat(Complex(ns.alpha[j])) * ws.w_scaled[j];
  OrthogonalityResult out;
  out.max_normalized = Real(0);
  std::vector<Real> pw(dim, Real(1));
  for (int k = 0; k <= n; ++k) {
    Complex s(0);
    Real mag(0);
    for (int j = 0; j < dim; ++j) {
      Complex t = base[j] * pw[j];
      s += t;
      mag += abs(t);
      pw[j] *= ns.alpha[j];
    }
    Real v = mag.is_zero() ? Real(0) : abs(s) / mag;
    if (k < n) {
      out.normalized.push_back(v);
      out.max_normalized = max(out.max_normalized, v);
    } else {
      out.degree_n_normalized = v;
    }
  }
  return out;
}

Complex lagrange_eval(const NodeSet& ns, const CVec& f, const Complex& zeta) {
  const int dim = static_cast<int>(ns.alpha.size());
  Complex s(0);
  for (int j = 0; j < dim; ++j) {
    Complex t = f[j];
    for (int k = 0; k < dim; ++k)
      if (k != j) t = t * (zeta - ns.alpha[k]) / (ns.alpha[j] - ns.alpha[k]);
    s += t;
  }
  return s;
}

BarycentricValue eval_Wn_Ln(const WeightSet& ws, const NodeSet& ns, const CVec& f, const Complex& zeta) {
  const int n = ns.n;
  const int dim = static_cast<int>(ns.alpha.size());
  for (int j = 0; j < dim; ++j)
    if (zeta.im.is_zero() && zeta.re == ns.alpha[j]) throw Error(ErrorKind::AtNode, "evaluation point at a node");
  const Real nr(n);
  const Complex z = zeta * nr;
  BarycentricValue v;
  // W_n(z) = sum w_j / (z - a_j) with w_j from the split form
  v.W = Complex(0);
  for (int j = 0; j < dim; ++j) v.W += ws.value(j) / (z - ns.a[j]);
  v.omega = Complex(1);
  for (int j = 0; j < dim; ++j) v.omega *= z - ns.a[j];
  v.L = lagrange_eval(ns, f, zeta);
  v.residual = abs(v.W * v.omega - v.L) / abs(v.L);
  return v;
}

EllipseSpec default_contour(const DensitySpec& d) {
  const double A = d.A(), B = d.B(), w = B - A;
  double left = std::max(A - 0.25 * w, 0.5 * A);
  double right = B + 0.25 * w;
  EllipseSpec e;
  e.cx = Real(0.5 * (left + right));
  e.ax = Real(0.5 * (right - left));
  e.by = Real(0.5 * w);
  return e;
}

HermiteWalshResult hermite_walsh_eval(const NodeSet& ns, const SampleFn& f, const Curve& contour, const Complex& zeta,
                                      int m0) {
  for (const auto& a : ns.alpha)
    if (winding_number(contour, Complex(a)) != 1)
      throw Error(ErrorKind::ContourInvalid, "contour does not wind once around every node");
  for (int k = 0; k < 64; ++k) {
    auto p = contour.param(pi() * Real(2 * k) / Real(64));
    if (!(p.first.re > 0.0)) throw Error(ErrorKind::ContourInvalid, "contour meets the left half-plane");
  }
  const int wz = winding_number(contour, zeta);
  if (wz != 0 && wz != 1) throw Error(ErrorKind::ContourInvalid, "contour winds more than once around zeta");
  const Real nr(ns.n);
  auto integrand = [&](const Complex& xi) {
    Complex ratio(1);
    for (const auto& a : ns.alpha) ratio = ratio * (zeta - a) / (xi - a);
    return f(xi * nr) * ratio / (xi - zeta);
  };
  // Tolerance relative to the integrand scale on the contour: the integral
  // itself vanishes when the data is a polynomial of degree <= 2n.
  Real scale(0);
  for (int k = 0; k < 32; ++k) {
    auto p = contour.param(pi() * Real(2 * k) / Real(32));
    scale = max(scale, abs(integrand(p.first) * p.second));
  }
  QuadResult q = contour_trapezoid(integrand, contour, m0, scale);
  Complex I = q.value / mul_i(Complex(pi() * 2));
  HermiteWalshResult r;
  r.samples = q.nodes;
  r.value = wz == 1 ? f(zeta * nr) - I : -I;
  return r;
}

// ---------------------------------------------------------------- Y

YEvaluator::YEvaluator(const PadePair& pp, const WeightSet& ws, const NodeSet& ns)
    : n_(ns.n), qhat_(pp.Qhat), alpha_(ns.alpha), w_scaled_(ws.w_scaled), w_full_(ws.log_w) {
  const int n = n_;
  const int dim = static_cast<int>(alpha_.size());
  log_n_ = log(Real(n));
  // Qprev monic of degree n-1, orthogonal to degrees <= n-2.
  std::vector<Complex> moments(2 * n, Complex(0));
  {
    std::vector<Real> pw(dim, Real(1));
    for (int r = 0; r < 2 * n - 1; ++r)
      for (int j = 0; j < dim; ++j) {
        moments[r] += w_scaled_[j] * pw[j];
        pw[j] *= alpha_[j];
      }
  }
  if (n == 1) {
    qprev_ = Polynomial(CVec{Complex(1)});
  } else {
    const int m = n - 1;
    DenseMatrix G(m, m);
    CVec rhs(m);
    for (int k = 0; k < m; ++k) {
      for (int i = 0; i < m; ++i) G(k, i) = moments[i + k];
      rhs[k] = -moments[m + k];
    }
    LuSolveResult r;
    try {
      r = lu_solve(G, rhs);
    } catch (const Error& e) {
      throw Error(ErrorKind::SubdiagonalDegenerate, e.what());
    }
    CVec c = r.solution;
    c.push_back(Complex(1));
    qprev_ = Polynomial(c);
  }
  qa_.resize(dim);
  qpa_.resize(dim);
  for (int j = 0; j < dim; ++j) {
    qa_[j] = qhat_(Complex(alpha_[j]));
    qpa_[j] = qprev_(Complex(alpha_[j]));
  }
  hhat_ = Complex(0);
  Real mag(0);
  for (int j = 0; j < dim; ++j) {
    Complex t = qpa_[j] * w_scaled_[j] * pow(alpha_[j], static_cast<long>(n - 1));
    hhat_ += t;
    mag += abs(t);
  }
  if (hhat_.is_zero() || abs(hhat_) < mag * ldexp(Real(1), -working_bits() + 8))
    throw Error(ErrorKind::SubdiagonalDegenerate, "gamma denominator vanishes");
  // gamma_{n-1} = n^2 / hhat in z units
  gamma_ = Complex(Real(n) * Real(n)) / hhat_;
}

DenseMatrix YEvaluator::operator()(const Complex& z) const {
  const Real nr(n_);
  const Complex zeta = z / nr;
  Complex c1(0), c2(0);
  for (size_t j = 0; j < alpha_.size(); ++j) {
    Complex inv = Complex(1) / (zeta - alpha_[j]);
    c1 += qa_[j] * w_scaled_[j] * inv;
    c2 += qpa_[j] * w_scaled_[j] * inv;
  }
  Real nn = pow(nr, static_cast<long>(n_));
  Complex y11 = qhat_(zeta) * nn;
  Complex y12 = c1 / (nn * nr);
  Complex y21 = qprev_(zeta) * (nn * nr) / hhat_;
  Complex y22 = c2 / (hhat_ * nn);
  return DenseMatrix::two_by_two(y11, y12, y21, y22);
}

DenseMatrix YEvaluator::normalized(const Complex& z) const {
  const Real nr(n_);
  const Complex zeta = z / nr;
  Complex c1(0), c2(0);
  for (size_t j = 0; j < alpha_.size(); ++j) {
    Complex inv = Complex(1) / (zeta - alpha_[j]);
    c1 += qa_[j] * w_scaled_[j] * inv;
    c2 += qpa_[j] * w_scaled_[j] * inv;
  }
  Complex zn = pow_int(zeta, n_);
  Complex a11 = qhat_(zeta) / zn;
  Complex a12 = c1 * zn / nr;
  Complex a21 = qprev_(zeta) * nr / (hhat_ * zn);
  Complex a22 = c2 * zn / hhat_;
  return DenseMatrix::two_by_two(a11, a12, a21, a22);
}

Complex YEvaluator::det(const Complex& z) const { return det2((*this)(z)); }

YEvaluator::ResidueCheck YEvaluator::residue_check(int j, const Real& radius) const {
  const Real nr(n_);
  const Complex aj(alpha_[j] * nr);
  Curve c = Curve::circle(aj, radius);
  auto y12 = [&](const Complex& z) { return (*this)(z)(0, 1); };
  auto y22 = [&](const Complex& z) { return (*this)(z)(1, 1); };
  const Complex two_pi_i = mul_i(Complex(pi() * 2));
  ResidueCheck r;
  r.res12 = contour_trapezoid(y12, c, 32).value / two_pi_i;
  r.res22 = contour_trapezoid(y22, c, 32).value / two_pi_i;
  // Y11(a_j) w_j and Y21(a_j) w_j with the weight from its split form
  // Y11 and Y21 are polynomials; evaluated at the node directly
  Real nn = pow(nr, static_cast<long>(n_));
  Complex w = w_full_[j].value();
  r.expect12 = qa_[j] * nn * w;
  r.expect22 = qpa_[j] * (nn * nr) / hhat_ * w;
  r.rel12 = abs(r.res12 - r.expect12) / abs(r.expect12);
  r.rel22 = abs(r.res22 - r.expect22) / abs(r.expect22);
  return r;
}

// ---------------------------------------------------------------- interpolant

InterpolantRecovery recover_P_interpolant(const PadePair& pp, const NodeSet& ns, const CVec& f) {
  const int dim = static_cast<int>(ns.alpha.size());
  const int n = ns.n;
  CVec dd(dim);
  for (int j = 0; j < dim; ++j) dd[j] = pp.Qhat(Complex(ns.alpha[j])) * f[j];
  for (int k = 1; k < dim; ++k)
    for (int j = dim - 1; j >= k; --j) dd[j] = (dd[j] - dd[j - 1]) / (ns.alpha[j] - ns.alpha[j - k]);
  // Newton form to monomial coefficients
  CVec c{dd[dim - 1]};
  for (int k = dim - 2; k >= 0; --k) {
    CVec nc(c.size() + 1, Complex(0));
    for (size_t i = 0; i < c.size(); ++i) {
      nc[i + 1] += c[i];
      nc[i] -= c[i] * ns.alpha[k];
    }
    nc[0] += dd[k];
    c = std::move(nc);
  }
  InterpolantRecovery out;
  out.interpolant = Polynomial(c);
  Real cmax(0), tail(0), pmax(0), mis(0);
  for (int k = 0; k < static_cast<int>(c.size()); ++k) {
    Real a = abs(c[k]);
    cmax = max(cmax, a);
    if (k > n) tail = max(tail, a);
  }
  for (int k = 0; k <= n; ++k) {
    pmax = max(pmax, abs(pp.Phat.coeff(k)));
    mis = max(mis, abs(c[k] - pp.Phat.coeff(k)));
  }
  out.tail_ratio = cmax.is_zero() ? Real(0) : tail / cmax;
  out.p_mismatch = pmax.is_zero() ? mis : mis / pmax;
  if (out.tail_ratio > ldexp(Real(1), -working_bits() / 4))
    throw Error(ErrorKind::DegreeCollapseFailed, "interpolant of Q f keeps degree > n");
  return out;
}

// ---------------------------------------------------------------- driver

PadeRun run_pade(const DensitySpec& d, const SampleFn& f, int n, long bits, long bits_cap) {
  PadeRun run;
  run.n = n;
  for (long b = bits;; b *= 2) {
    PrecisionScope scope(b);
    run.bits_tried.push_back(b);
    run.bits_used = b;
    run.ns = quantile_nodes(d, n);
    run.f = sample_at_nodes(run.ns, f);
    PadeSystem sys = assemble_system(run.ns, run.f);
    run.nd = check_nd(sys);
    if (run.nd.nd_holds) {
      run.pair = solve_pade(sys);
      run.weights = build_weights(run.ns, run.f);
      run.solved = true;
      return run;
    }
    if (b * 2 > bits_cap) break;
  }
  {
    PrecisionScope scope(run.bits_used);
    run.weights = build_weights(run.ns, run.f);
  }
  return run;
}

}  // namespace rh
