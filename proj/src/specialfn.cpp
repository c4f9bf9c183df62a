#include "rh/specialfn.hpp"

#include <cmath>
#include <map>

namespace rh {

const std::vector<Real>& bernoulli_over_factorial(int count) {
  thread_local std::map<long, std::vector<Real>> cache;
  auto& v = cache[working_bits()];
  if (static_cast<int>(v.size()) >= count) return v;
  // B_{2j}/(2j)! = (-1)^{j+1} 2 zeta(2j) / (2 pi)^{2j}
  const Real two_pi = pi() * 2;
  const Real inv_sq = Real(1) / (two_pi * two_pi);
  Real pw(1);
  for (int j = 1; j <= static_cast<int>(v.size()); ++j) pw *= inv_sq;
  for (int j = static_cast<int>(v.size()) + 1; j <= count; ++j) {
    pw *= inv_sq;
    Real z;
    mpfr_zeta_ui(z.get(), static_cast<unsigned long>(2 * j), MPFR_RNDN);
    Real b = z * pw * 2;
    v.push_back(j % 2 ? b : -b);
  }
  return v;
}

namespace {

Complex hurwitz_real(const Real& s, const Real& a, int min_terms) {
  const long bits = working_bits();
  const double target_abs = 0.25 * static_cast<double>(bits) + std::fabs(s.to_double()) + 10.0;
  long shift = std::max<long>(min_terms, static_cast<long>(std::ceil(target_abs - a.to_double())));
  if (shift < 0) shift = 0;
  Real sum(0);
  for (long k = 0; k < shift; ++k) sum += pow(a + Real(k), -s);
  const Real w = a + Real(shift);
  const Real p = pow(w, -s);
  sum += p * w / (s - 1);
  sum += p / 2;
  const Real inv_w2 = Real(1) / (w * w);
  Real r = s * p / w;  // (s)_1 w^{-s-1}
  const Real stop = ldexp(Real(1), -bits - 8);
  int j = 1;
  Real prev_term;
  for (;; ++j) {
    const auto& b = bernoulli_over_factorial(j);
    Real term = b[j - 1] * r;
    sum += term;
    if (abs(term) <= stop * abs(sum)) break;
    if (j > 4 && abs(term) > abs(prev_term))
      throw Error(ErrorKind::AccuracyLoss, "hurwitz_zeta: Euler-Maclaurin tail diverged");
    prev_term = abs(term);
    r *= (s + Real(2 * j - 1)) * (s + Real(2 * j)) * inv_w2;
  }
  return Complex(sum);
}

Complex hurwitz_complex(const Complex& s, const Complex& a, int min_terms) {
  const long bits = working_bits();
  const double abs_s = abs(s).to_double();
  const double target_abs = 0.25 * static_cast<double>(bits) + abs_s + 10.0;
  long shift = min_terms;
  while (std::hypot(a.re.to_double() + shift, a.im.to_double()) < target_abs) ++shift;
  Complex sum(0);
  const Complex ms = -s;
  for (long k = 0; k < shift; ++k) sum += principal_pow(a + Real(k), ms);
  const Complex w = a + Real(shift);
  const Complex p = principal_pow(w, ms);
  sum += p * w / (s - Real(1));
  sum += p / Real(2);
  const Complex inv_w2 = Complex(1) / (w * w);
  Complex r = s * p / w;
  const Real stop = ldexp(Real(1), -bits - 8);
  Real prev;
  for (int j = 1;; ++j) {
    const auto& b = bernoulli_over_factorial(j);
    Complex term = r * b[j - 1];
    sum += term;
    Real mag = abs(term);
    if (mag <= stop * abs(sum)) break;
    if (j > 4 && mag > prev)
      throw Error(ErrorKind::AccuracyLoss, "hurwitz_zeta: Euler-Maclaurin tail diverged");
    prev = mag;
    r *= (s + Real(2 * j - 1)) * (s + Real(2 * j)) * inv_w2;
  }
  return sum;
}

}  // namespace

Complex hurwitz_zeta(const HurwitzParams& p, const Complex& a) {
  if (!(p.s.re > 1.0)) throw Error(ErrorKind::DomainError, "hurwitz_zeta requires Re s > 1");
  if (!(a.re > 0.0)) throw Error(ErrorKind::DomainError, "hurwitz_zeta requires Re a > 0");
  // Bernoulli pairs are taken until convergence, never fewer than requested.
  bernoulli_over_factorial(std::max(1, p.bernoulli_terms));
  if (p.s.im.is_zero() && a.im.is_zero()) return hurwitz_real(p.s.re, a.re, p.series_cutoff);
  return hurwitz_complex(p.s, a, p.series_cutoff);
}

HurwitzBoundFit hurwitz_bound_check(const HurwitzParams& p, double A, double B, const std::vector<int>& n_list,
                                    int samples) {
  if (!(A > 0 && B > A)) throw Error(ErrorKind::DomainError, "hurwitz_bound_check: need 0 < A < B");
  HurwitzBoundFit out;
  std::vector<std::pair<double, double>> pts;
  for (int n : n_list) {
    Real best(0);
    for (int i = 0; i < samples; ++i) {
      Real alpha = Real(A) + (Real(B) - Real(A)) * Real(i) / Real(samples - 1);
      best = max(best, abs(hurwitz_zeta(p, Complex(alpha * Real(n)))));
    }
    out.sup_abs.emplace_back(n, best.to_double());
    pts.emplace_back(n, best.to_double());
  }
  out.slope = fit_rate(pts, FitKind::LogLog).slope;
  return out;
}

// ---------------------------------------------------------------- Airy

Real airy_switch_radius() {
  // smallest r with exp(-(4/3) r^{3/2}) <= 2^{-bits-10}
  double b = static_cast<double>(working_bits()) + 10.0;
  return Real(std::pow(0.75 * b * std::log(2.0), 2.0 / 3.0));
}

AiryValue airy_maclaurin(const Complex& z0) {
  const long bits = working_bits();
  double r = abs(z0).to_double();
  long extra = static_cast<long>(std::ceil((4.0 / 3.0) * std::pow(r, 1.5) / std::log(2.0))) + 32;
  AiryValue out;
  {
    PrecisionScope boost(bits + extra);
    Complex z = z0.at_working();
    Complex z3 = z * z * z;
    Real c1 = pow(Real(3), Real(-2) / Real(3)) / gamma(Real(2) / Real(3));
    Real c2 = pow(Real(3), Real(-1) / Real(3)) / gamma(Real(1) / Real(3));
    const Real stop = ldexp(Real(1), -(bits + extra) - 4);

    // f = sum t_k, g = sum u_k, f' = sum tp_k, g' = sum up_k
    Complex t(1), u = z, tp = z * z / Real(2), up(1);
    Complex f = t, g = u, fp = tp, gp = up;
    Real big = max(abs(t), abs(u));
    for (int k = 0; k < 100000; ++k) {
      t = t * z3 / Real((3 * k + 2) * (3 * k + 3));
      u = u * z3 / Real((3 * k + 3) * (3 * k + 4));
      up = up * z3 / Real((3 * k + 1) * (3 * k + 3));
      if (k >= 1) tp = tp * z3 / Real((3 * k) * (3 * k + 2));
      f += t;
      g += u;
      gp += up;
      if (k >= 1) fp += tp;
      Real m = max(max(abs(t), abs(u)), max(abs(tp), abs(up)));
      big = max(big, m);
      if (k > 2 && m <= stop * big) break;
    }
    Complex ai = f * c1 - g * c2;
    Complex aip = fp * c1 - gp * c2;
    out.ai = ai;
    out.ai_prime = aip;
  }
  out.ai = out.ai.at_working();
  out.ai_prime = out.ai_prime.at_working();
  return out;
}

AiryValue airy_asymptotic(const Complex& z) {
  const long bits = working_bits();
  PrecisionScope guard(bits + 32);
  Complex zw = z.at_working();
  Complex zeta = principal_pow(zw, Real(3) / Real(2)) * (Real(2) / Real(3));
  Complex q = principal_pow(zw, Real(1) / Real(4));
  Complex e = exp(-zeta);
  Real sqrt_pi = sqrt(pi());
  Complex inv_zeta = Complex(1) / zeta;

  Complex su(1), sv(1);
  Real uk(1);
  Complex zk(1);
  Real prev_mag;
  const Real stop = ldexp(Real(1), -bits - 16);
  for (int k = 1; k < 100000; ++k) {
    uk = uk * Real((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) / Real(216 * k * (2 * k - 1));
    Real vk = -uk * Real(6 * k + 1) / Real(6 * k - 1);
    zk = zk * (-inv_zeta);
    Complex tu = zk * uk;
    Complex tv = zk * vk;
    Real mag = max(abs(tu), abs(tv));
    if (k > 1 && mag > prev_mag) break;  // asymptotic series started to diverge
    su += tu;
    sv += tv;
    prev_mag = mag;
    if (mag <= stop) break;
  }
  AiryValue out;
  out.ai = (e * su / (q * (sqrt_pi * 2))).at_working();
  out.ai_prime = (-(q * e * sv) / (sqrt_pi * 2));
  {
    PrecisionScope back(bits);
    out.ai_prime = out.ai_prime.at_working();
    out.ai = out.ai.at_working();
  }
  return out;
}

namespace {

Complex omega_a(int k) {
  Real t = pi() * Real(2 * k) / Real(3);
  return expi(t);
}

AiryValue airy_large(const Complex& z) {
  Real a = arg(z);
  const Real lim = pi() * Real(2) / Real(3);
  if (abs(a) <= lim) return airy_asymptotic(z);
  // Ai(z) = -w Ai(w z) - w^2 Ai(w^2 z);  Ai'(z) = -w^2 Ai'(w z) - w Ai'(w^2 z)
  Complex w = omega_a(1), w2 = omega_a(2);
  AiryValue v1 = airy_asymptotic(w * z);
  AiryValue v2 = airy_asymptotic(w2 * z);
  AiryValue out;
  out.ai = -(w * v1.ai) - w2 * v2.ai;
  out.ai_prime = -(w2 * v1.ai_prime) - w * v2.ai_prime;
  return out;
}

}  // namespace

AiryValue airy_ai(const Complex& z, bool validate) {
  Real r0 = airy_switch_radius();
  Real r = abs(z);
  if (r < r0) return airy_maclaurin(z);
  AiryValue big = airy_large(z);
  if (validate && r <= r0 * 1.15) {
    AiryValue small = airy_maclaurin(z);
    Real tol = PrecisionContext{working_bits()}.tol_rel() * 1000;
    Real scale_a = max(abs(small.ai), abs(big.ai));
    Real scale_d = max(abs(small.ai_prime), abs(big.ai_prime));
    if (abs(small.ai - big.ai) > tol * scale_a || abs(small.ai_prime - big.ai_prime) > tol * scale_d)
      throw Error(ErrorKind::AccuracyLoss, "airy_ai: series and asymptotic values disagree");
  }
  return big;
}

}  // namespace rh
