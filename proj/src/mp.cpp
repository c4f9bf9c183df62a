#include "rh/mp.hpp"

#include <cstdlib>
#include <ostream>
#include <vector>

#include "rh/error.hpp"

namespace rh {

namespace {
thread_local long g_bits = 384;
}

long working_bits() { return g_bits; }
void set_working_bits(long bits) {
  if (bits < MPFR_PREC_MIN) bits = MPFR_PREC_MIN;
  g_bits = bits;
}

Real::Real(const std::string& s) {
  mpfr_init2(v_, working_bits());
  if (mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN) != 0)
    throw Error(ErrorKind::DomainError, "cannot parse real '" + s + "'");
}

double Real::log2_abs() const {
  if (mpfr_zero_p(v_)) return -INFINITY;
  if (!mpfr_number_p(v_)) return INFINITY;
  long e = 0;
  double m = mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
  return std::log2(std::fabs(m)) + static_cast<double>(e);
}

std::string Real::str(int digits) const {
  std::vector<char> buf(static_cast<size_t>(digits) + 32);
  mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
  return std::string(buf.data());
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.str(20); }

#define RH_UNARY(name, fn)                 \
  Real name(const Real& x) {               \
    Real r;                                \
    fn(r.get(), x.get(), MPFR_RNDN);       \
    return r;                              \
  }
RH_UNARY(abs, mpfr_abs)
RH_UNARY(sqrt, mpfr_sqrt)
RH_UNARY(cbrt, mpfr_cbrt)
RH_UNARY(exp, mpfr_exp)
RH_UNARY(expm1, mpfr_expm1)
RH_UNARY(log, mpfr_log)
RH_UNARY(log1p, mpfr_log1p)
RH_UNARY(sin, mpfr_sin)
RH_UNARY(cos, mpfr_cos)
RH_UNARY(tan, mpfr_tan)
RH_UNARY(atan, mpfr_atan)
RH_UNARY(sinh, mpfr_sinh)
RH_UNARY(cosh, mpfr_cosh)
RH_UNARY(gamma, mpfr_gamma)
#undef RH_UNARY

Real floor(const Real& x) { Real r; mpfr_floor(r.get(), x.get()); return r; }
Real ceil(const Real& x) { Real r; mpfr_ceil(r.get(), x.get()); return r; }

Real lgamma_abs(const Real& x) {
  Real r;
  int sgn = 0;
  mpfr_lgamma(r.get(), &sgn, x.get(), MPFR_RNDN);
  return r;
}

Real atan2(const Real& y, const Real& x) { Real r; mpfr_atan2(r.get(), y.get(), x.get(), MPFR_RNDN); return r; }
Real pow(const Real& x, const Real& y) { Real r; mpfr_pow(r.get(), x.get(), y.get(), MPFR_RNDN); return r; }
Real pow(const Real& x, long k) { Real r; mpfr_pow_si(r.get(), x.get(), k, MPFR_RNDN); return r; }
Real hypot(const Real& x, const Real& y) { Real r; mpfr_hypot(r.get(), x.get(), y.get(), MPFR_RNDN); return r; }
Real ldexp(const Real& x, long e) { Real r; mpfr_mul_2si(r.get(), x.get(), e, MPFR_RNDN); return r; }
Real max(const Real& a, const Real& b) { return a < b ? b : a; }
Real min(const Real& a, const Real& b) { return b < a ? b : a; }

Real pi() {
  Real r;
  mpfr_const_pi(r.get(), MPFR_RNDN);
  return r;
}

Real eps() {
  Real r(1);
  return ldexp(r, 1 - working_bits());
}

Real PrecisionContext::tol_rel() const {
  Real one(1);
  return ldexp(one, -bits / 2);
}

// ---------------------------------------------------------------- Complex

Complex& Complex::operator*=(const Complex& o) {
  Real r = re * o.re - im * o.im;
  Real i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  *this = *this / o;
  return *this;
}

Complex operator-(const Complex& a) { return {-a.re, -a.im}; }
Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex operator/(const Complex& a, const Complex& b) {
  // Smith's scaling keeps intermediate magnitudes tame.
  if (abs(b.re) >= abs(b.im)) {
    if (b.re.is_zero()) throw Error(ErrorKind::DomainError, "complex division by zero");
    Real r = b.im / b.re;
    Real den = b.re + b.im * r;
    return {(a.re + a.im * r) / den, (a.im - a.re * r) / den};
  }
  Real r = b.re / b.im;
  Real den = b.re * r + b.im;
  return {(a.re * r + a.im) / den, (a.im * r - a.re) / den};
}
Complex operator*(const Complex& a, const Real& b) { return {a.re * b, a.im * b}; }
Complex operator*(const Real& a, const Complex& b) { return {b.re * a, b.im * a}; }
Complex operator/(const Complex& a, const Real& b) { return {a.re / b, a.im / b}; }
Complex operator+(const Complex& a, const Real& b) { return {a.re + b, a.im}; }
Complex operator-(const Complex& a, const Real& b) { return {a.re - b, a.im}; }
Complex operator*(const Complex& a, double b) { return {a.re * b, a.im * b}; }
Complex operator*(double a, const Complex& b) { return b * a; }
Complex operator/(const Complex& a, double b) { return {a.re / b, a.im / b}; }
Complex operator+(const Complex& a, double b) { return {a.re + b, a.im.at_working()}; }
Complex operator-(const Complex& a, double b) { return {a.re - b, a.im.at_working()}; }
Complex operator-(double a, const Complex& b) { return {a - b.re, -b.im}; }
Complex operator-(const Real& a, const Complex& b) { return {a - b.re, -b.im}; }
Complex operator+(const Real& a, const Complex& b) { return {a + b.re, b.im.at_working()}; }

Complex conj(const Complex& z) { return {z.re.at_working(), -z.im}; }
Real abs(const Complex& z) { return hypot(z.re, z.im); }
Real norm(const Complex& z) { return z.re * z.re + z.im * z.im; }

Real arg(const Complex& z, Side side) {
  if (z.im.is_zero() && z.re.sign() < 0) {
    Real p = pi();
    return side == Side::Minus ? -p : p;
  }
  if (z.im.is_zero()) return Real(0);
  return atan2(z.im, z.re);
}

Complex expi(const Real& t) {
  Real s, c;
  mpfr_sin_cos(s.get(), c.get(), t.get(), MPFR_RNDN);
  return {c, s};
}

Complex polar(const Real& r, const Real& t) { return expi(t) * r; }

Complex exp(const Complex& z) { return polar(exp(z.re), z.im); }

Complex mul_i(const Complex& z) { return {-z.im, z.re.at_working()}; }

Complex principal_log(const Complex& z, Side side) {
  if (z.is_zero()) throw Error(ErrorKind::DomainError, "log(0)");
  Real m = abs(z);
  return {log(m), arg(z, side)};
}

Complex sqrt(const Complex& z, Side side) {
  if (z.is_zero()) return Complex(0);
  // Stable half-angle form.
  Real m = abs(z);
  if (z.im.is_zero() && z.re.sign() < 0) {
    Real r = sqrt(-z.re);
    return side == Side::Minus ? Complex(Real(0), -r) : Complex(Real(0), r);
  }
  Real t = sqrt((m + abs(z.re)) / 2);
  if (z.re.sign() >= 0) return {t, z.im / (t * 2)};
  Real im = z.im.sign() < 0 ? -t : t;
  return {abs(z.im) / (t * 2), im};
}

Complex principal_pow(const Complex& z, const Real& alpha, Side side) {
  if (z.is_zero()) {
    if (alpha > 0.0) return Complex(0);
    throw Error(ErrorKind::DomainError, "pow(0, alpha<=0)");
  }
  Complex l = principal_log(z, side);
  return exp(l * alpha);
}

Complex principal_pow(const Complex& z, const Complex& alpha, Side side) {
  if (z.is_zero()) throw Error(ErrorKind::DomainError, "pow(0, complex)");
  return exp(principal_log(z, side) * alpha);
}

Complex pow_int(const Complex& z, long k) {
  if (k < 0) return Complex(1) / pow_int(z, -k);
  Complex r(1), b = z;
  while (k) {
    if (k & 1) r *= b;
    k >>= 1;
    if (k) b *= b;
  }
  return r;
}

std::ostream& operator<<(std::ostream& os, const Complex& z) {
  return os << "(" << z.re.str(20) << (z.im.sign() < 0 ? " - " : " + ") << abs(z.im).str(20) << "i)";
}

const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::DegenerateFit: return "DegenerateFit";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::AccuracyLoss: return "AccuracyLoss";
    case ErrorKind::NonPositiveDensity: return "NonPositiveDensity";
    case ErrorKind::RootNotBracketed: return "RootNotBracketed";
    case ErrorKind::OnCut: return "OnCut";
    case ErrorKind::AtNode: return "AtNode";
    case ErrorKind::ContourInvalid: return "ContourInvalid";
    case ErrorKind::Degenerate: return "Degenerate";
    case ErrorKind::SubdiagonalDegenerate: return "SubdiagonalDegenerate";
    case ErrorKind::DegreeCollapseFailed: return "DegreeCollapseFailed";
    case ErrorKind::InconsistentKKT: return "InconsistentKKT";
    case ErrorKind::FitIllConditioned: return "FitIllConditioned";
    case ErrorKind::NegativeDerivative: return "NegativeDerivative";
    case ErrorKind::OnBand: return "OnBand";
    case ErrorKind::SectorBoundary: return "SectorBoundary";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

}  // namespace rh
