#pragma once

// Multiprecision scalars on top of MPFR.
//
// Every thread carries its own working precision (set through PrecisionScope);
// arithmetic results are created at the working precision of the calling thread.
// Copies keep the precision of their source.

#include <mpfr.h>

#include <cmath>
#include <iosfwd>
#include <string>
#include <utility>

namespace rh {

long working_bits();
void set_working_bits(long bits);

class PrecisionScope {
 public:
  explicit PrecisionScope(long bits) : saved_(working_bits()) { set_working_bits(bits); }
  ~PrecisionScope() { set_working_bits(saved_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_;
};

class Real {
 public:
  Real() { mpfr_init2(v_, working_bits()); mpfr_set_zero(v_, 1); }
  Real(double x) { mpfr_init2(v_, working_bits()); mpfr_set_d(v_, x, MPFR_RNDN); }
  Real(int x) { mpfr_init2(v_, working_bits()); mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(long x) { mpfr_init2(v_, working_bits()); mpfr_set_si(v_, x, MPFR_RNDN); }
  Real(long long x) { mpfr_init2(v_, working_bits()); mpfr_set_si(v_, static_cast<long>(x), MPFR_RNDN); }
  Real(unsigned long x) { mpfr_init2(v_, working_bits()); mpfr_set_ui(v_, x, MPFR_RNDN); }
  explicit Real(const std::string& s);
  Real(const Real& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
  Real(Real&& o) noexcept { mpfr_init2(v_, MPFR_PREC_MIN); mpfr_swap(v_, o.v_); }
  ~Real() { mpfr_clear(v_); }

  Real& operator=(const Real& o) {
    if (this != &o) {
      if (mpfr_get_prec(v_) != mpfr_get_prec(o.v_)) mpfr_set_prec(v_, mpfr_get_prec(o.v_));
      mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
  }
  Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
  Real& operator=(double x) { mpfr_set_d(v_, x, MPFR_RNDN); return *this; }

  // Re-round to the calling thread's working precision.
  Real at_working() const { Real r; mpfr_set(r.v_, v_, MPFR_RNDN); return r; }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  long bits() const { return static_cast<long>(mpfr_get_prec(v_)); }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
  // log2|x| as a double; -inf for zero. Safe for values outside double range.
  double log2_abs() const;
  double log_abs() const { return log2_abs() * 0.69314718055994530942; }
  std::string str(int digits = 20) const;

  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  int sign() const { return mpfr_sgn(v_); }
  bool signbit() const { return mpfr_signbit(v_) != 0; }

  Real& operator+=(const Real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator-=(const Real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator*=(const Real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
  Real& operator/=(const Real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

  friend Real operator-(const Real& a) { Real r; mpfr_neg(r.v_, a.v_, MPFR_RNDN); return r; }
  friend Real operator+(const Real& a, const Real& b) { Real r; mpfr_add(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, const Real& b) { Real r; mpfr_sub(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, const Real& b) { Real r; mpfr_mul(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, const Real& b) { Real r; mpfr_div(r.v_, a.v_, b.v_, MPFR_RNDN); return r; }
  friend Real operator+(const Real& a, double b) { Real r; mpfr_add_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator-(const Real& a, double b) { Real r; mpfr_sub_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator*(const Real& a, double b) { Real r; mpfr_mul_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator/(const Real& a, double b) { Real r; mpfr_div_d(r.v_, a.v_, b, MPFR_RNDN); return r; }
  friend Real operator+(double a, const Real& b) { return b + a; }
  friend Real operator-(double a, const Real& b) { Real r; mpfr_d_sub(r.v_, a, b.v_, MPFR_RNDN); return r; }
  friend Real operator*(double a, const Real& b) { return b * a; }
  friend Real operator/(double a, const Real& b) { Real r; mpfr_d_div(r.v_, a, b.v_, MPFR_RNDN); return r; }
  friend Real operator+(const Real& a, int b) { return a + static_cast<double>(b); }
  friend Real operator-(const Real& a, int b) { return a - static_cast<double>(b); }
  friend Real operator*(const Real& a, int b) { return a * static_cast<double>(b); }
  friend Real operator/(const Real& a, int b) { return a / static_cast<double>(b); }
  friend Real operator+(int a, const Real& b) { return static_cast<double>(a) + b; }
  friend Real operator-(int a, const Real& b) { return static_cast<double>(a) - b; }
  friend Real operator*(int a, const Real& b) { return static_cast<double>(a) * b; }
  friend Real operator/(int a, const Real& b) { return static_cast<double>(a) / b; }

  friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }
  friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
  friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
  friend bool operator<(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) < 0; }
  friend bool operator>(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) > 0; }
  friend bool operator<=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) <= 0; }
  friend bool operator>=(const Real& a, double b) { return mpfr_cmp_d(a.v_, b) >= 0; }

 private:
  mpfr_t v_;
};

std::ostream& operator<<(std::ostream& os, const Real& x);

Real abs(const Real& x);
Real sqrt(const Real& x);
Real cbrt(const Real& x);
Real exp(const Real& x);
Real expm1(const Real& x);
Real log(const Real& x);
Real log1p(const Real& x);
Real sin(const Real& x);
Real cos(const Real& x);
Real tan(const Real& x);
Real atan(const Real& x);
Real atan2(const Real& y, const Real& x);
Real sinh(const Real& x);
Real cosh(const Real& x);
Real pow(const Real& x, const Real& y);
Real pow(const Real& x, long k);
Real floor(const Real& x);
Real ceil(const Real& x);
Real gamma(const Real& x);
Real lgamma_abs(const Real& x);
Real hypot(const Real& x, const Real& y);
Real ldexp(const Real& x, long e);
Real max(const Real& a, const Real& b);
Real min(const Real& a, const Real& b);
Real pi();
Real eps();  // 2^{1 - working_bits}

// Which side of a branch cut a boundary value is taken from.
enum class Side { None, Plus, Minus };

struct Complex {
  Real re;
  Real im;

  Complex() = default;
  Complex(const Real& r) : re(r), im(0) {}
  Complex(double r) : re(r), im(0) {}
  Complex(int r) : re(r), im(0) {}
  Complex(const Real& r, const Real& i) : re(r), im(i) {}
  Complex(double r, double i) : re(r), im(i) {}

  Complex at_working() const { return {re.at_working(), im.at_working()}; }
  bool is_finite() const { return re.is_finite() && im.is_finite(); }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }

  Complex& operator+=(const Complex& o) { re += o.re; im += o.im; return *this; }
  Complex& operator-=(const Complex& o) { re -= o.re; im -= o.im; return *this; }
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  Complex& operator*=(const Real& o) { re *= o; im *= o; return *this; }
  Complex& operator/=(const Real& o) { re /= o; im /= o; return *this; }
};

Complex operator-(const Complex& a);
Complex operator+(const Complex& a, const Complex& b);
Complex operator-(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Complex& b);
Complex operator/(const Complex& a, const Complex& b);
Complex operator*(const Complex& a, const Real& b);
Complex operator*(const Real& a, const Complex& b);
Complex operator/(const Complex& a, const Real& b);
Complex operator+(const Complex& a, const Real& b);
Complex operator-(const Complex& a, const Real& b);
Complex operator*(const Complex& a, double b);
Complex operator+(const Complex& a, double b);
Complex operator-(const Complex& a, double b);
Complex operator-(double a, const Complex& b);
Complex operator-(const Real& a, const Complex& b);
Complex operator+(const Real& a, const Complex& b);
Complex operator*(double a, const Complex& b);
Complex operator/(const Complex& a, double b);

inline Complex I_unit() { return Complex(0.0, 1.0); }
Complex conj(const Complex& z);
Real abs(const Complex& z);
Real norm(const Complex& z);  // |z|^2
Real arg(const Complex& z, Side side = Side::None);
Complex exp(const Complex& z);
Complex expi(const Real& t);  // e^{it}
Complex sqrt(const Complex& z, Side side = Side::None);
Complex polar(const Real& r, const Real& t);
Complex mul_i(const Complex& z);  // i z

// Principal log with Im in (-pi, pi]. On the negative real axis the caller may
// select the upper (+) or lower (-) boundary value. Throws DomainError at 0.
Complex principal_log(const Complex& z, Side side = Side::None);
Complex principal_pow(const Complex& z, const Real& alpha, Side side = Side::None);
Complex principal_pow(const Complex& z, const Complex& alpha, Side side = Side::None);
Complex pow_int(const Complex& z, long k);

std::ostream& operator<<(std::ostream& os, const Complex& z);

struct PrecisionContext {
  long bits = 384;
  Real tol_rel() const;  // 2^{-bits/2}
  double log2_tol_rel() const { return -static_cast<double>(bits) / 2.0; }
};

}  // namespace rh
