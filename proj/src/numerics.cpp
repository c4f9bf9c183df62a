#include "rh/numerics.hpp"

#include <cmath>
#include <map>
#include <numeric>

namespace rh {

// ---------------------------------------------------------------- Polynomial

Polynomial::Polynomial(CVec coeffs) : c_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Polynomial Polynomial::monomial(int k) {
  CVec c(static_cast<size_t>(k) + 1, Complex(0));
  c[k] = Complex(1);
  return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(const std::vector<Complex>& roots) {
  CVec c{Complex(1)};
  for (const auto& r : roots) {
    CVec nc(c.size() + 1, Complex(0));
    for (size_t k = 0; k < c.size(); ++k) {
      nc[k + 1] += c[k];
      nc[k] -= c[k] * r;
    }
    c = std::move(nc);
  }
  return Polynomial(std::move(c));
}

Complex Polynomial::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(c_.size())) return Complex(0);
  return c_[k];
}

Complex Polynomial::operator()(const Complex& z) const {
  if (c_.empty()) return Complex(0);
  Complex acc = c_.back();
  for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k) acc = acc * z + c_[k];
  return acc;
}

std::pair<Complex, Complex> Polynomial::eval_with_derivative(const Complex& z) const {
  if (c_.empty()) return {Complex(0), Complex(0)};
  Complex p = c_.back();
  Complex dp(0);
  for (int k = static_cast<int>(c_.size()) - 2; k >= 0; --k) {
    dp = dp * z + p;
    p = p * z + c_[k];
  }
  return {p, dp};
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return Polynomial();
  CVec d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * Real(static_cast<long>(k));
  return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  size_t n = std::max(a.c_.size(), b.c_.size());
  CVec c(n, Complex(0));
  for (size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
  for (size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + b * Complex(-1); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial();
  CVec c(a.c_.size() + b.c_.size() - 1, Complex(0));
  for (size_t i = 0; i < a.c_.size(); ++i)
    for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Complex& s) {
  CVec c = a.c_;
  for (auto& x : c) x = x * s;
  return Polynomial(std::move(c));
}

// ---------------------------------------------------------------- matrices

DenseMatrix DenseMatrix::identity(int n) {
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = Complex(1);
  return m;
}

DenseMatrix DenseMatrix::two_by_two(const Complex& a, const Complex& b, const Complex& c, const Complex& d) {
  DenseMatrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

CVec DenseMatrix::apply(const CVec& x) const {
  CVec y(rows_, Complex(0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
  return y;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Real DenseMatrix::norm_inf() const {
  Real best(0);
  for (int i = 0; i < rows_; ++i) {
    Real s(0);
    for (int j = 0; j < cols_; ++j) s += abs((*this)(i, j));
    best = max(best, s);
  }
  return best;
}

Real DenseMatrix::norm_1() const {
  Real best(0);
  for (int j = 0; j < cols_; ++j) {
    Real s(0);
    for (int i = 0; i < rows_; ++i) s += abs((*this)(i, j));
    best = max(best, s);
  }
  return best;
}

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) {
      Complex s(0);
      for (int k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

DenseMatrix operator*(const DenseMatrix& a, const Complex& s) {
  DenseMatrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * s;
  return c;
}

Complex det2(const DenseMatrix& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

DenseMatrix inverse2(const DenseMatrix& m) {
  Complex d = det2(m);
  return DenseMatrix::two_by_two(m(1, 1) / d, -m(0, 1) / d, -m(1, 0) / d, m(0, 0) / d);
}

Real frobenius(const DenseMatrix& m) {
  Real s(0);
  for (const auto& e : m.entries()) s += norm(e);
  return sqrt(s);
}

Real max_abs_entry(const DenseMatrix& m) { return max_abs(m.entries()); }

Real max_abs(const CVec& v) {
  Real best(0);
  for (const auto& x : v) best = max(best, abs(x));
  return best;
}

CVec residual(const DenseMatrix& m, const CVec& x, const CVec& rhs) {
  CVec r = m.apply(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] -= rhs[i];
  return r;
}

// ---------------------------------------------------------------- LU

LuFactor lu_factor(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::DomainError, "lu_factor: matrix not square");
  const int n = m.rows();
  LuFactor f;
  f.n = n;
  f.lu = m;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), 0);
  std::vector<Real> rowmax(n);
  for (int i = 0; i < n; ++i) {
    Real r(0);
    for (int j = 0; j < n; ++j) r = max(r, abs(m(i, j)));
    rowmax[i] = r;
  }
  const long guard_exp = -working_bits() + 8;
  f.log_abs_det = Real(0);
  DenseMatrix& a = f.lu;
  for (int k = 0; k < n; ++k) {
    int p = k;
    Real best = abs(a(k, k));
    for (int i = k + 1; i < n; ++i) {
      Real v = abs(a(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best.is_zero() || best < ldexp(rowmax[f.perm[p]], guard_exp))
      throw Error(ErrorKind::SingularMatrix, "pivot below threshold at column " + std::to_string(k));
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(p, j));
      std::swap(f.perm[k], f.perm[p]);
    }
    f.log_abs_det += log(best);
    const Complex piv = a(k, k);
    for (int i = k + 1; i < n; ++i) {
      if (a(i, k).is_zero()) continue;
      Complex l = a(i, k) / piv;
      a(i, k) = l;
      for (int j = k + 1; j < n; ++j) a(i, j) -= l * a(k, j);
    }
  }
  return f;
}

CVec LuFactor::solve(const CVec& rhs) const {
  CVec y(n);
  for (int i = 0; i < n; ++i) {
    Complex s = rhs[perm[i]];
    for (int j = 0; j < i; ++j) s -= lu(i, j) * y[j];
    y[i] = s;
  }
  for (int i = n - 1; i >= 0; --i) {
    Complex s = y[i];
    for (int j = i + 1; j < n; ++j) s -= lu(i, j) * y[j];
    y[i] = s / lu(i, i);
  }
  return y;
}

CVec LuFactor::solve_adjoint(const CVec& rhs) const {
  // P A = L U  =>  A^H = U^H L^H P.
  CVec w(n);
  for (int i = 0; i < n; ++i) {
    Complex s = rhs[i];
    for (int j = 0; j < i; ++j) s -= conj(lu(j, i)) * w[j];
    w[i] = s / conj(lu(i, i));
  }
  for (int i = n - 1; i >= 0; --i) {
    Complex s = w[i];
    for (int j = i + 1; j < n; ++j) s -= conj(lu(j, i)) * w[j];
    w[i] = s;
  }
  CVec x(n);
  for (int i = 0; i < n; ++i) x[perm[i]] = w[i];
  return x;
}

namespace {
Real norm1(const CVec& v) {
  Real s(0);
  for (const auto& x : v) s += abs(x);
  return s;
}
}  // namespace

Real cond_estimate_1(const DenseMatrix& m, const LuFactor& f) {
  const int n = f.n;
  if (n == 1) return Real(1);
  // Hager's estimator of ||A^{-1}||_1, complex variant.
  CVec x(n, Complex(Real(1) / Real(n)));
  Real est(0);
  int last_j = -1;
  for (int it = 0; it < 5; ++it) {
    CVec y = f.solve(x);
    Real ny = norm1(y);
    if (it > 0 && ny <= est) break;
    est = ny;
    CVec xi(n);
    for (int i = 0; i < n; ++i) {
      Real a = abs(y[i]);
      xi[i] = a.is_zero() ? Complex(1) : y[i] / a;
    }
    CVec z = f.solve_adjoint(xi);
    int j = 0;
    Real zmax(0);
    for (int i = 0; i < n; ++i) {
      Real a = abs(z[i]);
      if (a > zmax) {
        zmax = a;
        j = i;
      }
    }
    Complex ztx(0);
    for (int i = 0; i < n; ++i) ztx += conj(z[i]) * x[i];
    if (zmax <= ztx.re || j == last_j) break;
    last_j = j;
    x.assign(n, Complex(0));
    x[j] = Complex(1);
  }
  // Alternative probe guards against the estimator's known blind spots.
  CVec b(n);
  for (int i = 0; i < n; ++i) {
    Real v = Real(1) + Real(i) / Real(n - 1);
    b[i] = Complex((i % 2) ? -v : v);
  }
  Real alt = norm1(f.solve(b)) * 2 / (Real(3) * Real(n));
  est = max(est, alt);
  return est * m.norm_1();
}

LuSolveResult lu_solve(const DenseMatrix& m, const CVec& rhs) {
  if (static_cast<int>(rhs.size()) != m.rows()) throw Error(ErrorKind::DomainError, "lu_solve: rhs length");
  LuFactor f = lu_factor(m);
  LuSolveResult r;
  r.solution = f.solve(rhs);
  r.log_abs_det = f.log_abs_det;
  r.cond_estimate = cond_estimate_1(m, f);
  return r;
}

// ---------------------------------------------------------------- quadrature

const std::pair<std::vector<Real>, std::vector<Real>>& gauss_legendre_rule(int m) {
  thread_local std::map<std::pair<int, long>, std::pair<std::vector<Real>, std::vector<Real>>> cache;
  auto key = std::make_pair(m, working_bits());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<Real> x(m), w(m);
  const Real tol = ldexp(Real(1), -working_bits() + 4);
  const double dpi = 3.14159265358979323846;
  for (int i = 0; i < (m + 1) / 2; ++i) {
    Real z(std::cos(dpi * (i + 0.75) / (m + 0.5)));
    Real dp;
    for (int iter = 0; iter < 100; ++iter) {
      Real p0(1), p1 = z;
      for (int k = 2; k <= m; ++k) {
        Real p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(p2);
      }
      if (m == 1) p0 = Real(1);
      // p1 = P_m(z), p0 = P_{m-1}(z)
      dp = Real(m) * (z * p1 - p0) / (z * z - 1);
      Real dz = p1 / dp;
      z -= dz;
      if (abs(dz) <= tol) {
        // one more evaluation for the derivative at the converged point
        Real q0(1), q1 = z;
        for (int k = 2; k <= m; ++k) {
          Real q2 = ((2 * k - 1) * z * q1 - (k - 1) * q0) / k;
          q0 = std::move(q1);
          q1 = std::move(q2);
        }
        dp = Real(m) * (z * q1 - q0) / (z * z - 1);
        break;
      }
    }
    Real wi = Real(2) / ((1 - z * z) * dp * dp);
    x[i] = -z;
    x[m - 1 - i] = z;
    w[i] = wi;
    w[m - 1 - i] = wi;
  }
  return cache.emplace(key, std::make_pair(std::move(x), std::move(w))).first->second;
}

QuadResult gauss_legendre(const RealIntegrand& f, const Real& a, const Real& b, int m, const Real& scale,
                          int max_doublings) {
  if (m < 2) throw Error(ErrorKind::DomainError, "gauss_legendre: m < 2");
  const Real half = (b - a) / 2;
  const Real mid = (a + b) / 2;
  const Real tol = PrecisionContext{working_bits()}.tol_rel();
  auto rule_value = [&](int nodes) {
    const auto& [x, w] = gauss_legendre_rule(nodes);
    Complex s(0);
    for (int i = 0; i < nodes; ++i) s += f(mid + half * x[i]) * w[i];
    return s * half;
  };
  Complex prev = rule_value(m);
  for (int d = 0; d < max_doublings; ++d) {
    m *= 2;
    Complex cur = rule_value(m);
    Real change = abs(cur - prev);
    if (change <= tol * max(abs(cur), scale)) return {cur, m, change};
    prev = std::move(cur);
  }
  throw Error(ErrorKind::NoConvergence, "gauss_legendre did not converge");
}

Curve Curve::circle(const Complex& center, const Real& radius) {
  return Curve{[center, radius](const Real& t) {
    Complex e = expi(t);
    return std::make_pair(center + e * radius, mul_i(e) * radius);
  }};
}

Curve Curve::ellipse(const Complex& center, const Real& semi_x, const Real& semi_y) {
  return Curve{[center, semi_x, semi_y](const Real& t) {
    Complex e = expi(t);
    Complex z = center + Complex(e.re * semi_x, e.im * semi_y);
    Complex dz(-e.im * semi_x, e.re * semi_y);
    return std::make_pair(z, dz);
  }};
}

namespace {
Complex trapezoid_partial(const ComplexIntegrand& f, const Curve& curve, int m, int start, int stride) {
  Complex s(0);
  const Real two_pi = pi() * 2;
  for (int k = start; k < m; k += stride) {
    auto [z, dz] = curve.param(two_pi * Real(k) / Real(m));
    s += f(z) * dz;
  }
  return s;
}
}  // namespace

Complex contour_trapezoid_fixed(const ComplexIntegrand& f, const Curve& curve, int m) {
  return trapezoid_partial(f, curve, m, 0, 1) * (pi() * 2 / Real(m));
}

QuadResult contour_trapezoid(const ComplexIntegrand& f, const Curve& curve, int m, const Real& scale,
                             int max_doublings, const Real& tol_in) {
  if (m < 2) throw Error(ErrorKind::DomainError, "contour_trapezoid: m < 2");
  const Real tol = tol_in.is_zero() ? PrecisionContext{working_bits()}.tol_rel() : tol_in;
  Complex sum = trapezoid_partial(f, curve, m, 0, 1);
  Complex prev = sum * (pi() * 2 / Real(m));
  for (int d = 0; d < max_doublings; ++d) {
    sum += trapezoid_partial(f, curve, 2 * m, 1, 2);
    m *= 2;
    Complex cur = sum * (pi() * 2 / Real(m));
    Real change = abs(cur - prev);
    if (change <= tol * max(abs(cur), scale)) return {cur, m, change};
    prev = std::move(cur);
  }
  throw Error(ErrorKind::NoConvergence, "contour_trapezoid did not converge");
}

int winding_number(const Curve& curve, const Complex& z, int m) {
  double total = 0;
  const Real two_pi = pi() * 2;
  auto angle_at = [&](int k) {
    auto p = curve.param(two_pi * Real(k) / Real(m));
    Complex d = p.first - z;
    return std::atan2(d.im.to_double(), d.re.to_double());
  };
  double prev = angle_at(0);
  for (int k = 1; k <= m; ++k) {
    double cur = angle_at(k % m);
    double step = cur - prev;
    while (step > M_PI) step -= 2 * M_PI;
    while (step < -M_PI) step += 2 * M_PI;
    total += step;
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2 * M_PI)));
}

// ---------------------------------------------------------------- fits

RateFit fit_rate(const std::vector<std::pair<double, double>>& points, FitKind kind) {
  if (points.size() < 3) throw Error(ErrorKind::DegenerateFit, "need at least three points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(points.size());
  double x0 = points.front().first;
  bool all_equal = true;
  for (const auto& [x, y] : points) {
    if (y <= 0) throw Error(ErrorKind::DegenerateFit, "non-positive error value");
    if (x != x0) all_equal = false;
    double u = kind == FitKind::LogLog ? std::log(x) : x;
    double v = std::log(y);
    sx += u;
    sy += v;
    sxx += u * u;
    sxy += u * v;
  }
  if (all_equal) throw Error(ErrorKind::DegenerateFit, "all abscissae equal");
  double den = n * sxx - sx * sx;
  RateFit r;
  r.slope = (n * sxy - sx * sy) / den;
  r.intercept = (sy - r.slope * sx) / n;
  return r;
}

}  // namespace rh
