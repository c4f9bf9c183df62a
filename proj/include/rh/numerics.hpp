#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "rh/error.hpp"
#include "rh/mp.hpp"

namespace rh {

using CVec = std::vector<Complex>;

// Coefficients indexed by degree; trailing zeros are trimmed.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(CVec coeffs);
  static Polynomial monomial(int k);
  static Polynomial from_roots(const std::vector<Complex>& roots);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const CVec& coeffs() const { return c_; }
  Complex coeff(int k) const;

  Complex operator()(const Complex& z) const;
  // Value and first derivative in one Horner pass.
  std::pair<Complex, Complex> eval_with_derivative(const Complex& z) const;
  Polynomial derivative() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Complex& s);

 private:
  void trim();
  CVec c_;
};

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), e_(static_cast<size_t>(rows) * cols) {}
  static DenseMatrix identity(int n);
  static DenseMatrix two_by_two(const Complex& a, const Complex& b, const Complex& c, const Complex& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Complex& operator()(int i, int j) { return e_[static_cast<size_t>(i) * cols_ + j]; }
  const Complex& operator()(int i, int j) const { return e_[static_cast<size_t>(i) * cols_ + j]; }
  const CVec& entries() const { return e_; }

  CVec apply(const CVec& x) const;
  DenseMatrix transpose() const;
  Real norm_inf() const;  // max row sum
  Real norm_1() const;    // max column sum

  friend DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
  friend DenseMatrix operator*(const DenseMatrix& a, const Complex& s);

 private:
  int rows_ = 0;
  int cols_ = 0;
  CVec e_;
};

// 2x2 helpers used by the parametrix code.
Complex det2(const DenseMatrix& m);
DenseMatrix inverse2(const DenseMatrix& m);
Real frobenius(const DenseMatrix& m);
Real max_abs_entry(const DenseMatrix& m);

struct LuFactor {
  DenseMatrix lu;
  std::vector<int> perm;
  Real log_abs_det;
  int n = 0;

  CVec solve(const CVec& rhs) const;
  CVec solve_adjoint(const CVec& rhs) const;  // solves A^H x = rhs
};

// Partial pivoting. Throws SingularMatrix when a pivot is below
// 2^{-bits+8} times the largest entry of its row in the original matrix.
LuFactor lu_factor(const DenseMatrix& m);

struct LuSolveResult {
  CVec solution;
  Real log_abs_det;
  Real cond_estimate;  // 1-norm condition estimate (Hager-Higham)
};

LuSolveResult lu_solve(const DenseMatrix& m, const CVec& rhs);
Real cond_estimate_1(const DenseMatrix& m, const LuFactor& f);

Real max_abs(const CVec& v);
CVec residual(const DenseMatrix& m, const CVec& x, const CVec& rhs);

// --- quadrature

using RealIntegrand = std::function<Complex(const Real&)>;

struct QuadResult {
  Complex value;
  int nodes = 0;
  Real last_change;
};

// Gauss-Legendre rule on [a,b], doubling the node count from m until two
// successive values agree to tol_rel * max(|value|, scale).
QuadResult gauss_legendre(const RealIntegrand& f, const Real& a, const Real& b, int m,
                          const Real& scale = Real(0), int max_doublings = 12);

// Nodes and weights on [-1,1] at the working precision (cached per thread).
const std::pair<std::vector<Real>, std::vector<Real>>& gauss_legendre_rule(int m);

struct Curve {
  // z(t) and z'(t) for t in [0, 2 pi), positively oriented.
  std::function<std::pair<Complex, Complex>(const Real&)> param;
  static Curve circle(const Complex& center, const Real& radius);
  static Curve ellipse(const Complex& center, const Real& semi_x, const Real& semi_y);
};

using ComplexIntegrand = std::function<Complex(const Complex&)>;

// Periodic trapezoid rule for the contour integral of f along the curve,
// doubling the sample count (reusing previous samples) until stable.
QuadResult contour_trapezoid(const ComplexIntegrand& f, const Curve& curve, int m,
                             const Real& scale = Real(0), int max_doublings = 12, const Real& tol = Real(0));

// Fixed-count trapezoid rule, no convergence control.
Complex contour_trapezoid_fixed(const ComplexIntegrand& f, const Curve& curve, int m);

// Winding number of the curve around z, from m samples.
int winding_number(const Curve& curve, const Complex& z, int m = 512);

// --- rate fitting

enum class FitKind { LogLog, SemiLog };

struct RateFit {
  double slope = 0;
  double intercept = 0;
};

RateFit fit_rate(const std::vector<std::pair<double, double>>& points, FitKind kind = FitKind::LogLog);

}  // namespace rh
