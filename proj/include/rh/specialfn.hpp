#pragma once

#include <vector>

#include "rh/numerics.hpp"

namespace rh {

struct HurwitzParams {
  Complex s;
  int series_cutoff = 16;   // lower bound on the number of directly summed terms
  int bernoulli_terms = 8;  // lower bound on the number of correction pairs
};

// zeta(s, a) = sum_{m>=0} (m + a)^{-s} for Re s > 1, Re a > 0, by
// Euler-Maclaurin summation with the shift and the number of Bernoulli
// corrections chosen from the working precision.
Complex hurwitz_zeta(const HurwitzParams& p, const Complex& a);

struct HurwitzBoundFit {
  std::vector<std::pair<int, double>> sup_abs;  // (n, sup_alpha |zeta(s, n alpha)|)
  double slope = 0;
};

// Fits log sup_{alpha in [A,B]} |zeta(s, n alpha)| against log n.
HurwitzBoundFit hurwitz_bound_check(const HurwitzParams& p, double A, double B, const std::vector<int>& n_list,
                                    int samples = 33);

// B_{2j}/(2j)! for j = 1..count at the working precision.
const std::vector<Real>& bernoulli_over_factorial(int count);

struct AiryValue {
  Complex ai;
  Complex ai_prime;
};

// Switch radius between the Maclaurin series and the asymptotic expansion.
Real airy_switch_radius();

// Ai and Ai'. With validate = true, arguments in the annulus [r0, 1.15 r0] are
// evaluated by both methods and AccuracyLoss is raised on disagreement.
AiryValue airy_ai(const Complex& z, bool validate = true);

// Direct access to the two methods (used by the cross-validation tests).
AiryValue airy_maclaurin(const Complex& z);
AiryValue airy_asymptotic(const Complex& z);  // requires |arg z| <= 2 pi / 3 + small

}  // namespace rh
