#pragma once

#include <string>

#include "rh/mp.hpp"

namespace rhtest {

inline rh::Real R(const char* s) { return rh::Real(std::string(s)); }

inline double rel(const rh::Complex& got, const rh::Complex& want) {
  rh::Real den = rh::abs(want);
  rh::Real num = rh::abs(got - want);
  if (den.is_zero()) return num.to_double();
  return (num / den).to_double();
}

inline double rel(const rh::Real& got, const rh::Real& want) { return rel(rh::Complex(got), rh::Complex(want)); }

}  // namespace rhtest
