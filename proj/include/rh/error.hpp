#pragma once

#include <stdexcept>
#include <string>

namespace rh {

enum class ErrorKind {
  SingularMatrix,
  NoConvergence,
  DegenerateFit,
  DomainError,
  AccuracyLoss,
  NonPositiveDensity,
  RootNotBracketed,
  OnCut,
  AtNode,
  ContourInvalid,
  Degenerate,
  SubdiagonalDegenerate,
  DegreeCollapseFailed,
  InconsistentKKT,
  FitIllConditioned,
  NegativeDerivative,
  OnBand,
  SectorBoundary,
  Config,
  Io,
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace rh
