#pragma once
// Run configuration: INI-style text with typed sections.
//
//   [run]          name, s_re, s_im, bits, n_list, seed, extra_k_points
//   [density]      kind (uniform | poly | cosine_bump), A, B, params
//   [field]        kind (kappa | quadratic), strength, center
//   [equilibrium]  m, qp_tol
//   [phase]        m, bits, n_list
//   [rates]        n_list
//   [output]       dir
//
// Lists are comma separated. Unknown keys are rejected.

#include <cstdint>
#include <string>
#include <vector>

#include "rh/nodes.hpp"

namespace rh {

struct RunConfig {
  std::string name = "run";
  double s_re = 2, s_im = 0;
  long bits = 384;
  std::vector<int> n_list{4, 8, 16, 32};
  std::uint64_t seed = 1;
  int extra_k_points = 0;

  DensityKind density_kind = DensityKind::Uniform;
  double A = 1, B = 3;
  std::vector<double> density_params;

  std::string field_kind = "kappa";
  double field_strength = 0, field_center = 0;

  int eq_m = 256;
  double qp_tol = 1e-10;

  int phase_m = 512;
  long phase_bits = 256;
  std::vector<int> phase_n_list{8, 16, 32, 64};

  std::vector<int> rate_n_list{8, 16, 32, 64};

  std::string out_dir = "out";
  int jobs = 1;  // not part of the hash

  Complex s() const { return Complex(s_re, s_im); }
  DensitySpec density() const;
  FieldEvaluator field() const;
  // Contour metadata recorded in outputs (the contour itself is fixed).
  std::string contour_description() const;
};

// Throws Error(Config) for parse and validation failures.
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);
void validate(const RunConfig& cfg);

// Canonical key=value text of every field that affects results.
std::string canonical_text(const RunConfig& cfg);
// 64-bit FNV-1a of the canonical text, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

}  // namespace rh
