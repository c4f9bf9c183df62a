// Acceptance suite: the 16 criteria with fixed settings, one line each.
//
// Criterion 16 is a known failure (see README, "Limitations"): it prints FAIL
// and does not affect the exit code; if it ever passes it is flagged. A
// conditionally skipped criterion prints SKIPPED with the classifier evidence.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#include "rh/checks.hpp"
#include "rh/simd_kernels.hpp"

using namespace rh;

namespace {

constexpr long kBits = 384;        // multiprecision checks
constexpr long kPhaseBits = 256;   // parametrix checks (double-precision equilibrium input)
constexpr int kEqGrid = 256;
constexpr int kPhaseGrid = 512;
constexpr double kQpTol = 1e-10;
const std::vector<int> kPadeN{4, 8, 16, 32};
const std::vector<int> kSweepN{8, 16, 32, 64};
const std::vector<int> kSpacingN{4, 8, 16, 32, 64};

struct Timed {
  CheckRecord rec;
  double seconds = 0;
};

Timed timed(const std::function<CheckRecord()>& f, int id) {
  auto t0 = std::chrono::steady_clock::now();
  Timed t;
  try {
    t.rec = f();
  } catch (const std::exception& e) {
    t.rec.id = id;
    t.rec.name = "criterion " + std::to_string(id);
    t.rec.status = CheckStatus::Error;
    t.rec.detail = e.what();
  }
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return t;
}

}  // namespace

int main() {
  PrecisionScope ps(kBits);
  std::printf("simd backend: %s\n", simd::backend_name(simd::active_backend()));

  const DensitySpec uni = build_density(DensityKind::Uniform, 1, 3);
  const DensitySpec poly = build_density(DensityKind::Poly, 1, 3, {1, 1});
  const DensitySpec bump = build_density(DensityKind::CosineBump, 1, 3, {2, 1, 0.5});
  const std::vector<DensitySpec> shipped{uni, poly, bump};
  const Complex s2(2);

  // shared inputs
  PadeSweep sweep = pade_sweep(uni, s2, kPadeN, kBits, 1);
  EquilibriumCase c_uni = solve_case("uniform", uni, FieldEvaluator(uni), kEqGrid, kQpTol, true);
  EquilibriumCase c_poly = solve_case("poly", poly, FieldEvaluator(poly), kEqGrid, kQpTol, false);
  EquilibriumCase c_bump = solve_case("cosine_bump", bump, FieldEvaluator(bump), kEqGrid, kQpTol, true);
  const DensitySpec eng_d = build_density(DensityKind::Uniform, 1, 4);
  const FieldEvaluator eng_f = FieldEvaluator::quadratic(eng_d, 1.5, 2.5);
  EquilibriumCase c_eng = solve_case("quadratic_regular", eng_d, eng_f, kEqGrid, kQpTol, true);
  EquilibriumCase c_eng_fine = solve_case("quadratic_regular", eng_d, eng_f, kPhaseGrid, kQpTol, true);

  std::vector<std::function<CheckRecord()>> crit = {
      [&] { return check_interpolation(sweep, nullptr); },
      [&] { return check_orthogonality(sweep); },
      [&] { return check_rational_recovery(kBits); },
      [&] { return check_barycentric(uni, s2, 8, kBits); },
      [&] { return check_hermite_walsh(uni, s2, {4, 8, 16}, Complex(4), kBits, 1); },
      [&] { return check_spacing(shipped, kSpacingN, kBits, nullptr); },
      [&] { return check_rates(shipped, kSweepN, kBits, nullptr); },
      [&] { return check_hurwitz_exponent({Complex(2), Complex(3), Complex(2.5, 1.0)}, 1, 3, kSweepN, kBits); },
      [&] { return check_equilibrium({&c_uni, &c_poly, &c_bump, &c_eng}, kQpTol); },
      [&] { return check_y_normalization(uni, s2, 4, kBits); },
      [&] { return check_outer_parametrix(c_eng_fine.sol.c, c_eng_fine.sol.d, kBits); },
      [&] { return check_airy(kPhaseBits); },
      [&] { return check_matching(c_eng_fine, kSweepN, kPhaseBits, nullptr); },
      [&] { return check_lips(c_eng_fine, kSweepN, kPhaseBits, nullptr); },
      [&] { return check_strong_asymptotics({&c_uni, &c_poly, &c_bump}, &sweep, kPhaseBits, nullptr); },
      [&] { return check_subexponential(uni, s2, kSweepN, kBits, nullptr); },
  };

  std::vector<Timed> results;
  for (size_t i = 0; i < crit.size(); ++i) {
    results.push_back(timed(crit[i], static_cast<int>(i) + 1));
    const auto& r = results.back().rec;
    std::printf("[%2d] %-18s %-38s measured %-11.4g %s %.4g  (%.1fs)\n", r.id, check_status_name(r.status),
                r.name.c_str(), r.measured, r.relation.c_str(), r.threshold, results.back().seconds);
    std::fflush(stdout);
  }

  std::printf("\ndetails\n");
  int failed = 0;
  for (const auto& t : results) {
    std::printf("[%2d] %s\n     %s\n", t.rec.id, t.rec.basis.c_str(), t.rec.detail.c_str());
    if (!status_ok(t.rec.status)) ++failed;
  }
  const auto& last = results.back().rec;
  if (last.status == CheckStatus::UnexpectedPass)
    std::printf("\nnote: criterion 16 passed although it is documented as a known failure\n");
  std::printf("\n%d unexpected failure(s)\n", failed);
  return failed == 0 ? 0 : 1;
}
