#pragma once

#include <cstddef>

// Double-precision inner kernels of the equilibrium QP. Each has a scalar
// reference and an AVX2/FMA variant; the dispatcher picks one at runtime.
namespace rh::simd {

enum class Backend { Scalar, Avx2 };

struct KernelTable {
  // y = K x, K dense row-major n x n
  void (*matvec)(const double* K, const double* x, double* y, std::size_t n);
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // out_i = clamp(y_i - shift, 0, upper_i); returns sum w_i out_i
  double (*clip_shift)(const double* y, double shift, const double* upper, const double* w, double* out,
                       std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the binary was built without the AVX2 translation unit.
const KernelTable* avx2_kernels();

bool cpu_has_avx2();
Backend active_backend();
const KernelTable& kernels();
// Forces a backend (tests, benchmarks). Avx2 falls back to Scalar if unsupported.
void force_backend(Backend b);
void clear_backend_override();
const char* backend_name(Backend b);

}  // namespace rh::simd
