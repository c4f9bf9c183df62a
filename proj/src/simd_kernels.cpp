#include "rh/simd_kernels.hpp"

#include <algorithm>
#include <atomic>

namespace rh::simd {

namespace {

void matvec_scalar(const double* K, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = K + i * n;
    double s = 0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * x[j];
    y[i] = s;
  }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double clip_shift_scalar(const double* y, double shift, const double* upper, const double* w, double* out,
                         std::size_t n) {
  double s = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = std::min(std::max(y[i] - shift, 0.0), upper[i]);
    out[i] = v;
    s += w[i] * v;
  }
  return s;
}

const KernelTable kScalar{matvec_scalar, dot_scalar, axpy_scalar, clip_shift_scalar};

// -1 none, 0 scalar, 1 avx2
std::atomic<int> g_override{-1};

}  // namespace

const KernelTable& scalar_kernels() { return kScalar; }

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Backend active_backend() {
  int o = g_override.load();
  if (o == 0) return Backend::Scalar;
  bool avx = avx2_kernels() != nullptr && cpu_has_avx2();
  return avx ? Backend::Avx2 : Backend::Scalar;
}

const KernelTable& kernels() { return active_backend() == Backend::Avx2 ? *avx2_kernels() : kScalar; }

void force_backend(Backend b) { g_override.store(b == Backend::Scalar ? 0 : 1); }
void clear_backend_override() { g_override.store(-1); }

const char* backend_name(Backend b) { return b == Backend::Avx2 ? "avx2" : "scalar"; }

}  // namespace rh::simd
