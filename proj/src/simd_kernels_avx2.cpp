// Built with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <algorithm>

#include "rh/simd_kernels.hpp"

namespace rh::simd {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

void matvec_avx2(const double* K, const double* x, double* y, std::size_t n) {
  std::size_t i = 0;
  // four rows at a time share the x loads
  for (; i + 4 <= n; i += 4) {
    const double* r0 = K + i * n;
    const double* r1 = r0 + n;
    const double* r2 = r1 + n;
    const double* r3 = r2 + n;
    __m256d a0 = _mm256_setzero_pd(), a1 = _mm256_setzero_pd(), a2 = _mm256_setzero_pd(),
            a3 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
      __m256d xv = _mm256_loadu_pd(x + j);
      a0 = _mm256_fmadd_pd(_mm256_loadu_pd(r0 + j), xv, a0);
      a1 = _mm256_fmadd_pd(_mm256_loadu_pd(r1 + j), xv, a1);
      a2 = _mm256_fmadd_pd(_mm256_loadu_pd(r2 + j), xv, a2);
      a3 = _mm256_fmadd_pd(_mm256_loadu_pd(r3 + j), xv, a3);
    }
    double s0 = hsum(a0), s1 = hsum(a1), s2 = hsum(a2), s3 = hsum(a3);
    for (; j < n; ++j) {
      s0 += r0[j] * x[j];
      s1 += r1[j] * x[j];
      s2 += r2[j] * x[j];
      s3 += r3[j] * x[j];
    }
    y[i] = s0;
    y[i + 1] = s1;
    y[i + 2] = s2;
    y[i + 3] = s3;
  }
  for (; i < n; ++i) y[i] = dot_avx2(K + i * n, x, n);
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  __m256d av = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(av, _mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

double clip_shift_avx2(const double* y, double shift, const double* upper, const double* w, double* out,
                       std::size_t n) {
  __m256d sv = _mm256_set1_pd(shift);
  __m256d zero = _mm256_setzero_pd();
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_sub_pd(_mm256_loadu_pd(y + i), sv);
    v = _mm256_min_pd(_mm256_max_pd(v, zero), _mm256_loadu_pd(upper + i));
    _mm256_storeu_pd(out + i, v);
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + i), v, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) {
    double v = std::min(std::max(y[i] - shift, 0.0), upper[i]);
    out[i] = v;
    s += w[i] * v;
  }
  return s;
}

const KernelTable kAvx2{matvec_avx2, dot_avx2, axpy_avx2, clip_shift_avx2};

}  // namespace

const KernelTable* avx2_kernels() { return &kAvx2; }

}  // namespace rh::simd
