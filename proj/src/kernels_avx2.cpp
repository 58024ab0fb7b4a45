// AVX2/FMA kernels. Compiled with -mavx2 -mfma on x86_64 only; callers must
// gate on avx2_runtime_supported() before selecting this table.

#include "qcap/kernels.hpp"

#if defined(QCAP_HAVE_AVX2_BUILD)

#include <immintrin.h>

namespace qcap::kernels {
namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d swapped = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), acc);
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * y[i];
  return r;
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void scale_avx2(double* x, double alpha, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
  for (; i < n; ++i) x[i] *= alpha;
}

double sum_sq_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double r = hsum(acc);
  for (; i < n; ++i) r += x[i] * x[i];
  return r;
}

void matmul_nn_avx2(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    double* crow = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j) crow[j] = 0.0;
    for (int l = 0; l < k; ++l) {
      const double aval = a[static_cast<std::size_t>(i) * k + l];
      axpy_avx2(aval, b + static_cast<std::size_t>(l) * n, crow, static_cast<std::size_t>(n));
    }
  }
}

void matmul_nt_avx2(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int i = 0; i < m; ++i) {
    const double* arow = a + static_cast<std::size_t>(i) * k;
    double* crow = c + static_cast<std::size_t>(i) * n;
    for (int j = 0; j < n; ++j)
      crow[j] = dot_avx2(arow, b + static_cast<std::size_t>(j) * k, static_cast<std::size_t>(k));
  }
}

void matmul_tn_avx2(const double* a, const double* b, double* c, int m, int k, int n) {
  for (std::size_t i = 0; i < static_cast<std::size_t>(m) * n; ++i) c[i] = 0.0;
  for (int l = 0; l < k; ++l) {
    const double* arow = a + static_cast<std::size_t>(l) * m;
    const double* brow = b + static_cast<std::size_t>(l) * n;
    for (int i = 0; i < m; ++i)
      axpy_avx2(arow[i], brow, c + static_cast<std::size_t>(i) * n, static_cast<std::size_t>(n));
  }
}

}  // namespace

const Ops* avx2_ops() {
  static const Ops ops = {
      "avx2",        dot_avx2,       axpy_avx2,      scale_avx2,
      sum_sq_avx2,   matmul_nn_avx2, matmul_nt_avx2, matmul_tn_avx2,
  };
  return &ops;
}

}  // namespace qcap::kernels

#else

namespace qcap::kernels {
const Ops* avx2_ops() { return nullptr; }
}  // namespace qcap::kernels

#endif
