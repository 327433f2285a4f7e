// AVX2+FMA kernel variants. This translation unit is compiled with
// -mavx2 -mfma on x86-64 only; callers must gate on runtime CPU support.

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cstddef>

namespace di::kern::avx2 {

float dot_f32(const float* a, const float* b, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc = _mm256_fmadd_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i), acc);
  }
  __m128 lo = _mm256_castps256_ps128(acc);
  __m128 hi = _mm256_extractf128_ps(acc, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_hadd_ps(lo, lo);
  lo = _mm_hadd_ps(lo, lo);
  float out = _mm_cvtss_f32(lo);
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

void axpy_f32(float a, const float* x, float* y, std::size_t n) {
  const __m256 av = _mm256_set1_ps(a);
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 yv = _mm256_loadu_ps(y + i);
    yv = _mm256_fmadd_ps(av, _mm256_loadu_ps(x + i), yv);
    _mm256_storeu_ps(y + i, yv);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

static inline double hsum_pd(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double dot_f64(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
  }
  double out = hsum_pd(acc);
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

double sq_maha_f64(const double* e, const double* mu, const double* inv_var, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(e + i), _mm256_loadu_pd(mu + i));
    acc = _mm256_fmadd_pd(_mm256_mul_pd(d, d), _mm256_loadu_pd(inv_var + i), acc);
  }
  double out = hsum_pd(acc);
  for (; i < n; ++i) {
    const double d = e[i] - mu[i];
    out += d * d * inv_var[i];
  }
  return out;
}

void acc2_f64(const double* e, double* sum, double* sumsq, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d ev = _mm256_loadu_pd(e + i);
    _mm256_storeu_pd(sum + i, _mm256_add_pd(_mm256_loadu_pd(sum + i), ev));
    _mm256_storeu_pd(sumsq + i,
                     _mm256_fmadd_pd(ev, ev, _mm256_loadu_pd(sumsq + i)));
  }
  for (; i < n; ++i) {
    sum[i] += e[i];
    sumsq[i] += e[i] * e[i];
  }
}

}  // namespace di::kern::avx2

#endif  // x86-64
