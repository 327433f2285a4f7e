// NEON kernel variants; baseline on aarch64, no runtime check needed.

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cstddef>

namespace di::kern::neon {

float dot_f32(const float* a, const float* b, std::size_t n) {
  float32x4_t acc = vdupq_n_f32(0.0f);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc = vfmaq_f32(acc, vld1q_f32(a + i), vld1q_f32(b + i));
  }
  float out = vaddvq_f32(acc);
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

void axpy_f32(float a, const float* x, float* y, std::size_t n) {
  const float32x4_t av = vdupq_n_f32(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    vst1q_f32(y + i, vfmaq_f32(vld1q_f32(y + i), av, vld1q_f32(x + i)));
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

double dot_f64(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vld1q_f64(a + i), vld1q_f64(b + i));
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) out += a[i] * b[i];
  return out;
}

double sq_maha_f64(const double* e, const double* mu, const double* inv_var, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(e + i), vld1q_f64(mu + i));
    acc = vfmaq_f64(acc, vmulq_f64(d, d), vld1q_f64(inv_var + i));
  }
  double out = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = e[i] - mu[i];
    out += d * d * inv_var[i];
  }
  return out;
}

void acc2_f64(const double* e, double* sum, double* sumsq, std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t ev = vld1q_f64(e + i);
    vst1q_f64(sum + i, vaddq_f64(vld1q_f64(sum + i), ev));
    vst1q_f64(sumsq + i, vfmaq_f64(vld1q_f64(sumsq + i), ev, ev));
  }
  for (; i < n; ++i) {
    sum[i] += e[i];
    sumsq[i] += e[i] * e[i];
  }
}

}  // namespace di::kern::neon

#endif  // aarch64
