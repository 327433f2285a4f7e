#include "di/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "di/log.hpp"

namespace di::kern {

namespace scalar {

float dot_f32(const float* a, const float* b, std::size_t n) {
  float acc = 0.0f;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy_f32(float a, const float* x, float* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_f64(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double sq_maha_f64(const double* e, const double* mu, const double* inv_var, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = e[i] - mu[i];
    acc += d * d * inv_var[i];
  }
  return acc;
}

void acc2_f64(const double* e, double* sum, double* sumsq, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    sum[i] += e[i];
    sumsq[i] += e[i] * e[i];
  }
}

}  // namespace scalar

static const KernelTable kScalarTable = {
    scalar::dot_f32, scalar::axpy_f32, scalar::dot_f64,
    scalar::sq_maha_f64, scalar::acc2_f64, "scalar"};

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
float dot_f32(const float* a, const float* b, std::size_t n);
void axpy_f32(float a, const float* x, float* y, std::size_t n);
double dot_f64(const double* a, const double* b, std::size_t n);
double sq_maha_f64(const double* e, const double* mu, const double* inv_var, std::size_t n);
void acc2_f64(const double* e, double* sum, double* sumsq, std::size_t n);
}  // namespace avx2

static const KernelTable kAvx2Table = {
    avx2::dot_f32, avx2::axpy_f32, avx2::dot_f64,
    avx2::sq_maha_f64, avx2::acc2_f64, "avx2"};

static bool avx2_supported() {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}
#endif

#if defined(__aarch64__)
namespace neon {
float dot_f32(const float* a, const float* b, std::size_t n);
void axpy_f32(float a, const float* x, float* y, std::size_t n);
double dot_f64(const double* a, const double* b, std::size_t n);
double sq_maha_f64(const double* e, const double* mu, const double* inv_var, std::size_t n);
void acc2_f64(const double* e, double* sum, double* sumsq, std::size_t n);
}  // namespace neon

static const KernelTable kNeonTable = {
    neon::dot_f32, neon::axpy_f32, neon::dot_f64,
    neon::sq_maha_f64, neon::acc2_f64, "neon"};
#endif

static const KernelTable* lookup(const std::string& name) {
  if (name == "scalar") return &kScalarTable;
#if defined(__x86_64__) || defined(_M_X64)
  if (name == "avx2") return avx2_supported() ? &kAvx2Table : nullptr;
#endif
#if defined(__aarch64__)
  if (name == "neon") return &kNeonTable;
#endif
  return nullptr;
}

static const KernelTable* resolve() {
  const char* forced = std::getenv("DI_KERNELS");
  if (forced && *forced && std::strcmp(forced, "auto") != 0) {
    const KernelTable* t = lookup(forced);
    if (t) {
      log::info("kernels: forced ", t->name);
      return t;
    }
    log::warn("kernels: DI_KERNELS=", forced, " unknown or unsupported, using auto");
  }
#if defined(__x86_64__) || defined(_M_X64)
  if (avx2_supported()) {
    log::info("kernels: avx2");
    return &kAvx2Table;
  }
#endif
#if defined(__aarch64__)
  log::info("kernels: neon");
  return &kNeonTable;
#endif
  log::info("kernels: scalar");
  return &kScalarTable;
}

const KernelTable& active() {
  static const KernelTable* t = resolve();
  return *t;
}

const KernelTable& table(const std::string& name) {
  const KernelTable* t = lookup(name);
  if (!t) throw std::runtime_error("kernel table unavailable: " + name);
  return *t;
}

const char* const* available(std::size_t* count) {
  static const char* names[3];
  static std::size_t n = [] {
    std::size_t k = 0;
    names[k++] = "scalar";
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_supported()) names[k++] = "avx2";
#endif
#if defined(__aarch64__)
    names[k++] = "neon";
#endif
    return k;
  }();
  *count = n;
  return names;
}

}  // namespace di::kern
