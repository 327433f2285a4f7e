#pragma once

#include <cstddef>
#include <string>

// Data-parallel inner loops shared by the embedding trainer and the
// sampler's Gaussian emission terms. Scalar implementations are the
// reference; AVX2 (x86-64) and NEON (aarch64) variants are selected once
// at startup and must agree with the reference within floating-point
// reassociation error (see tests/test_kernels.cpp).

namespace di::kern {

namespace scalar {
float dot_f32(const float* a, const float* b, std::size_t n);
void axpy_f32(float a, const float* x, float* y, std::size_t n);
double dot_f64(const double* a, const double* b, std::size_t n);
// Sum over i of (e[i]-mu[i])^2 * inv_var[i].
double sq_maha_f64(const double* e, const double* mu, const double* inv_var, std::size_t n);
// sum[i] += e[i]; sumsq[i] += e[i]^2.
void acc2_f64(const double* e, double* sum, double* sumsq, std::size_t n);
}  // namespace scalar

struct KernelTable {
  float (*dot_f32)(const float*, const float*, std::size_t);
  void (*axpy_f32)(float, const float*, float*, std::size_t);
  double (*dot_f64)(const double*, const double*, std::size_t);
  double (*sq_maha_f64)(const double*, const double*, const double*, std::size_t);
  void (*acc2_f64)(const double*, double*, double*, std::size_t);
  const char* name;
};

// The table in use. Resolved once: best supported implementation, or the
// one forced via DI_KERNELS=scalar|avx2|neon.
const KernelTable& active();

// Lookup by name; throws std::runtime_error if unknown or unsupported on
// this CPU. Used by the equivalence tests.
const KernelTable& table(const std::string& name);

// Names of implementations usable on this machine.
const char* const* available(std::size_t* count);

}  // namespace di::kern
