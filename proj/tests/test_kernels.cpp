#include <cmath>
#include <vector>

#include "di/kernels.hpp"
#include "di/rng.hpp"
#include "doctest.h"

using di::Rng;
namespace kern = di::kern;

namespace {

const std::size_t kSizes[] = {0, 1, 2, 3, 4, 7, 8, 9, 15, 16, 17, 31, 64, 100, 1000};

std::vector<float> random_f32(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<float> v(n);
  for (auto& x : v) x = static_cast<float>((rng.uniform01() - 0.5) * 2.0 * scale);
  return v;
}

std::vector<double> random_f64(Rng& rng, std::size_t n, double scale = 1.0) {
  std::vector<double> v(n);
  for (auto& x : v) x = (rng.uniform01() - 0.5) * 2.0 * scale;
  return v;
}

}  // namespace

TEST_CASE("every available implementation matches the scalar reference") {
  std::size_t count = 0;
  const char* const* names = kern::available(&count);
  REQUIRE(count >= 1);

  for (std::size_t t = 0; t < count; ++t) {
    const kern::KernelTable& impl = kern::table(names[t]);
    CAPTURE(impl.name);
    Rng rng(42);

    for (std::size_t n : kSizes) {
      CAPTURE(n);
      const auto a32 = random_f32(rng, n);
      const auto b32 = random_f32(rng, n);

      // dot_f32: compare both against a double-precision reference; the
      // vector lane order may legally reassociate the sum.
      double ref = 0.0;
      for (std::size_t i = 0; i < n; ++i) ref += static_cast<double>(a32[i]) * b32[i];
      const double tol32 = 1e-5 * (1.0 + std::abs(ref)) * (1.0 + std::sqrt(static_cast<double>(n)));
      CHECK(std::abs(impl.dot_f32(a32.data(), b32.data(), n) - ref) <= tol32);

      auto y_impl = random_f32(rng, n);
      auto y_ref = y_impl;
      impl.axpy_f32(0.37f, a32.data(), y_impl.data(), n);
      kern::scalar::axpy_f32(0.37f, a32.data(), y_ref.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(y_impl[i] - y_ref[i]) <= 1e-6f * (1.0f + std::abs(y_ref[i])));
      }

      const auto a64 = random_f64(rng, n);
      const auto b64 = random_f64(rng, n);
      const double d_ref = kern::scalar::dot_f64(a64.data(), b64.data(), n);
      const double tol64 = 1e-12 * (1.0 + std::abs(d_ref)) * (1.0 + std::sqrt(static_cast<double>(n)));
      CHECK(std::abs(impl.dot_f64(a64.data(), b64.data(), n) - d_ref) <= tol64);

      auto mu = random_f64(rng, n);
      std::vector<double> inv_var(n);
      for (auto& v : inv_var) v = 0.5 + rng.uniform01() * 10.0;
      const double m_ref = kern::scalar::sq_maha_f64(a64.data(), mu.data(), inv_var.data(), n);
      CHECK(std::abs(impl.sq_maha_f64(a64.data(), mu.data(), inv_var.data(), n) - m_ref) <=
            1e-12 * (1.0 + std::abs(m_ref)) * (1.0 + std::sqrt(static_cast<double>(n))));

      auto sum_impl = random_f64(rng, n);
      auto sumsq_impl = random_f64(rng, n);
      auto sum_ref = sum_impl;
      auto sumsq_ref = sumsq_impl;
      impl.acc2_f64(a64.data(), sum_impl.data(), sumsq_impl.data(), n);
      kern::scalar::acc2_f64(a64.data(), sum_ref.data(), sumsq_ref.data(), n);
      for (std::size_t i = 0; i < n; ++i) {
        CHECK(sum_impl[i] == doctest::Approx(sum_ref[i]).epsilon(1e-14));
        CHECK(sumsq_impl[i] == doctest::Approx(sumsq_ref[i]).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("the active table is one of the available implementations") {
  std::size_t count = 0;
  const char* const* names = kern::available(&count);
  bool found = false;
  for (std::size_t i = 0; i < count; ++i) {
    if (std::string(names[i]) == kern::active().name) found = true;
  }
  CHECK(found);
}

TEST_CASE("kernel results are reproducible within a run") {
  Rng rng(7);
  const auto a = random_f64(rng, 33);
  const auto b = random_f64(rng, 33);
  const double first = kern::active().dot_f64(a.data(), b.data(), a.size());
  for (int i = 0; i < 10; ++i) {
    CHECK(kern::active().dot_f64(a.data(), b.data(), a.size()) == first);
  }
}
