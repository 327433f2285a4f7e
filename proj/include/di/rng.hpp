#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace di {

// Deterministic random source. The engine is std::mt19937_64 (its output
// sequence is fixed by the standard) and every distribution is implemented
// here explicitly, so identical seeds give identical draws on every
// platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(eng_() >> 11) * (1.0 / 9007199254740992.0);
  }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(uniform01() * static_cast<double>(n)) % n;
  }

  int bernoulli(double p) { return uniform01() < p ? 1 : 0; }

  // Standard normal via the Marsaglia polar method; the pair is cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * m;
    have_cached_ = true;
    return u * m;
  }

  // Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      const double u = uniform01();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform01();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  // Draw from unnormalized non-negative weights by CDF inversion.
  int categorical(const double* w, int n) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += w[i];
    double u = uniform01() * total;
    for (int i = 0; i < n; ++i) {
      u -= w[i];
      if (u < 0.0) return i;
    }
    return n - 1;
  }

  void dirichlet(const double* alpha, int n, double* out) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      out[i] = gamma(alpha[i]);
      total += out[i];
    }
    for (int i = 0; i < n; ++i) out[i] /= total;
  }

  // Symmetric Dirichlet.
  void dirichlet(double alpha, int n, double* out) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      out[i] = gamma(alpha);
      total += out[i];
    }
    for (int i = 0; i < n; ++i) out[i] /= total;
  }

  // Derive an independent stream from a base seed and a stream tag.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 eng_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace di
