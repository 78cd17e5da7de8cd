// SPDX-License-Identifier: Apache-2.0
//
// Reduction and update kernels shared by the loss functions, the linear
// predictors and the neighbourhood kernels. Each kernel has a scalar reference
// implementation and vectorised variants (AVX2+FMA on x86-64, NEON on
// AArch64). The variant is picked once at startup from the CPU features; tests
// can pin a variant with ForceIsa() to check equivalence.
#pragma once

#include <cassert>
#include <cstddef>
#include <span>
#include <string_view>

namespace posthoc::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view IsaName(Isa isa);

struct KernelTable {
  Isa isa;
  // sum_i a[i]
  double (*sum)(const double* a, std::size_t n);
  // sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);
  // sum_i (a[i] - b[i])^2
  double (*sum_sq_diff)(const double* a, const double* b, std::size_t n);
  // sum_i |a[i] - b[i]|
  double (*sum_abs_diff)(const double* a, const double* b, std::size_t n);
  // sum_i ((a[i] - b[i]) * s[i])^2
  double (*scaled_sq_dist)(const double* a, const double* b, const double* s,
                           std::size_t n);
  // sum_i |a[i] - b[i]| * s[i]
  double (*scaled_abs_dist)(const double* a, const double* b, const double* s,
                            std::size_t n);
  // y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

// True when the running CPU (and this build) can execute `isa`.
bool IsaSupported(Isa isa);

// Kernel table for a specific variant. Requires IsaSupported(isa).
const KernelTable& TableFor(Isa isa);

// Table currently used by the library.
const KernelTable& Active();

// Pins the active table. Returns false (and changes nothing) when the variant
// is unsupported. Not thread-safe with respect to concurrent kernel use.
bool ForceIsa(Isa isa);

// Restores the startup selection.
void ResetIsa();

inline double Sum(std::span<const double> a) {
  return Active().sum(a.data(), a.size());
}

inline double Dot(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return Active().dot(a.data(), b.data(), a.size());
}

inline double SumSqDiff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return Active().sum_sq_diff(a.data(), b.data(), a.size());
}

inline double SumAbsDiff(std::span<const double> a, std::span<const double> b) {
  assert(a.size() == b.size());
  return Active().sum_abs_diff(a.data(), b.data(), a.size());
}

inline double ScaledSqDist(std::span<const double> a, std::span<const double> b,
                           std::span<const double> scale) {
  assert(a.size() == b.size() && a.size() == scale.size());
  return Active().scaled_sq_dist(a.data(), b.data(), scale.data(), a.size());
}

inline double ScaledAbsDist(std::span<const double> a, std::span<const double> b,
                            std::span<const double> scale) {
  assert(a.size() == b.size() && a.size() == scale.size());
  return Active().scaled_abs_dist(a.data(), b.data(), scale.data(), a.size());
}

inline void Axpy(double alpha, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  Active().axpy(alpha, x.data(), y.data(), x.size());
}

}  // namespace posthoc::simd
