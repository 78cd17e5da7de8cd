// SPDX-License-Identifier: Apache-2.0
//
// AArch64 NEON variants (two doubles per register).
#include <arm_neon.h>

#include <cmath>
#include <cstddef>

#include "variants.hpp"

namespace posthoc::simd::detail {
namespace {

double Sum(const double* a, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vaddq_f64(acc0, vld1q_f64(a + i));
    acc1 = vaddq_f64(acc1, vld1q_f64(a + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i];
  return acc;
}

double DotProduct(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double SumSqDiff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

double SumAbsDiff(const double* a, const double* b, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vaddq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) total += std::fabs(a[i] - b[i]);
  return total;
}

double ScaledSqDist(const double* a, const double* b, const double* s,
                    std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d =
        vmulq_f64(vsubq_f64(vld1q_f64(a + i), vld1q_f64(b + i)), vld1q_f64(s + i));
    acc = vfmaq_f64(acc, d, d);
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) {
    const double d = (a[i] - b[i]) * s[i];
    total += d * d;
  }
  return total;
}

double ScaledAbsDist(const double* a, const double* b, const double* s,
                     std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    acc = vfmaq_f64(acc, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)),
                    vld1q_f64(s + i));
  }
  double total = vaddvq_f64(acc);
  for (; i < n; ++i) total += std::fabs(a[i] - b[i]) * s[i];
  return total;
}

void Axpy(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable* NeonTable() {
  static const KernelTable table{Isa::kNeon,    Sum,          DotProduct,
                                 SumSqDiff,     SumAbsDiff,   ScaledSqDist,
                                 ScaledAbsDist, Axpy};
  return &table;
}

}  // namespace posthoc::simd::detail
