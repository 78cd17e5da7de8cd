// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstddef>

#include "variants.hpp"

namespace posthoc::simd::detail {
namespace {

double Sum(const double* a, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i];
  return acc;
}

double DotProduct(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

double SumSqDiff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

double SumAbsDiff(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]);
  return acc;
}

double ScaledSqDist(const double* a, const double* b, const double* s,
                    std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = (a[i] - b[i]) * s[i];
    acc += d * d;
  }
  return acc;
}

double ScaledAbsDist(const double* a, const double* b, const double* s,
                     std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::fabs(a[i] - b[i]) * s[i];
  return acc;
}

void Axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& ScalarTable() {
  static const KernelTable table{Isa::kScalar,  Sum,          DotProduct,
                                 SumSqDiff,     SumAbsDiff,   ScaledSqDist,
                                 ScaledAbsDist, Axpy};
  return table;
}

}  // namespace posthoc::simd::detail
