// SPDX-License-Identifier: Apache-2.0
#include <atomic>

#include "variants.hpp"

namespace posthoc::simd {
namespace detail {

#if !defined(POSTHOC_HAVE_AVX2)
const KernelTable* Avx2Table() { return nullptr; }
#endif
#if !defined(POSTHOC_HAVE_NEON)
const KernelTable* NeonTable() { return nullptr; }
#endif

}  // namespace detail

namespace {

bool CpuHasAvx2() {
#if defined(POSTHOC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* Detect() {
  if (CpuHasAvx2()) return detail::Avx2Table();
  if (detail::NeonTable() != nullptr) return detail::NeonTable();
  return &detail::ScalarTable();
}

const KernelTable* StartupTable() {
  static const KernelTable* table = Detect();
  return table;
}

std::atomic<const KernelTable*>& Current() {
  static std::atomic<const KernelTable*> current{StartupTable()};
  return current;
}

}  // namespace

std::string_view IsaName(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

bool IsaSupported(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
      return detail::Avx2Table() != nullptr && CpuHasAvx2();
    case Isa::kNeon:
      return detail::NeonTable() != nullptr;
  }
  return false;
}

const KernelTable& TableFor(Isa isa) {
  switch (isa) {
    case Isa::kAvx2:
      if (IsaSupported(isa)) return *detail::Avx2Table();
      break;
    case Isa::kNeon:
      if (IsaSupported(isa)) return *detail::NeonTable();
      break;
    case Isa::kScalar:
      break;
  }
  return detail::ScalarTable();
}

const KernelTable& Active() {
  return *Current().load(std::memory_order_relaxed);
}

bool ForceIsa(Isa isa) {
  if (!IsaSupported(isa)) return false;
  Current().store(&TableFor(isa), std::memory_order_relaxed);
  return true;
}

void ResetIsa() { Current().store(StartupTable(), std::memory_order_relaxed); }

}  // namespace posthoc::simd
