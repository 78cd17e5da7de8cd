// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "posthoc/simd/kernels.hpp"

namespace posthoc::simd::detail {

const KernelTable& ScalarTable();

// Null when the variant was not compiled into this build.
const KernelTable* Avx2Table();
const KernelTable* NeonTable();

}  // namespace posthoc::simd::detail
