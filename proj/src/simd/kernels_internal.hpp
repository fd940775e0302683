#pragma once

#include "wavid/simd/kernels.hpp"

namespace wavid::simd::detail {

const KernelTable& scalar_table();
#if defined(WAVID_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

} // namespace wavid::simd::detail
