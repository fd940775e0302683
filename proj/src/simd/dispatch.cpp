#include <cstdlib>
#include <cstring>

#include "simd/kernels_internal.hpp"

namespace wavid::simd {
namespace {

bool cpu_has_avx2()
{
#if defined(WAVID_HAVE_AVX2)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& select()
{
    const char* env = std::getenv("WAVID_SIMD");
    if (env != nullptr && std::strcmp(env, "scalar") == 0)
        return detail::scalar_table();
    if (const KernelTable* t = kernels_for(Level::avx2))
        return *t;
    return detail::scalar_table();
}

} // namespace

const KernelTable* kernels_for(Level level)
{
    switch (level) {
    case Level::scalar:
        return &detail::scalar_table();
    case Level::avx2:
#if defined(WAVID_HAVE_AVX2)
        if (cpu_has_avx2())
            return &detail::avx2_table();
#endif
        return nullptr;
    }
    return nullptr;
}

const KernelTable& kernels()
{
    static const KernelTable& table = select();
    return table;
}

} // namespace wavid::simd
