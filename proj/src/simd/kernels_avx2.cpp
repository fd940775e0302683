#include <immintrin.h>

#include <algorithm>

#include "simd/kernels_internal.hpp"

// Each elementwise kernel performs the same IEEE operations as its scalar
// counterpart (no fused multiply-add), so results match bit for bit.
namespace wavid::simd::detail {
namespace {

inline __m256d complex_mul(__m256d a, __m256d b)
{
    const __m256d br = _mm256_movedup_pd(b);
    const __m256d bi = _mm256_permute_pd(b, 0xF);
    const __m256d t1 = _mm256_mul_pd(a, br);
    const __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(a, 0x5), bi);
    return _mm256_addsub_pd(t1, t2);
}

inline __m256d complex_mul_conj(__m256d a, __m256d b)
{
    const __m256d br = _mm256_movedup_pd(b);
    const __m256d bi = _mm256_permute_pd(b, 0xF);
    const __m256d t1 = _mm256_mul_pd(a, br);
    const __m256d t2 = _mm256_mul_pd(_mm256_permute_pd(a, 0x5), bi);
    const __m256d neg = _mm256_set1_pd(-0.0);
    return _mm256_addsub_pd(t1, _mm256_xor_pd(t2, neg));
}

void cmul(const double* a, const double* b, double* out, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(a + 2 * i);
        const __m256d vb = _mm256_loadu_pd(b + 2 * i);
        _mm256_storeu_pd(out + 2 * i, complex_mul(va, vb));
    }
    for (; i < n; ++i) {
        const double ar = a[2 * i], ai = a[2 * i + 1];
        const double br = b[2 * i], bi = b[2 * i + 1];
        out[2 * i] = ar * br - ai * bi;
        out[2 * i + 1] = ai * br + ar * bi;
    }
}

void cmul_conj(const double* a, const double* b, double* out, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d va = _mm256_loadu_pd(a + 2 * i);
        const __m256d vb = _mm256_loadu_pd(b + 2 * i);
        _mm256_storeu_pd(out + 2 * i, complex_mul_conj(va, vb));
    }
    for (; i < n; ++i) {
        const double ar = a[2 * i], ai = a[2 * i + 1];
        const double br = b[2 * i], bi = b[2 * i + 1];
        out[2 * i] = ar * br + ai * bi;
        out[2 * i + 1] = ai * br - ar * bi;
    }
}

double dot(const double* a, const double* b, std::size_t n)
{
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    for (; i + 4 <= n; i += 4)
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc0 = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm256_castpd256_pd128(acc0);
    const __m128d hi = _mm256_extractf128_pd(acc0, 1);
    const __m128d s2 = _mm_add_pd(lo, hi);
    double s = _mm_cvtsd_f64(_mm_add_sd(s2, _mm_unpackhi_pd(s2, s2)));
    for (; i < n; ++i)
        s += a[i] * b[i];
    return s;
}

void regularized_quotient(const double* cross, const double* power, double floor, double add,
                          double* out, std::size_t n)
{
    const __m256d vadd = _mm256_set1_pd(add);
    const __m256d vfloor = _mm256_set1_pd(floor);
    const __m256d zero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        // (p0, p0, p1, p1)
        const __m128d p = _mm_loadu_pd(power + i);
        const __m256d pp = _mm256_permute4x64_pd(_mm256_castpd128_pd256(p), 0x50);
        const __m256d d = _mm256_max_pd(_mm256_add_pd(pp, vadd), vfloor);
        const __m256d q = _mm256_div_pd(_mm256_loadu_pd(cross + 2 * i), d);
        const __m256d keep = _mm256_cmp_pd(d, zero, _CMP_GT_OQ);
        _mm256_storeu_pd(out + 2 * i, _mm256_and_pd(q, keep));
    }
    for (; i < n; ++i) {
        const double d = std::max(power[i] + add, floor);
        if (d > 0.0) {
            out[2 * i] = cross[2 * i] / d;
            out[2 * i + 1] = cross[2 * i + 1] / d;
        } else {
            out[2 * i] = 0.0;
            out[2 * i + 1] = 0.0;
        }
    }
}

void norm_sq(const double* a, double* out, std::size_t n)
{
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(a + 2 * i);
        const __m256d y = _mm256_loadu_pd(a + 2 * i + 4);
        const __m256d h = _mm256_hadd_pd(_mm256_mul_pd(x, x), _mm256_mul_pd(y, y));
        _mm256_storeu_pd(out + i, _mm256_permute4x64_pd(h, 0xD8));
    }
    for (; i < n; ++i)
        out[i] = a[2 * i] * a[2 * i] + a[2 * i + 1] * a[2 * i + 1];
}

void accumulate_real_scaled(const double* w, double s, double* acc, std::size_t n)
{
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d x = _mm256_loadu_pd(w + 2 * i);
        const __m256d y = _mm256_loadu_pd(w + 2 * i + 4);
        const __m256d re = _mm256_permute4x64_pd(_mm256_unpacklo_pd(x, y), 0xD8);
        const __m256d r = _mm256_add_pd(_mm256_loadu_pd(acc + i), _mm256_mul_pd(vs, re));
        _mm256_storeu_pd(acc + i, r);
    }
    for (; i < n; ++i)
        acc[i] = acc[i] + s * w[2 * i];
}

void axpy(double s, const double* x, double* y, std::size_t n)
{
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_add_pd(_mm256_loadu_pd(y + i), _mm256_mul_pd(vs, _mm256_loadu_pd(x + i)));
        _mm256_storeu_pd(y + i, r);
    }
    for (; i < n; ++i)
        y[i] = y[i] + s * x[i];
}

} // namespace

const KernelTable& avx2_table()
{
    static const KernelTable table{Level::avx2, "avx2", cmul, cmul_conj, dot,
                                   regularized_quotient, norm_sq, accumulate_real_scaled, axpy};
    return table;
}

} // namespace wavid::simd::detail
