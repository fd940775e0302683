#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "wavid/error.hpp"
#include "wavid/simd/kernels.hpp"
#include "wavid/spectral.hpp"

namespace wavid {
namespace {

struct Plan {
    std::size_t n = 0;
    // radix-2 data (n a power of two)
    std::vector<std::size_t> bitrev;
    std::vector<cplx> twiddle; // e^{-2 pi i k / n}, k < n / 2
    // Bluestein data (other n)
    std::size_t m = 0;
    std::vector<cplx> chirp;      // e^{-i pi k^2 / n}, k < n
    std::vector<cplx> chirp_hat;  // fft_m of conj(chirp), wrapped
};

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::shared_ptr<const Plan> get_plan(std::size_t n);

void radix2(const Plan& p, cplx* a, bool inverse)
{
    const std::size_t n = p.n;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = p.bitrev[i];
        if (i < j)
            std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t step = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                cplx w = p.twiddle[k * step];
                if (inverse)
                    w = std::conj(w);
                const cplx u = a[start + k];
                const cplx v = a[start + k + half];
                const double vr = v.real() * w.real() - v.imag() * w.imag();
                const double vi = v.real() * w.imag() + v.imag() * w.real();
                a[start + k] = {u.real() + vr, u.imag() + vi};
                a[start + k + half] = {u.real() - vr, u.imag() - vi};
            }
        }
    }
}

void transform(std::vector<cplx>& a, bool inverse)
{
    const std::size_t n = a.size();
    if (n == 0)
        throw ShapeError("fft: empty input");
    if (n == 1)
        return;
    auto plan = get_plan(n);
    if (is_pow2(n)) {
        radix2(*plan, a.data(), inverse);
        return;
    }
    // Bluestein: X_k = conj(c_k) sum_j (x_j conj(c_j)) c_{k-j}, c_k = e^{i pi k^2 / n}
    // written here with chirp = e^{-i pi k^2 / n}.
    const auto& k = simd::kernels();
    const std::size_t m = plan->m;
    auto sub = get_plan(m);
    std::vector<cplx> buf(m, cplx(0.0, 0.0));
    for (std::size_t j = 0; j < n; ++j) {
        const cplx c = inverse ? std::conj(plan->chirp[j]) : plan->chirp[j];
        buf[j] = a[j] * c;
    }
    radix2(*sub, buf.data(), false);
    if (inverse) {
        // the inverse chirp filter is the conjugate of the forward one in time,
        // i.e. conj of the spectrum with reversed index
        std::vector<cplx> filt(m);
        filt[0] = std::conj(plan->chirp_hat[0]);
        for (std::size_t i = 1; i < m; ++i)
            filt[i] = std::conj(plan->chirp_hat[m - i]);
        k.cmul(reinterpret_cast<const double*>(buf.data()), reinterpret_cast<const double*>(filt.data()),
               reinterpret_cast<double*>(buf.data()), m);
    } else {
        k.cmul(reinterpret_cast<const double*>(buf.data()),
               reinterpret_cast<const double*>(plan->chirp_hat.data()),
               reinterpret_cast<double*>(buf.data()), m);
    }
    radix2(*sub, buf.data(), true);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t j = 0; j < n; ++j) {
        const cplx c = inverse ? std::conj(plan->chirp[j]) : plan->chirp[j];
        a[j] = buf[j] * c * inv_m;
    }
}

std::shared_ptr<const Plan> build_plan(std::size_t n)
{
    auto p = std::make_shared<Plan>();
    p->n = n;
    const double two_pi = 2.0 * std::numbers::pi;
    if (is_pow2(n)) {
        std::size_t bits = 0;
        while ((std::size_t{1} << bits) < n)
            ++bits;
        p->bitrev.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0;
            for (std::size_t b = 0; b < bits; ++b)
                if (i & (std::size_t{1} << b))
                    r |= std::size_t{1} << (bits - 1 - b);
            p->bitrev[i] = r;
        }
        p->twiddle.resize(n / 2);
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double ang = -two_pi * static_cast<double>(k) / static_cast<double>(n);
            p->twiddle[k] = {std::cos(ang), std::sin(ang)};
        }
        return p;
    }
    p->m = next_pow2(2 * n - 1);
    p->chirp.resize(n);
    const std::size_t two_n = 2 * n;
    for (std::size_t k = 0; k < n; ++k) {
        // k^2 mod 2n keeps the angle argument small and exact
        const std::size_t k2 = static_cast<std::size_t>((static_cast<unsigned __int128>(k) * k) % two_n);
        const double ang = -std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
        p->chirp[k] = {std::cos(ang), std::sin(ang)};
    }
    std::vector<cplx> b(p->m, cplx(0.0, 0.0));
    b[0] = std::conj(p->chirp[0]);
    for (std::size_t k = 1; k < n; ++k) {
        b[k] = std::conj(p->chirp[k]);
        b[p->m - k] = std::conj(p->chirp[k]);
    }
    auto sub = get_plan(p->m);
    radix2(*sub, b.data(), false);
    p->chirp_hat = std::move(b);
    return p;
}

std::shared_ptr<const Plan> get_plan(std::size_t n)
{
    static std::mutex mutex;
    static std::map<std::size_t, std::shared_ptr<const Plan>> cache;
    {
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(n);
        if (it != cache.end())
            return it->second;
    }
    auto plan = build_plan(n);
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.emplace(n, plan);
    return it->second;
}

} // namespace

std::size_t next_pow2(std::size_t n)
{
    std::size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

void fft_inplace(std::vector<cplx>& a) { transform(a, false); }

void ifft_inplace(std::vector<cplx>& a)
{
    transform(a, true);
    const double inv = 1.0 / static_cast<double>(a.size());
    for (auto& v : a)
        v *= inv;
}

} // namespace wavid
