#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>

#include "wavid/error.hpp"
#include "wavid/identify.hpp"

namespace wavid {
namespace {

constexpr double reflection_limit = 1.0 - 1e-10;
constexpr double condition_limit = 1e12;

using Vec = std::vector<double>;

// Levinson recursion for the symmetric Toeplitz system with first column r
// (r[0] == 1). Returns nothing when a reflection coefficient reaches the
// stability limit.
std::optional<Vec> levinson(const Vec& r, const Vec& b)
{
    const std::size_t n = b.size();
    Vec x(n, 0.0), y(n, 0.0), v(n), z(n);
    x[0] = b[0];
    if (n == 1)
        return x;
    double alpha = -r[1];
    if (std::fabs(alpha) >= reflection_limit)
        return std::nullopt;
    y[0] = alpha;
    double beta = 1.0;
    for (std::size_t k = 1; k < n; ++k) {
        beta *= (1.0 - alpha * alpha);
        double acc = b[k];
        for (std::size_t i = 0; i < k; ++i)
            acc -= r[i + 1] * x[k - 1 - i];
        const double mu = acc / beta;
        for (std::size_t i = 0; i < k; ++i)
            v[i] = x[i] + mu * y[k - 1 - i];
        std::copy(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), x.begin());
        x[k] = mu;
        if (k + 1 < n) {
            double a = -r[k + 1];
            for (std::size_t i = 0; i < k; ++i)
                a -= r[i + 1] * y[k - 1 - i];
            alpha = a / beta;
            if (std::fabs(alpha) >= reflection_limit)
                return std::nullopt;
            for (std::size_t i = 0; i < k; ++i)
                z[i] = y[i] + alpha * y[k - 1 - i];
            std::copy(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(k), y.begin());
            y[k] = alpha;
        }
    }
    return x;
}

// LU factors with partial pivoting of the dense Toeplitz matrix.
struct DenseLu {
    std::size_t n = 0;
    Vec a;
    std::vector<std::size_t> piv;

    DenseLu(const Vec& r, std::size_t size) : n(size), a(size * size), piv(size)
    {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                a[i * n + j] = r[i > j ? i - j : j - i];
        double scale = 0.0;
        for (double v : a)
            scale = std::max(scale, std::fabs(v));
        for (std::size_t c = 0; c < n; ++c) {
            std::size_t p = c;
            for (std::size_t i = c + 1; i < n; ++i)
                if (std::fabs(a[i * n + c]) > std::fabs(a[p * n + c]))
                    p = i;
            if (!(std::fabs(a[p * n + c]) > 1e-14 * scale))
                throw IllConditionedError("wiener_hopf: Toeplitz matrix is singular; regularize the correlations");
            piv[c] = p;
            if (p != c)
                for (std::size_t j = 0; j < n; ++j)
                    std::swap(a[c * n + j], a[p * n + j]);
            for (std::size_t i = c + 1; i < n; ++i) {
                const double f = a[i * n + c] / a[c * n + c];
                a[i * n + c] = f;
                for (std::size_t j = c + 1; j < n; ++j)
                    a[i * n + j] -= f * a[c * n + j];
            }
        }
    }

    Vec solve(Vec b) const
    {
        for (std::size_t c = 0; c < n; ++c)
            std::swap(b[c], b[piv[c]]);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j)
                b[i] -= a[i * n + j] * b[j];
        for (std::size_t i = n; i-- > 0;) {
            for (std::size_t j = i + 1; j < n; ++j)
                b[i] -= a[i * n + j] * b[j];
            b[i] /= a[i * n + i];
        }
        return b;
    }
};

double toeplitz_norm1(const Vec& r, std::size_t n)
{
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            s += std::fabs(r[i > j ? i - j : j - i]);
        best = std::max(best, s);
    }
    return best;
}

// Hager's estimate of ||A^{-1}||_1 for symmetric A.
double inverse_norm1(const std::function<Vec(const Vec&)>& solve, std::size_t n)
{
    Vec x(n, 1.0 / static_cast<double>(n));
    double est = 0.0;
    for (int iter = 0; iter < 5; ++iter) {
        const Vec y = solve(x);
        est = 0.0;
        for (double v : y)
            est += std::fabs(v);
        Vec s(n);
        for (std::size_t i = 0; i < n; ++i)
            s[i] = y[i] >= 0.0 ? 1.0 : -1.0;
        const Vec z = solve(s);
        std::size_t j = 0;
        double ztx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            ztx += z[i] * x[i];
            if (std::fabs(z[i]) > std::fabs(z[j]))
                j = i;
        }
        if (std::fabs(z[j]) <= ztx)
            break;
        std::fill(x.begin(), x.end(), 0.0);
        x[j] = 1.0;
    }
    return est;
}

} // namespace

WienerHopfResult wiener_hopf_identify(const CorrelationFunction& rxx, const CorrelationFunction& rxy,
                                      std::size_t n_lags)
{
    if (n_lags == 0)
        throw ParameterError("wiener_hopf: n_lags must be >= 1");
    if (rxx.values.size() < n_lags || rxy.values.size() < n_lags)
        throw InsufficientDataError("wiener_hopf: correlations must cover n_lags lags");
    if (rxx.dt != rxy.dt || !(rxx.dt > 0.0))
        throw ShapeError("wiener_hopf: correlation dt mismatch");
    if (!(rxx.values[0] > 0.0))
        throw ParameterError("wiener_hopf: Rxx(0) must be > 0");

    const double dt = rxx.dt;
    const std::size_t n = n_lags;
    const double r0 = rxx.values[0] * dt;
    Vec r(n + 1, 0.0); // normalized first column, r[0] = 1
    for (std::size_t i = 0; i < n; ++i)
        r[i] = rxx.values[i] * dt / r0;
    Vec b(n);
    for (std::size_t i = 0; i < n; ++i)
        b[i] = rxy.values[i] / r0;

    WienerHopfResult out;
    std::function<Vec(const Vec&)> solve;
    std::optional<DenseLu> lu;
    auto direct = levinson(r, b);
    if (direct) {
        solve = [&r](const Vec& rhs) {
            auto v = levinson(r, rhs);
            return v ? *v : Vec(rhs.size(), 0.0);
        };
        out.h = std::move(*direct);
    } else {
        lu.emplace(r, n);
        solve = [&lu](const Vec& rhs) { return lu->solve(rhs); };
        out.h = lu->solve(b);
        out.used_fallback = true;
    }
    out.condition_estimate = toeplitz_norm1(r, n) * inverse_norm1(solve, n);
    if (!std::isfinite(out.condition_estimate) || out.condition_estimate > condition_limit)
        throw IllConditionedError("wiener_hopf: Toeplitz system is ill-conditioned (estimate "
                                  + std::to_string(out.condition_estimate) + "); regularize the correlations");

    double res = 0.0, ref = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            s += rxx.values[j > k ? j - k : k - j] * dt * out.h[k];
        res += (s - rxy.values[j]) * (s - rxy.values[j]);
        ref += rxy.values[j] * rxy.values[j];
    }
    out.relative_residual = ref > 0.0 ? std::sqrt(res / ref) : std::sqrt(res);
    return out;
}

} // namespace wavid
