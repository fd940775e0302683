#include <cmath>

#include "wavid/error.hpp"
#include "wavid/wavelet.hpp"

namespace wavid {
namespace {

struct D4 {
    double h[4];
    double g[4];
    D4()
    {
        const double s3 = std::sqrt(3.0);
        const double d = 4.0 * std::sqrt(2.0);
        h[0] = (1.0 + s3) / d;
        h[1] = (3.0 + s3) / d;
        h[2] = (3.0 - s3) / d;
        h[3] = (1.0 - s3) / d;
        for (int k = 0; k < 4; ++k)
            g[k] = ((k % 2) ? -1.0 : 1.0) * h[3 - k];
    }
};

const D4& d4()
{
    static const D4 f;
    return f;
}

} // namespace

DwtTree dwt_d4(const std::vector<double>& x, std::size_t levels)
{
    if (x.empty())
        throw ShapeError("dwt_d4: empty input");
    if (levels >= 63 || x.size() % (std::size_t{1} << levels) != 0)
        throw ShapeError("dwt_d4: length must be divisible by 2^levels");
    const auto& f = d4();
    DwtTree tree;
    std::vector<double> a = x;
    for (std::size_t lv = 0; lv < levels; ++lv) {
        const std::size_t n = a.size();
        const std::size_t half = n / 2;
        std::vector<double> lo(half, 0.0), hi(half, 0.0);
        for (std::size_t i = 0; i < half; ++i) {
            for (std::size_t k = 0; k < 4; ++k) {
                const double v = a[(2 * i + k) % n];
                lo[i] += f.h[k] * v;
                hi[i] += f.g[k] * v;
            }
        }
        tree.details.push_back(std::move(hi));
        a = std::move(lo);
    }
    tree.approximation = std::move(a);
    return tree;
}

std::vector<double> idwt_d4(const DwtTree& tree)
{
    const auto& f = d4();
    std::vector<double> a = tree.approximation;
    for (std::size_t lv = tree.details.size(); lv-- > 0;) {
        const auto& d = tree.details[lv];
        if (d.size() != a.size())
            throw ShapeError("idwt_d4: inconsistent level sizes");
        const std::size_t n = 2 * a.size();
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < a.size(); ++i) {
            for (std::size_t k = 0; k < 4; ++k) {
                const std::size_t j = (2 * i + k) % n;
                out[j] += f.h[k] * a[i] + f.g[k] * d[i];
            }
        }
        a = std::move(out);
    }
    return a;
}

} // namespace wavid
