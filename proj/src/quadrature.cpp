#include "needle/quadrature.hpp"

#include <numbers>

namespace needle {

namespace {
GaussLegendre16 build()
{
    GaussLegendre16 r{};
    const int n = 16;
    for (int i = 0; i < n / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double w = 2 / ((1 - z * z) * dp * dp);
        r.x[i] = -z;
        r.w[i] = w;
        r.x[n - 1 - i] = z;
        r.w[n - 1 - i] = w;
    }
    return r;
}
}  // namespace

const GaussLegendre16& gl16()
{
    static const GaussLegendre16 q = build();
    return q;
}

}  // namespace needle
