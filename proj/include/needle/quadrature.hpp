#pragma once

#include <array>
#include <cmath>

namespace needle {

struct GaussLegendre16 {
    std::array<double, 16> x;
    std::array<double, 16> w;
};

// nodes/weights on [-1, 1], computed once by Newton on P_16
const GaussLegendre16& gl16();

// Composite 16-point Gauss-Legendre with panels no wider than max_panel.
template <class F>
double integrate(F&& f, double lo, double hi, double max_panel = 0.25)
{
    if (!(hi > lo)) return 0.0;
    const auto& q = gl16();
    int n = static_cast<int>(std::ceil((hi - lo) / max_panel));
    if (n < 1) n = 1;
    double h = (hi - lo) / n;
    double total = 0.0;
    for (int p = 0; p < n; ++p) {
        double c = lo + (p + 0.5) * h;
        double panel = 0.0;
        for (int i = 0; i < 16; ++i) panel += q.w[i] * f(c + 0.5 * h * q.x[i]);
        total += 0.5 * h * panel;
    }
    return total;
}

}  // namespace needle
