#pragma once

#include <cmath>
#include <stdexcept>

namespace needle {

// Bracketed root of an increasing-or-decreasing f on [lo, hi]; secant steps
// are accepted only when they land inside the current bracket.
template <class F>
double solve_bracketed(F&& f, double lo, double hi, double xtol, int max_iter = 200)
{
    double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0)) throw std::runtime_error("solve_bracketed: root not bracketed");
    bool bisect_next = false;
    for (int it = 0; it < max_iter && hi - lo > xtol; ++it) {
        double x;
        if (bisect_next) {
            x = 0.5 * (lo + hi);
        } else {
            x = hi - fhi * (hi - lo) / (fhi - flo);
            double guard = 1e-3 * (hi - lo);
            if (!(x > lo + guard && x < hi - guard)) x = 0.5 * (lo + hi);
        }
        double w = hi - lo;
        double fx = f(x);
        if (fx == 0) return x;
        if ((fx > 0) == (flo > 0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        // fall back to bisection when the bracket stalls
        bisect_next = (hi - lo) > 0.5 * w;
    }
    return 0.5 * (lo + hi);
}

struct MinResult {
    double x;
    double f;
};

template <class F>
MinResult golden_min(F&& f, double a, double b, double xtol)
{
    const double g = 0.38196601125010515;
    double c = a + g * (b - a), d = b - g * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > xtol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = a + g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = b - g * (b - a);
            fd = f(d);
        }
    }
    return fc <= fd ? MinResult{c, fc} : MinResult{d, fd};
}

}  // namespace needle
