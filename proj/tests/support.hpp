#pragma once

#include <algorithm>
#include <random>
#include <vector>

#include "needle/needle_measure.hpp"

namespace needle::testing {

struct RandomNeedle {
    Interval domain;
    ConvexWeight weight;
    NeedleMeasure measure;
};

// 0-4 knots in [-2,2], exponential slope increments; the domain is the line,
// a half-line or a bounded interval of length >= 3
inline RandomNeedle random_needle(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> nk(0, 4);
    std::uniform_real_distribution<double> pos(-2, 2), s0(-1, 1), u(0, 1);
    std::exponential_distribution<double> inc(1 / 0.6);
    std::vector<double> p(nk(rng));
    for (auto& x : p) x = pos(rng);
    std::sort(p.begin(), p.end());
    p.erase(std::unique(p.begin(), p.end()), p.end());
    std::vector<double> s{s0(rng)};
    for (std::size_t i = 0; i < p.size(); ++i) s.push_back(s.back() + inc(rng));
    ConvexWeight w = ConvexWeight::from_slopes(p, s);
    Interval dom{-kInf, kInf};
    double kind = u(rng);
    if (kind < 0.2) {
        dom.lo = -2.5 + u(rng);
    } else if (kind < 0.4) {
        dom.hi = 1.5 + u(rng);
    } else if (kind < 0.6) {
        dom.lo = -1.5 - 2 * u(rng);
        dom.hi = dom.lo + 3 + 2 * u(rng);
    }
    return {dom, w, normalize(dom, w)};
}

}  // namespace needle::testing
