#include "needle/iso_bruteforce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "needle/gauss.hpp"
#include "needle/roots.hpp"

namespace needle {

namespace {

// endpoints sorted; component i is [e[2i], e[2i+1]]
double set_perimeter(const NeedleMeasure& m, const std::vector<double>& e)
{
    double p = 0;
    for (double x : e)
        if (m.domain().interior(x)) p += m.density(x);
    return p;
}

double set_mass(const NeedleMeasure& m, const std::vector<double>& e)
{
    double t = 0;
    for (std::size_t i = 0; i + 1 < e.size(); i += 2) t += m.mass(Interval{e[i], e[i + 1]});
    return t;
}

struct Candidate {
    double value = 0;
    std::vector<double> ends;
};

// move one interior endpoint so the mass is theta; best over the choice
bool adjust(const NeedleMeasure& m, double theta, std::vector<double> e, Candidate& out)
{
    const Interval& dom = m.domain();
    Interval eff = m.effective_support();
    bool found = false;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!dom.interior(e[i])) continue;
        double lo = std::max(i > 0 ? e[i - 1] : dom.lo, eff.lo);
        double hi = std::min(i + 1 < e.size() ? e[i + 1] : dom.hi, eff.hi);
        if (!(hi > lo)) continue;
        auto f = [&](double x) {
            std::vector<double> t = e;
            t[i] = x;
            return set_mass(m, t) - theta;
        };
        double flo = f(lo), fhi = f(hi);
        if ((flo > 0) == (fhi > 0) && flo != 0 && fhi != 0) continue;
        std::vector<double> t = e;
        t[i] = solve_bracketed(f, lo, hi, 1e-14 * std::max(1.0, std::abs(e[i])));
        if (std::abs(set_mass(m, t) - theta) > 1e-10) continue;
        // a collapsed component changes the family; skip it
        bool ok = true;
        for (std::size_t j = 0; j + 1 < t.size(); j += 2)
            if (!(t[j + 1] > t[j])) ok = false;
        if (!ok) continue;
        double v = set_perimeter(m, t);
        if (!found || v < out.value) {
            out = {v, t};
            found = true;
        }
    }
    return found;
}

}  // namespace

BruteforceResult iso_profile_bruteforce(const NeedleMeasure& m, double theta, const BruteforceOptions& opt)
{
    check_theta(theta);
    if (opt.max_components < 1 || opt.max_components > 3)
        throw std::domain_error("iso_profile_bruteforce: max_components must be 1..3");
    if (!(opt.grid > 0)) throw std::domain_error("iso_profile_bruteforce: grid must be positive");
    if (!(opt.mass_bin > 0)) throw std::domain_error("iso_profile_bruteforce: mass_bin must be positive");

    const Interval& dom = m.domain();
    double wlo = std::isinf(dom.lo) ? m.quantile_r(1e-10, Side::minus) : dom.lo;
    double whi = std::isinf(dom.hi) ? m.quantile_r(1e-10, Side::plus) : dom.hi;
    std::vector<double> pts;
    for (long k = static_cast<long>(std::floor(wlo / opt.grid)); k * opt.grid <= whi; ++k) {
        double x = k * opt.grid;
        if (x >= wlo && dom.interior(x)) pts.push_back(x);
    }
    if (pts.empty()) throw std::runtime_error("iso_profile_bruteforce: grid has no interior points");

    const int M = static_cast<int>(pts.size()) + 1;
    std::vector<double> cell_mass(M), cost_at(pts.size());
    for (int j = 0; j < M; ++j) {
        double lo = j == 0 ? dom.lo : pts[j - 1];
        double hi = j == M - 1 ? dom.hi : pts[j];
        cell_mass[j] = m.mass(Interval{lo, hi});
    }
    for (std::size_t i = 0; i < pts.size(); ++i) cost_at[i] = m.density(pts[i]);

    const int K = opt.max_components;
    const double w = opt.mass_bin;
    // a grid cell can carry up to grid * max density, so candidates within
    // that distance of theta are all worth adjusting
    const double tol = opt.grid * m.max_density() + 2 * w;
    const double mcap = theta + tol + w;
    const int NB = static_cast<int>(std::floor(mcap / w)) + 1;
    const int S = 2 * (K + 1) * NB;
    auto sid = [&](int in, int c, int bin) { return (in * (K + 1) + c) * NB + bin; };

    std::vector<double> cost(S, kInf), mass(S, 0.0), ncost(S), nmass(S);
    std::vector<std::int32_t> bp(static_cast<std::size_t>(M) * S, -1);

    cost[sid(0, 0, 0)] = 0.0;
    if (opt.allow_unbounded && cell_mass[0] <= mcap) {
        int b = static_cast<int>(cell_mass[0] / w);
        cost[sid(1, 1, b)] = 0.0;
        mass[sid(1, 1, b)] = cell_mass[0];
    }
    for (int j = 1; j < M; ++j) {
        std::fill(ncost.begin(), ncost.end(), kInf);
        std::int32_t* back = bp.data() + static_cast<std::size_t>(j) * S;
        bool last = j == M - 1;
        for (int in = 0; in < 2; ++in)
            for (int c = 0; c <= K; ++c)
                for (int b = 0; b < NB; ++b) {
                    int s = sid(in, c, b);
                    if (std::isinf(cost[s])) continue;
                    for (int nin = 0; nin < 2; ++nin) {
                        if (nin == 1 && last && !opt.allow_unbounded) continue;
                        int nc = c + (nin == 1 && in == 0 ? 1 : 0);
                        if (nc > K) continue;
                        double nm = mass[s] + (nin ? cell_mass[j] : 0.0);
                        if (nm > mcap) continue;
                        double nv = cost[s] + (nin != in ? cost_at[j - 1] : 0.0);
                        int t = sid(nin, nc, std::min(NB - 1, static_cast<int>(nm / w)));
                        if (nv < ncost[t]) {
                            ncost[t] = nv;
                            nmass[t] = nm;
                            back[t] = s;
                        }
                    }
                }
        std::swap(cost, ncost);
        std::swap(mass, nmass);
    }

    bool found = false;
    Candidate best{kInf, {}};
    for (int in = 0; in < 2; ++in)
        for (int c = 1; c <= K; ++c)
            for (int b = 0; b < NB; ++b) {
                int s = sid(in, c, b);
                if (std::isinf(cost[s]) || std::abs(mass[s] - theta) > tol) continue;
                // walk the back pointers to recover which cells are inside
                std::vector<char> inside(M);
                int cur = s;
                for (int j = M - 1; j >= 0; --j) {
                    inside[j] = static_cast<char>(cur / ((K + 1) * NB));
                    if (j > 0) cur = bp[static_cast<std::size_t>(j) * S + cur];
                }
                std::vector<double> ends;
                for (int j = 0; j < M; ++j) {
                    bool prev = j > 0 && inside[j - 1];
                    if (inside[j] && !prev) ends.push_back(j == 0 ? dom.lo : pts[j - 1]);
                    if (!inside[j] && prev) ends.push_back(pts[j - 1]);
                }
                if (inside[M - 1]) ends.push_back(dom.hi);
                Candidate cand;
                if (adjust(m, theta, ends, cand) && (!found || cand.value < best.value)) {
                    best = cand;
                    found = true;
                }
            }
    if (!found) throw std::runtime_error("iso_profile_bruteforce: no feasible set at this component count");

    std::vector<Interval> parts;
    for (std::size_t i = 0; i + 1 < best.ends.size(); i += 2) parts.push_back({best.ends[i], best.ends[i + 1]});
    return {best.value, IntervalSet(std::move(parts))};
}

}  // namespace needle
