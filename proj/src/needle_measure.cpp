#include "needle/needle_measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "needle/gauss.hpp"
#include "needle/quadrature.hpp"

namespace needle {

namespace {
double xphi(double y) { return std::isinf(y) ? 0.0 : y * std_pdf(y); }
double phi_or0(double y) { return std::isinf(y) ? 0.0 : std_pdf(y); }
}  // namespace

NeedleMeasure normalize(const Interval& domain, const ConvexWeight& w)
{
    if (std::isnan(domain.lo) || std::isnan(domain.hi) || !(domain.hi > domain.lo))
        throw std::domain_error("normalize: domain must have positive length");
    NeedleMeasure m;
    m.dom_ = domain;
    m.w_ = w;
    m.build();
    double z = m.total_mass();
    if (!(z > 0) || !std::isfinite(z)) throw std::runtime_error("normalize: mass is not finite and positive");
    m.w_ = w.with_offset(w.offset() + std::log(z));
    m.build();
    if (std::abs(m.total_mass() - 1) > 1e-9) throw std::runtime_error("normalize: renormalized mass off by > 1e-9");
    // effective support needs quantiles, so it is computed last
    m.eff_ = m.dom_;
    if (std::isinf(m.dom_.lo)) m.eff_.lo = m.quantile_r(1e-16, Side::minus) - 2.0;
    if (std::isinf(m.dom_.hi)) m.eff_.hi = m.quantile_r(1e-16, Side::plus) + 2.0;
    return m;
}

NeedleMeasure gaussian_needle() { return normalize(Interval{}, ConvexWeight::gaussian()); }

void NeedleMeasure::build()
{
    segs_.clear();
    for (const auto& p : w_.pieces()) {
        double lo = std::max(p.lo, dom_.lo), hi = std::min(p.hi, dom_.hi);
        if (hi > lo) segs_.push_back({lo, hi, p.slope, p.intercept});
    }
    eff_ = dom_;
}

double NeedleMeasure::seg_mass(const Seg& g, double lo, double hi) const
{
    lo = std::max(lo, g.lo);
    hi = std::min(hi, g.hi);
    if (!(hi > lo)) return 0.0;
    return std::exp(0.5 * g.s * g.s - g.b) * kSqrt2Pi * std_mass(lo + g.s, hi + g.s);
}

double NeedleMeasure::density(double x) const
{
    if (!dom_.contains(x) || std::isinf(x)) return 0.0;
    return std::exp(-w_(x));
}

double NeedleMeasure::total_mass() const { return mass(dom_); }

double NeedleMeasure::mass(const Interval& c) const
{
    double t = 0.0;
    for (const auto& g : segs_) t += seg_mass(g, c.lo, c.hi);
    return t;
}

double NeedleMeasure::mass(const IntervalSet& A) const
{
    double t = 0.0;
    for (const auto& c : A.components()) t += mass(c);
    return t;
}

double NeedleMeasure::cdf(double x) const { return mass(Interval{-kInf, x}); }

double NeedleMeasure::sf(double x) const { return mass(Interval{x, kInf}); }

Moments NeedleMeasure::moments() const
{
    Moments r{0, 0, 0};
    for (const auto& g : segs_) {
        double s = g.s;
        double l = g.lo + s, h = g.hi + s;
        double c = std::exp(0.5 * s * s - g.b) * kSqrt2Pi;
        double m0 = std_mass(l, h);
        double m1 = phi_or0(l) - phi_or0(h);
        double m2 = m0 + xphi(l) - xphi(h);
        r.m0 += c * m0;
        r.m1 += c * (m1 - s * m0);
        r.m2 += c * (m2 - 2 * s * m1 + s * s * m0);
    }
    return r;
}

double NeedleMeasure::mean() const
{
    Moments mo = moments();
    return mo.m1 / mo.m0;
}

double NeedleMeasure::quantile_r(double theta, Side side) const
{
    if (!(theta > 0 && theta < 1)) throw std::domain_error("quantile_r: theta outside (0,1)");
    // g increasing in x in both cases
    auto g = [&](double x) { return side == Side::minus ? cdf(x) - theta : theta - sf(x); };
    double centre = std::clamp(0.0, dom_.lo, dom_.hi);
    if (!segs_.empty()) {
        Moments mo = moments();
        if (mo.m0 > 0 && std::isfinite(mo.m1)) centre = std::clamp(mo.m1 / mo.m0, dom_.lo, dom_.hi);
    }
    double lo = dom_.lo, hi = dom_.hi;
    for (double step = 1; std::isinf(lo); step *= 2)
        if (g(centre - step) < 0) lo = centre - step;
    for (double step = 1; std::isinf(hi); step *= 2)
        if (g(centre + step) > 0) hi = centre + step;
    for (int it = 0; it < 400; ++it) {
        double mid = 0.5 * (lo + hi);
        if (hi - lo <= 1e-13 * std::max(1.0, std::abs(mid))) break;
        if (g(mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    double r = 0.5 * (lo + hi);
    double d = density(r);
    if (d > 0) {
        double nr = r - g(r) / d;
        if (dom_.contains(nr) && std::abs(nr - r) < 1e-9 * std::max(1.0, std::abs(r))) r = nr;
    }
    return r;
}

double NeedleMeasure::perimeter(const IntervalSet& A) const
{
    double p = 0.0;
    for (double x : A.clip(dom_).boundary_points())
        if (dom_.interior(x)) p += density(x);
    return p;
}

double NeedleMeasure::minkowski_content(const IntervalSet& A, const std::vector<double>& eps_seq) const
{
    if (eps_seq.empty()) throw std::domain_error("minkowski_content: empty epsilon sequence");
    IntervalSet a = A.clip(dom_);
    std::vector<double> q;
    for (double e : eps_seq) {
        if (!(e > 0)) throw std::domain_error("minkowski_content: epsilons must be positive");
        IntervalSet ring = set_difference(a.dilate(e).clip(dom_), a);
        q.push_back(mass(ring) / e);
    }
    std::size_t n = q.size();
    if (n == 1) return q[0];
    // q(e) = P + c e + O(e^2): remove the linear term using the last two points
    double e1 = eps_seq[n - 2], e2 = eps_seq[n - 1];
    return std::max(0.0, q[n - 1] + (q[n - 1] - q[n - 2]) * e2 / (e1 - e2));
}

HalflineProfile NeedleMeasure::iso_profile_halfline(double theta) const
{
    check_theta(theta);
    double rm = quantile_r(theta, Side::minus);
    double rp = quantile_r(theta, Side::plus);
    double dm = density(rm), dp = density(rp);
    bool tie = std::abs(dm - dp) <= 1e-13 * std::max(dm, dp);
    if (tie || dm <= dp) return {dm, IntervalSet{{dom_.lo, rm}}, Side::minus};
    return {dp, IntervalSet{{rp, dom_.hi}}, Side::plus};
}

VarianceEnergy NeedleMeasure::variance_affine(double a, double b) const
{
    Moments mo = moments();
    double ex = mo.m1 / mo.m0, ex2 = mo.m2 / mo.m0;
    double varx = std::max(0.0, ex2 - ex * ex);
    (void)b;  // variance is shift invariant
    return {a * a * varx, a * a * mo.m0};
}

std::vector<double> NeedleMeasure::breakpoints() const
{
    std::vector<double> out;
    for (const auto& k : w_.knots())
        if (dom_.interior(k.pos)) out.push_back(k.pos);
    return out;
}

double NeedleMeasure::integrate(const std::function<double(double)>& g, double lo, double hi,
                                const std::vector<double>& extra_breaks) const
{
    lo = std::max({lo, dom_.lo, eff_.lo});
    hi = std::min({hi, dom_.hi, eff_.hi});
    if (!(hi > lo)) return 0.0;
    std::vector<double> cuts{lo};
    for (double x : breakpoints())
        if (x > lo && x < hi) cuts.push_back(x);
    for (double x : extra_breaks)
        if (x > lo && x < hi) cuts.push_back(x);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    double t = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        t += needle::integrate([&](double x) { return g(x) * std::exp(-w_(x)); }, cuts[i], cuts[i + 1]);
    return t;
}

double NeedleMeasure::max_density() const
{
    double best = kInf;
    for (const auto& g : segs_) {
        double x = std::clamp(-g.s, g.lo, g.hi);
        if (std::isinf(x)) continue;
        best = std::min(best, 0.5 * x * x + g.s * x + g.b);
    }
    return std::exp(-best);
}

NeedleMeasure NeedleMeasure::reflected() const
{
    NeedleMeasure m;
    m.dom_ = {-dom_.hi, -dom_.lo};
    m.w_ = w_.reflected();
    m.build();
    m.eff_ = {-eff_.hi, -eff_.lo};
    return m;
}

NeedleMeasure NeedleMeasure::translated(double c) const
{
    NeedleMeasure m;
    m.dom_ = {dom_.lo + c, dom_.hi + c};
    m.w_ = w_.translated(c);
    m.build();
    m.eff_ = {eff_.lo + c, eff_.hi + c};
    return m;
}

}  // namespace needle
