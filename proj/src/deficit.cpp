#include "needle/deficit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "needle/gauss.hpp"
#include "needle/quadrature.hpp"
#include "needle/roots.hpp"

namespace needle {

Orientation orient_detail(const NeedleMeasure& m, double theta)
{
    check_theta(theta);
    HalflineProfile hp = m.iso_profile_halfline(theta);
    bool flip = hp.side == Side::plus;
    NeedleMeasure r = flip ? m.reflected() : m;
    double shift = std_quantile(theta) - r.quantile_r(theta, Side::minus);
    return {r.translated(shift), flip, shift};
}

NeedleMeasure orient_for_theta(const NeedleMeasure& m, double theta) { return orient_detail(m, theta).measure; }

double c3_bound(double theta)
{
    check_theta(theta);
    double a = std_quantile(theta);
    double e = std::exp(0.5 * a * a);
    double up = 2 * std::numbers::pi * (1 - theta) * e / (1 / e - kSqrt2Pi * a * (1 - theta));
    double dn = 2 * std::numbers::pi * theta * e / (1 / e + kSqrt2Pi * a * theta);
    return std::max(up, dn);
}

CutPoints cut_points(double theta, double delta, double slope)
{
    check_theta(theta);
    if (!(delta >= 0)) throw std::domain_error("cut_points: delta must be >= 0");
    if (delta == 0) return {kInf, -kInf};
    double a = std_quantile(theta);
    double s = slope;
    double scale = (std_pdf(a) + delta) * std::exp(0.5 * s * s) * kSqrt2Pi;
    double rd = std::sqrt(delta);
    CutPoints out{kInf, -kInf};

    double target_T = 1 - theta - rd;
    if (target_T <= 0) {
        out.T = a;
    } else if (scale * std_sf(s) > target_T) {
        auto g = [&](double T) { return scale * std_mass(s, T - a + s) - target_T; };
        double hi = 1;
        while (g(a + hi) < 0) hi *= 2;
        out.T = solve_bracketed(g, a, a + hi, 1e-14 * std::max(1.0, std::abs(a) + hi));
    }

    double target_S = theta - rd;
    if (target_S <= 0) {
        out.S = a;
    } else if (scale * std_cdf(s) > target_S) {
        auto g = [&](double S) { return scale * std_mass(S - a + s, s) - target_S; };
        double lo = 1;
        while (g(a - lo) < 0) lo *= 2;
        out.S = solve_bracketed([&](double S) { return -g(S); }, a - lo, a,
                                1e-14 * std::max(1.0, std::abs(a) + lo));
    }
    return out;
}

DeficitReport deficit(const NeedleMeasure& m, double theta, const DeficitOptions& opt)
{
    check_theta(theta);
    DeficitReport r;
    r.theta = theta;
    r.a_theta = std_quantile(theta);
    const double a = r.a_theta;
    if (!m.domain().interior(a) || std::abs(m.cdf(a) - theta) > 1e-9)
        throw std::domain_error("deficit: measure is not oriented for theta (mass left of a_theta != theta)");

    double d = m.density(a) - std_pdf(a);
    if (std::abs(d) <= 1e-13) d = 0.0;
    r.delta = d;
    if (d < -1e-10) {
        r.valid = false;
        r.flags.push_back("negative deficit");
    }
    double dd = std::max(d, 0.0);
    r.slope = m.weight().eval(a).right_slope;
    r.alpha = r.slope - a;
    r.in_regime = dd <= opt.regime_factor * std::pow(std::min(theta, 1 - theta), 3);
    if (!r.in_regime) r.flags.push_back("out of regime");

    CutPoints c = cut_points(theta, dd, r.slope);
    r.T = c.T;
    r.S = c.S;
    if (dd > 0 && std::isinf(r.T)) {
        r.valid = false;
        r.flags.push_back("T has no finite solution");
    }
    if (dd > 0 && std::isinf(r.S)) {
        r.valid = false;
        r.flags.push_back("S has no finite solution");
    }
    r.tail_T = std_sf(r.T);
    r.tail_S = std_cdf(r.S);
    if (opt.c4) {
        double budget = std::sqrt(dd) + *opt.c4 * dd;
        if (r.tail_T > budget) {
            r.valid = false;
            r.flags.push_back("tail_T over budget");
        }
        if (r.tail_S > budget) {
            r.valid = false;
            r.flags.push_back("tail_S over budget");
        }
    }
    return r;
}

double tail_ratio_T(const DeficitReport& r)
{
    return r.delta > 0 ? (r.tail_T - std::sqrt(r.delta)) / r.delta : 0.0;
}

double tail_ratio_S(const DeficitReport& r)
{
    return r.delta > 0 ? (r.tail_S - std::sqrt(r.delta)) / r.delta : 0.0;
}

std::vector<double> default_envelope_grid(const NeedleMeasure& m, const DeficitReport& r, double step)
{
    Interval e = m.effective_support();
    std::vector<double> g;
    for (long k = 0;; ++k) {
        double x = e.lo + k * step;
        if (x > e.hi) break;
        g.push_back(x);
    }
    g.push_back(e.hi);
    for (double x : {r.a_theta, r.S, r.T})
        if (std::isfinite(x) && e.contains(x)) g.push_back(x);
    for (double x : m.breakpoints()) g.push_back(x);
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

EnvelopeMargins envelope_check(const NeedleMeasure& m, double theta, const DeficitReport& r,
                               const std::vector<double>& grid)
{
    if (r.theta != theta) throw std::domain_error("envelope_check: report is for a different theta");
    if (r.delta <= 0) return {0.0, 0.0};
    const double a = r.a_theta;
    const double lift = std::exp(0.5 * a * a + kLogSqrt2Pi) * r.delta;
    const double rd = std::sqrt(r.delta);
    double lower = kInf, upper = -kInf;
    for (double x : grid) {
        if (!m.domain().contains(x) || std::isinf(x)) continue;
        double rho = m.psi(x) - 0.5 * x * x - kLogSqrt2Pi;
        double v = rho - r.alpha * (x - a);
        lower = std::min(lower, v + lift);
        if (x >= r.S && x <= r.T) upper = std::max(upper, v / rd);
    }
    if (std::isinf(lower)) lower = 0.0;
    if (std::isinf(upper)) upper = 0.0;
    return {lower, upper};
}

SymdiffBound symdiff_bound(const NeedleMeasure& m, double theta, const IntervalSet& A)
{
    check_theta(theta);
    IntervalSet a = A.clip(m.domain());
    if (std::abs(m.mass(a) - theta) > 1e-9) throw std::domain_error("symdiff_bound: mass(A) != theta");
    const Interval& dom = m.domain();
    double def = m.perimeter(a) - m.iso_profile_halfline(theta).value;
    if (std::abs(def) <= 1e-13) def = 0.0;
    IntervalSet hm{{dom.lo, m.quantile_r(theta, Side::minus)}};
    IntervalSet hp{{m.quantile_r(theta, Side::plus), dom.hi}};
    double sd = std::min(m.mass(set_symdiff(a, hm)), m.mass(set_symdiff(a, hp)));
    // slivers left by two independent quantile solves
    if (sd <= 1e-14) sd = 0.0;
    double ratio = sd > 0 ? def / sd : kInf;
    return {def, sd, ratio};
}

double reverse_poincare_needle(const NeedleMeasure& m, double theta, const DeficitReport& r)
{
    (void)theta;
    if (!r.valid) throw std::domain_error("reverse_poincare_needle: invalid deficit report");
    VarianceEnergy ve = m.variance_affine(1.0, 0.0);
    return ve.variance / ve.energy;
}

LsiWitness reverse_lsi_witness(const NeedleMeasure& m, double a, double b, double sigma, double eps_amp,
                               double lambda)
{
    if (!(sigma > 0)) throw std::domain_error("reverse_lsi_witness: sigma must be positive");
    if (!(lambda > 0)) throw std::domain_error("reverse_lsi_witness: lambda must be positive");
    auto clamp_u = [&](double x) { return std::clamp(a * x + b, -sigma, sigma); };
    std::vector<double> cuts;
    if (a != 0) cuts = {(-sigma - b) / a, (sigma - b) / a};
    double mean = m.integrate(clamp_u, -kInf, kInf, cuts);
    // range of the clamped u over the domain
    const Interval& dom = m.domain();
    auto cl = [&](double x) {
        if (std::isinf(x)) {
            if (a == 0) return std::clamp(b, -sigma, sigma);
            return (a > 0) == (x > 0) ? sigma : -sigma;
        }
        return clamp_u(x);
    };
    double c1 = cl(dom.lo), c2 = cl(dom.hi);
    double hsup = std::max(std::abs(c1 - mean), std::abs(c2 - mean));
    if (hsup > 0 && !(std::abs(eps_amp) < 1 / (2 * hsup)))
        throw std::domain_error("reverse_lsi_witness: |eps_amp| must be below 1/(2 sup|h|)");
    if (eps_amp == 0 || hsup == 0) return {0.0, 0.0, true};

    auto f = [&](double x) { return 1 + eps_amp * (clamp_u(x) - mean); };
    double lhs = m.integrate([&](double x) { double v = f(x); return v * std::log(v); }, -kInf, kInf, cuts);
    double fish = m.integrate(
        [&](double x) {
            double u = a * x + b;
            if (std::abs(u) >= sigma) return 0.0;
            return eps_amp * eps_amp * a * a / f(x);
        },
        -kInf, kInf, cuts);
    double k = eps_amp * hsup;
    double rhs = (1 - k) / (1 + k) / (2 * lambda) * fish;
    return {lhs, rhs, lhs >= rhs - 1e-10};
}

TalagrandWitness talagrand_witness(const NeedleMeasure& m, const std::function<double(double)>& mu_density,
                                   double lambda)
{
    if (!(lambda > 0)) throw std::domain_error("talagrand_witness: lambda must be positive");
    const Interval& dom = m.domain();
    Interval eff = m.effective_support();
    double lo = std::max(dom.lo, eff.lo - 10), hi = std::min(dom.hi, eff.hi + 10);

    // cumulative mu on panels of width <= 0.25
    int n = std::max(1, static_cast<int>(std::ceil((hi - lo) / 0.25)));
    double h = (hi - lo) / n;
    std::vector<double> edge(n + 1), cum(n + 1, 0.0);
    for (int i = 0; i <= n; ++i) edge[i] = lo + i * h;
    for (int i = 0; i < n; ++i) cum[i + 1] = cum[i] + integrate(mu_density, edge[i], edge[i + 1]);
    double total = cum[n];
    if (std::abs(total - 1) > 1e-8) throw std::domain_error("talagrand_witness: mu is not normalized");

    auto F = [&](double x) {
        int i = std::clamp(static_cast<int>((x - lo) / h), 0, n - 1);
        return cum[i] + integrate(mu_density, edge[i], x);
    };
    auto Finv = [&](double u) {
        if (u <= 0) return lo;
        if (u >= total) return hi;
        int i = static_cast<int>(std::upper_bound(cum.begin(), cum.end(), u) - cum.begin()) - 1;
        i = std::clamp(i, 0, n - 1);
        if (cum[i + 1] <= cum[i]) return edge[i];
        return solve_bracketed([&](double x) { return F(x) - u; }, edge[i], edge[i + 1], 1e-14);
    };
    double w2 = m.integrate([&](double x) {
        double t = Finv(m.cdf(x));
        return (t - x) * (t - x);
    });
    double ent = integrate(
        [&](double x) {
            double p = mu_density(x);
            double q = m.density(x);
            if (p <= 0) return 0.0;
            if (q <= 0) return kInf;
            return p * std::log(p / q);
        },
        lo, hi);
    if (!std::isfinite(ent)) throw std::domain_error("talagrand_witness: mu is not absolutely continuous");
    return {w2, ent, w2 >= 2 / lambda * ent - 1e-8};
}

}  // namespace needle

namespace needle {

std::vector<FamilyRow> hinge_family(double theta, const std::vector<double>& t_list, double kink_pos,
                                    const DeficitOptions& opt)
{
    std::vector<FamilyRow> rows;
    for (double t : t_list) {
        Orientation o = orient_detail(normalize(Interval{}, ConvexWeight::hinge(t, kink_pos)), theta);
        FamilyRow r{t, o.reflected, deficit(o.measure, theta, opt), {0, 0}, 1.0};
        r.margins = envelope_check(o.measure, theta, r.report, default_envelope_grid(o.measure, r.report));
        VarianceEnergy ve = o.measure.variance_affine(1, 0);
        r.rp_ratio = ve.variance / ve.energy;
        rows.push_back(std::move(r));
    }
    return rows;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw std::domain_error("loglog_slope: need >= 2 paired points");
    double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0 && y[i] > 0)) throw std::domain_error("loglog_slope: values must be positive");
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace needle
