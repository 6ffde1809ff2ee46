#include "needle/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "needle/gauss.hpp"

namespace needle {

namespace {

double model_profile(double theta) { return GaussianModel().profile_inf(theta); }

std::string index_label(std::size_t i)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06zu", i);
    return buf;
}

NeedleEnsemble prepare(std::vector<EnsembleEntry> entries, double theta)
{
    check_theta(theta);
    if (entries.empty()) throw std::domain_error("ensemble: no entries");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        auto& en = entries[i];
        if (en.label.empty()) en.label = index_label(i);
        if (!(en.weight > 0) || !std::isfinite(en.weight))
            throw std::domain_error("ensemble: entry " + en.label + " has a non-positive weight");
        if (!std::isfinite(en.offset)) throw std::domain_error("ensemble: entry " + en.label + " has a bad offset");
        en.A = en.A.clip(en.needle.domain());
        double mq = en.needle.mass(en.A);
        if (std::abs(mq - theta) > 1e-8) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "ensemble: entry %zu (%s) has mass_q(A_q) = %.12g, expected theta = %.12g",
                          i, en.label.c_str(), mq, theta);
            throw std::runtime_error(buf);
        }
    }
    std::stable_sort(entries.begin(), entries.end(),
                     [](const EnsembleEntry& a, const EnsembleEntry& b) { return a.label < b.label; });
    for (std::size_t i = 1; i < entries.size(); ++i)
        if (entries[i].label == entries[i - 1].label)
            throw std::domain_error("ensemble: duplicate label " + entries[i].label);
    // summed after sorting so the result does not depend on input order
    double total = 0;
    for (const auto& en : entries) total += en.weight;
    for (auto& en : entries) en.weight /= total;
    NeedleEnsemble e;
    e.entries = std::move(entries);
    e.theta = theta;
    return e;
}

double nu_perimeter(const NeedleEnsemble& e)
{
    double p = 0;
    for (const auto& en : e.entries) p += en.weight * en.needle.perimeter(en.A);
    return p;
}

}  // namespace

double main_exponent(double eps) { return (1 - eps) / (9 - 3 * eps); }

NeedleEnsemble build_ensemble(std::vector<EnsembleEntry> entries, double theta, double slack)
{
    if (!(slack >= 0)) throw std::domain_error("ensemble: slack must be nonnegative");
    NeedleEnsemble e = prepare(std::move(entries), theta);
    e.slack = slack;
    e.global_perimeter = nu_perimeter(e) + slack;
    return e;
}

NeedleEnsemble build_ensemble_with_perimeter(std::vector<EnsembleEntry> entries, double theta,
                                             double global_perimeter)
{
    NeedleEnsemble e = prepare(std::move(entries), theta);
    double p = nu_perimeter(e);
    if (global_perimeter < p - 1e-9)
        throw std::domain_error("ensemble: global perimeter below the nu-integral of needle perimeters");
    e.global_perimeter = global_perimeter;
    e.slack = std::max(0.0, global_perimeter - p);
    return e;
}

DeficitDecomposition deficit_decomposition(const NeedleEnsemble& e)
{
    double I = model_profile(e.theta);
    DeficitDecomposition d;
    d.delta_A = e.global_perimeter - I;
    d.nu_integral = 0;
    for (const auto& en : e.entries) {
        double v = en.needle.perimeter(en.A) - I;
        d.per_needle.push_back(v);
        d.nu_integral += en.weight * v;
    }
    return d;
}

ClassificationReport classify(const NeedleEnsemble& e)
{
    DeficitDecomposition d = deficit_decomposition(e);
    ClassificationReport c;
    c.delta_A = d.delta_A;
    double rd = std::sqrt(std::max(d.delta_A, 0.0));
    // at delta_A = 0 the thresholds collapse; every needle is long and a side
    // needs an exact (to 1e-9) match
    bool degenerate = d.delta_A <= 1e-12;
    double side_tol = degenerate ? 1e-9 : rd;
    for (std::size_t q = 0; q < e.entries.size(); ++q) {
        const auto& en = e.entries[q];
        const auto& m = en.needle;
        const Interval& dom = m.domain();
        double sm = m.mass(set_symdiff(en.A, IntervalSet{{dom.lo, m.quantile_r(e.theta, Side::minus)}}));
        double sp = m.mass(set_symdiff(en.A, IntervalSet{{m.quantile_r(e.theta, Side::plus), dom.hi}}));
        c.symdiff_minus.push_back(sm);
        c.symdiff_plus.push_back(sp);
        bool is_long = degenerate || d.per_needle[q] < rd;
        if (!is_long) continue;
        c.Q_long.push_back(q);
        c.nu_long += en.weight;
        bool lm = sm <= side_tol, lp = sp <= side_tol;
        if (lm) {
            c.Q_minus.push_back(q);
            c.nu_minus += en.weight;
        }
        if (lp) {
            c.Q_plus.push_back(q);
            c.nu_plus += en.weight;
        }
        if (!lm && !lp) c.nu_unaligned += en.weight;
    }
    c.long_ok = c.nu_long >= 1 - rd - 1e-12;
    c.sides_ok = c.nu_unaligned <= rd + 1e-12;
    return c;
}

double guiding_mean(const NeedleEnsemble& e)
{
    double mu = 0;
    for (const auto& en : e.entries) mu += en.weight * (en.needle.mean() + en.offset);
    return mu;
}

NeedleEnsemble center_guiding(const NeedleEnsemble& e)
{
    NeedleEnsemble out = e;
    double mu = guiding_mean(e);
    for (auto& en : out.entries) en.offset -= mu;
    return out;
}

GlobalPoincare reverse_poincare_global(const NeedleEnsemble& e)
{
    double mu = 0, second = 0, msq = 0, within = 0;
    for (const auto& en : e.entries) {
        double mean = en.needle.mean() + en.offset;
        double var = en.needle.variance_affine(1, 0).variance;
        mu += en.weight * mean;
        second += en.weight * (var + mean * mean);
        msq += en.weight * mean * mean;
        within += en.weight * var;
    }
    GlobalPoincare g;
    g.energy = 0;
    for (const auto& en : e.entries) g.energy += en.weight * en.needle.variance_affine(1, 0).energy;
    g.variance = second - mu * mu;
    g.ratio = g.variance / g.energy;
    g.mean_sq_integral = msq;
    g.within_variance = within;
    g.poincare_ok = g.ratio <= 1 + 1e-9;
    return g;
}

CenteredReport centered_needles(const NeedleEnsemble& e, const ClassificationReport& cls,
                                const CenteringOptions& opt)
{
    if (!(opt.eps > 0 && opt.eps < 1)) throw std::domain_error("centered_needles: eps must lie in (0,1)");
    CenteredReport r;
    double eps = opt.eps;
    double delta = cls.delta_A;
    r.exponent_budget = opt.exponent_budget.value_or(2 * (1 - eps) / (3 * (3 - eps)));
    std::vector<double> means;
    for (const auto& en : e.entries) means.push_back(en.needle.mean() + en.offset);

    if (delta <= 1e-12) {
        for (std::size_t q = 0; q < e.entries.size(); ++q) r.Q_centered.push_back(q);
    } else {
        GlobalPoincare g = reverse_poincare_global(e);
        double var_budget = std::pow(delta, (1 - eps) / (3 - eps));
        r.c7p = opt.c7p.value_or(std::max(1 - g.ratio, g.mean_sq_integral) / var_budget);
        r.threshold = r.c7p * std::pow(delta, r.exponent_budget);
        r.nu_centered = 0;
        for (std::size_t q = 0; q < e.entries.size(); ++q)
            if (means[q] * means[q] <= r.threshold * (1 + 1e-12)) {
                r.Q_centered.push_back(q);
                r.nu_centered += e.entries[q].weight;
            }
        r.markov_floor = 1 - std::pow(delta, main_exponent(eps));
        r.markov_ok = r.nu_centered >= r.markov_floor - 1e-12;
    }

    double at = std_quantile(e.theta), a1t = std_quantile(1 - e.theta);
    for (std::size_t q : r.Q_centered) {
        if (!std::binary_search(cls.Q_long.begin(), cls.Q_long.end(), q)) continue;
        const auto& en = e.entries[q];
        double gm = std::abs(at - (en.needle.quantile_r(e.theta, Side::minus) + en.offset));
        double gp = std::abs(a1t - (en.needle.quantile_r(e.theta, Side::plus) + en.offset));
        r.max_gap = std::max({r.max_gap, gm, gp});
    }
    r.gap_scale = delta > 0 ? std::pow(delta, main_exponent(eps)) : 0.0;
    if (r.gap_scale > 0) {
        r.c8 = opt.c8.value_or(r.max_gap / r.gap_scale);
        r.gap_ok = r.max_gap <= r.c8 * r.gap_scale * (1 + 1e-9) + 1e-15;
    }
    return r;
}

MainSymdiff main_symdiff(const NeedleEnsemble& e)
{
    if (std::abs(e.theta - 0.5) < 1e-15)
        throw std::domain_error("main_symdiff: theta = 1/2 is not covered by the quantitative estimate");
    double at = std_quantile(e.theta), a1t = std_quantile(1 - e.theta);
    double vm = 0, vp = 0;
    for (const auto& en : e.entries) {
        const Interval& dom = en.needle.domain();
        IntervalSet hm{{dom.lo, at - en.offset}};
        IntervalSet hp{{a1t - en.offset, dom.hi}};
        vm += en.weight * en.needle.mass(set_symdiff(en.A, hm.clip(dom)));
        vp += en.weight * en.needle.mass(set_symdiff(en.A, hp.clip(dom)));
    }
    if (vm <= vp) return {Side::minus, vm, vm, vp};
    return {Side::plus, vp, vm, vp};
}

MinSideMass min_side_mass(const NeedleEnsemble& e, const ClassificationReport& cls)
{
    if (std::abs(e.theta - 0.5) < 1e-15)
        throw std::domain_error("min_side_mass: theta = 1/2 is not covered (the side constant blows up)");
    double at = std_quantile(e.theta), a1t = std_quantile(1 - e.theta);
    MinSideMass r;
    r.min_side = std::min(cls.nu_minus, cls.nu_plus);
    r.r1 = (2 * at + a1t) / 3;
    r.r2 = (at + 2 * a1t) / 3;
    double lo = std::min(r.r1, r.r2), hi = std::max(r.r1, r.r2);
    double slice = 0;
    for (const auto& en : e.entries)
        slice += en.weight * en.needle.mass(set_intersection(en.A, IntervalSet{{lo - en.offset, hi - en.offset}}));
    r.slice_bound = slice / (hi - lo);
    return r;
}

NeedleEnsemble complement_ensemble(const NeedleEnsemble& e)
{
    NeedleEnsemble out = e;
    out.theta = 1 - e.theta;
    for (auto& en : out.entries) en.A = en.A.complement_within(en.needle.domain());
    return out;
}

LsiWitness reverse_lsi_witness_global(const NeedleEnsemble& e, double sigma, double eps_amp, double lambda)
{
    if (!(sigma > 0)) throw std::domain_error("reverse_lsi_witness_global: sigma must be positive");
    if (!(lambda > 0)) throw std::domain_error("reverse_lsi_witness_global: lambda must be positive");
    double mean = 0;
    for (const auto& en : e.entries) {
        double off = en.offset;
        mean += en.weight * en.needle.integrate([&](double x) { return std::clamp(x + off, -sigma, sigma); },
                                                -kInf, kInf, {-sigma - off, sigma - off});
    }
    double hsup = 0;
    for (const auto& en : e.entries) {
        const Interval& d = en.needle.domain();
        for (double x : {d.lo, d.hi}) {
            double c = std::isinf(x) ? (x > 0 ? sigma : -sigma) : std::clamp(x + en.offset, -sigma, sigma);
            hsup = std::max(hsup, std::abs(c - mean));
        }
    }
    if (hsup > 0 && !(std::abs(eps_amp) < 1 / (2 * hsup)))
        throw std::domain_error("reverse_lsi_witness_global: |eps_amp| must be below 1/(2 sup|h|)");
    if (eps_amp == 0) return {0.0, 0.0, true};
    double lhs = 0, fish = 0;
    for (const auto& en : e.entries) {
        double off = en.offset;
        std::vector<double> cuts{-sigma - off, sigma - off};
        auto f = [&](double x) { return 1 + eps_amp * (std::clamp(x + off, -sigma, sigma) - mean); };
        lhs += en.weight * en.needle.integrate([&](double x) { double v = f(x); return v * std::log(v); },
                                               -kInf, kInf, cuts);
        fish += en.weight * en.needle.integrate(
                                [&](double x) {
                                    if (std::abs(x + off) >= sigma) return 0.0;
                                    return eps_amp * eps_amp / f(x);
                                },
                                -kInf, kInf, cuts);
    }
    double k = eps_amp * hsup;
    double rhs = (1 - k) / (1 + k) / (2 * lambda) * fish;
    return {lhs, rhs, lhs >= rhs - 1e-10};
}

}  // namespace needle
