#include "needle/product_sim.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "needle/gauss.hpp"

namespace needle {

Perturbation parse_perturbation(const std::string& s)
{
    if (s == "hinge") return Perturbation::hinge;
    if (s == "flip") return Perturbation::flip;
    if (s == "offset") return Perturbation::offset;
    throw std::domain_error("unknown perturbation '" + s + "' (expected hinge|flip|offset)");
}

std::string to_string(Perturbation p)
{
    switch (p) {
    case Perturbation::hinge: return "hinge";
    case Perturbation::flip: return "flip";
    case Perturbation::offset: return "offset";
    }
    return "?";
}

ProductSpec uniform_spec(int fibers, double theta, Perturbation p)
{
    if (fibers < 1) throw std::domain_error("uniform_spec: need at least one fibre");
    ProductSpec s;
    s.fiber_weights.assign(fibers, 1.0 / fibers);
    s.theta = theta;
    s.perturbation = p;
    return s;
}

NeedleEnsemble build_product(const ProductSpec& spec)
{
    check_theta(spec.theta);
    const std::size_t n = spec.fiber_weights.size();
    if (n == 0) throw std::domain_error("build_product: no fibres");
    double tot = 0;
    for (double w : spec.fiber_weights) {
        if (!(w > 0)) throw std::domain_error("build_product: fibre weights must be positive");
        tot += w;
    }
    if (std::abs(tot - 1) > 1e-9) throw std::domain_error("build_product: fibre weights must sum to 1");
    if (!spec.labels.empty() && spec.labels.size() != n)
        throw std::domain_error("build_product: one label per fibre");
    if (!(spec.intensity >= 0) || !std::isfinite(spec.intensity))
        throw std::domain_error("build_product: intensity must be >= 0");
    if (!spec.kink_pos.empty() && spec.kink_pos.size() != n)
        throw std::domain_error("build_product: kink_pos needs one entry per fibre");
    if (!spec.kink_scale.empty() && spec.kink_scale.size() != n)
        throw std::domain_error("build_product: kink_scale needs one entry per fibre");

    const double t = spec.intensity;
    const double theta = spec.theta;
    const long nflip = spec.perturbation == Perturbation::flip ? std::lround(t * n) : 0;
    if (nflip > static_cast<long>(n)) throw std::domain_error("build_product: flip intensity above 1");

    std::vector<EnsembleEntry> entries;
    for (std::size_t q = 0; q < n; ++q) {
        EnsembleEntry en;
        if (spec.labels.empty()) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "f%04zu", q);
            en.label = buf;
        } else {
            en.label = spec.labels[q];
        }
        en.weight = spec.fiber_weights[q];
        ConvexWeight w = ConvexWeight::gaussian();
        if (spec.perturbation == Perturbation::hinge && t > 0) {
            double p = spec.kink_pos.empty() ? (n > 1 ? -1.5 + 3.0 * q / (n - 1) : 0.0) : spec.kink_pos[q];
            double c = spec.kink_scale.empty() ? 0.5 + 0.25 * (q % 5) : spec.kink_scale[q];
            if (!(c >= 0)) throw std::domain_error("build_product: a negative kink breaks 1-convexity");
            w = ConvexWeight::hinge(t * c, p);
        }
        en.needle = normalize(Interval{}, w);
        bool right = static_cast<long>(q) >= static_cast<long>(n) - nflip;
        if (right)
            en.A = IntervalSet::right_of(en.needle.quantile_r(theta, Side::plus));
        else
            en.A = IntervalSet::left_of(en.needle.quantile_r(theta, Side::minus));
        if (spec.perturbation == Perturbation::offset) en.offset = q % 2 == 0 ? t : -t;
        entries.push_back(std::move(en));
    }
    NeedleEnsemble e = build_ensemble(std::move(entries), theta, spec.slack);
    // offsets are the demo's point; hinge/flip ensembles are centred
    return spec.perturbation == Perturbation::offset ? e : center_guiding(e);
}

namespace {
struct RowState {
    NeedleEnsemble e;
    ClassificationReport cls;
    GlobalPoincare gp;
    MainSymdiff ms;
    MinSideMass mside;
};

template <class F>
void parallel_for(std::size_t n, int jobs, F&& f)
{
    if (jobs <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> err(n);
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs && j < static_cast<int>(n); ++j)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next++) < n;) {
                try {
                    f(i);
                } catch (...) {
                    err[i] = std::current_exception();
                }
            }
        });
    for (auto& th : pool) th.join();
    for (auto& ep : err)
        if (ep) std::rethrow_exception(ep);
}
}  // namespace

std::vector<SweepRow> sweep(const ProductSpec& spec, const std::vector<double>& intensities, const SweepOptions& opt)
{
    if (intensities.empty()) throw std::domain_error("sweep: no intensities");
    for (std::size_t i = 0; i < intensities.size(); ++i) {
        if (!(intensities[i] > 0)) throw std::domain_error("sweep: intensities must be positive");
        if (i && !(intensities[i] < intensities[i - 1]))
            throw std::domain_error("sweep: intensities must be strictly decreasing");
    }
    std::vector<RowState> st(intensities.size());
    parallel_for(intensities.size(), opt.jobs, [&](std::size_t i) {
        ProductSpec s = spec;
        s.intensity = intensities[i];
        RowState& r = st[i];
        r.e = build_product(s);
        r.cls = classify(r.e);
        r.gp = reverse_poincare_global(r.e);
        r.ms = main_symdiff(r.e);
        r.mside = min_side_mass(r.e, r.cls);
    });

    const double ex = main_exponent(opt.eps);
    CenteringOptions co;
    co.eps = opt.eps;
    CenteredReport first = centered_needles(st[0].e, st[0].cls, co);
    co.c7p = first.c7p;
    co.c8 = first.c8;
    double d0 = st[0].cls.delta_A;
    double c9 = d0 > 0 ? st[0].mside.min_side / std::pow(d0, ex) : 0.0;

    std::vector<SweepRow> rows(intensities.size());
    parallel_for(intensities.size(), opt.jobs, [&](std::size_t i) {
        const RowState& r = st[i];
        CenteredReport c = centered_needles(r.e, r.cls, co);
        SweepRow& row = rows[i];
        row.t = intensities[i];
        row.delta_A = r.cls.delta_A;
        row.main_symdiff = r.ms.value;
        row.side = r.ms.side;
        row.ratio = r.gp.ratio;
        row.min_side = r.mside.min_side;
        row.nu_long = r.cls.nu_long;
        row.nu_minus = r.cls.nu_minus;
        row.nu_plus = r.cls.nu_plus;
        row.nu_centered = c.nu_centered;
        row.mean_sq = r.gp.mean_sq_integral;
        row.max_gap = c.max_gap;
        row.slice_bound = r.mside.slice_bound;
        double scale = row.delta_A > 0 ? std::pow(row.delta_A, ex) : 0.0;
        row.symdiff_scaled = scale > 0 ? row.main_symdiff / scale : 0.0;
        row.long_ok = r.cls.long_ok;
        row.sides_ok = r.cls.sides_ok;
        row.poincare_ok = r.gp.poincare_ok;
        row.markov_ok = c.markov_ok;
        row.gap_ok = c.gap_ok;
        row.side_ok = row.min_side <= c9 * scale * (1 + 1e-9) + 1e-15;
    });
    return rows;
}

}  // namespace needle
