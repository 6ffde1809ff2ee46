#pragma once

#include <functional>
#include <vector>

#include "needle/interval_set.hpp"
#include "needle/weight.hpp"

namespace needle {

enum class Side { minus, plus };

struct Moments {
    double m0;
    double m1;
    double m2;
};

struct VarianceEnergy {
    double variance;
    double energy;
};

struct HalflineProfile {
    double value;
    IntervalSet witness;
    Side side;
};

// e^{-psi} dx restricted to a closed interval, normalized to total mass 1.
// Masses and moments are exact per linear piece of the correction via the
// Gaussian cdf; only user-supplied integrands go through quadrature.
class NeedleMeasure {
public:
    NeedleMeasure() = default;

    const Interval& domain() const { return dom_; }
    const ConvexWeight& weight() const { return w_; }

    double psi(double x) const { return w_(x); }
    double density(double x) const;
    double total_mass() const;
    double cdf(double x) const;  // mass of domain ∩ (-inf, x]
    double sf(double x) const;   // mass of domain ∩ [x, inf)
    double mass(const Interval& c) const;
    double mass(const IntervalSet& A) const;
    Moments moments() const;
    double mean() const;

    double quantile_r(double theta, Side side) const;
    double perimeter(const IntervalSet& A) const;
    double minkowski_content(const IntervalSet& A, const std::vector<double>& eps_seq) const;
    HalflineProfile iso_profile_halfline(double theta) const;
    VarianceEnergy variance_affine(double a, double b) const;

    // knots of psi inside the domain, sorted
    std::vector<double> breakpoints() const;
    // the mass outside [lo, hi] is far below 1e-16
    Interval effective_support() const { return eff_; }
    // quadrature of g * density over domain ∩ [lo, hi], split at knots
    double integrate(const std::function<double(double)>& g, double lo = -kInf, double hi = kInf,
                     const std::vector<double>& extra_breaks = {}) const;
    double max_density() const;

    NeedleMeasure reflected() const;
    NeedleMeasure translated(double c) const;

    friend NeedleMeasure normalize(const Interval& domain, const ConvexWeight& w);

private:
    struct Seg {
        double lo, hi, s, b;
    };
    double seg_mass(const Seg& g, double lo, double hi) const;
    void build();

    Interval dom_;
    ConvexWeight w_;
    std::vector<Seg> segs_;
    Interval eff_;
};

NeedleMeasure normalize(const Interval& domain, const ConvexWeight& w);
NeedleMeasure gaussian_needle();

}  // namespace needle
