#pragma once

#include "needle/needle_measure.hpp"

namespace needle {

struct BruteforceOptions {
    int max_components = 3;
    double grid = 0.02;
    // width of the mass bins used by the dynamic program
    double mass_bin = 5e-4;
    // false: components may not touch the ends of the domain
    bool allow_unbounded = true;
};

struct BruteforceResult {
    double value;
    IntervalSet witness;
};

// Minimum perimeter over unions of <= k intervals with grid endpoints, one
// endpoint then moved so the mass is exactly theta.  Exhaustive over the
// grid family up to the mass binning of the dynamic program.
BruteforceResult iso_profile_bruteforce(const NeedleMeasure& m, double theta, const BruteforceOptions& opt = {});

}  // namespace needle
