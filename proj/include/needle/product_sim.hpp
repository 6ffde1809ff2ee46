#pragma once

#include <string>
#include <vector>

#include "needle/ensemble.hpp"

namespace needle {

enum class Perturbation { hinge, flip, offset };

Perturbation parse_perturbation(const std::string& s);
std::string to_string(Perturbation p);

// R x Sigma with Sigma a finite weighted set of fibres.
struct ProductSpec {
    std::vector<double> fiber_weights;  // sums to 1
    std::vector<std::string> labels;    // optional; "f0000", ... by default
    double theta = 0.3;
    Perturbation perturbation = Perturbation::hinge;
    double intensity = 0.0;
    // hinge only; empty means the default pattern
    std::vector<double> kink_pos;
    std::vector<double> kink_scale;
    double slack = 0.0;
};

ProductSpec uniform_spec(int fibers, double theta, Perturbation p);

// one needle per fibre; the result is centred
NeedleEnsemble build_product(const ProductSpec& spec);

struct SweepRow {
    double t = 0;
    double delta_A = 0;
    double main_symdiff = 0;
    Side side = Side::minus;
    double ratio = 1;
    double min_side = 0;
    double nu_long = 1, nu_minus = 0, nu_plus = 0, nu_centered = 1;
    double mean_sq = 0;
    double max_gap = 0;
    double slice_bound = 0;
    double symdiff_scaled = 0;  // main_symdiff / delta^{(1-eps)/(9-3eps)}
    bool long_ok = true, sides_ok = true, poincare_ok = true, markov_ok = true, gap_ok = true, side_ok = true;
};

struct SweepOptions {
    double eps = 0.1;
    int jobs = 1;
};

// Constants C7', C8 and C9 are calibrated on the first row and frozen.
std::vector<SweepRow> sweep(const ProductSpec& spec, const std::vector<double>& intensities,
                            const SweepOptions& opt = {});

}  // namespace needle
