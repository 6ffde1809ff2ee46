#pragma once

#include <optional>
#include <string>
#include <vector>

#include "needle/deficit.hpp"
#include "needle/needle_measure.hpp"

namespace needle {

struct EnsembleEntry {
    std::string label;
    double weight = 1.0;  // nu_q before normalization
    NeedleMeasure needle;
    IntervalSet A;
    double offset = 0.0;  // u = x + offset on this needle
};

struct NeedleEnsemble {
    std::vector<EnsembleEntry> entries;  // sorted by label
    double theta = 0.5;
    double slack = 0.0;
    double global_perimeter = 0.0;
};

// Enforces the needle-decomposition contract: nu normalized, mass_q(A_q) = theta.
// Empty labels become zero-padded input indices.
NeedleEnsemble build_ensemble(std::vector<EnsembleEntry> entries, double theta, double slack = 0.0);
// same, with a supplied global perimeter (must dominate the nu-integral)
NeedleEnsemble build_ensemble_with_perimeter(std::vector<EnsembleEntry> entries, double theta,
                                             double global_perimeter);

struct DeficitDecomposition {
    double delta_A;
    std::vector<double> per_needle;
    double nu_integral;
};
DeficitDecomposition deficit_decomposition(const NeedleEnsemble& e);

struct ClassificationReport {
    double delta_A = 0;
    std::vector<std::size_t> Q_long, Q_minus, Q_plus;
    double nu_long = 0, nu_minus = 0, nu_plus = 0;
    std::vector<double> symdiff_minus, symdiff_plus;
    bool long_ok = true;   // nu(Q_long) >= 1 - sqrt(delta_A)
    bool sides_ok = true;  // nu(Q_long \ (Q_minus u Q_plus)) <= sqrt(delta_A)
    double nu_unaligned = 0;
};
ClassificationReport classify(const NeedleEnsemble& e);

NeedleEnsemble center_guiding(const NeedleEnsemble& e);
double guiding_mean(const NeedleEnsemble& e);

struct GlobalPoincare {
    double variance;
    double energy;
    double ratio;
    double mean_sq_integral;
    double within_variance;  // sum nu_q Var_q(u)
    bool poincare_ok;        // ratio <= 1 + 1e-9
};
GlobalPoincare reverse_poincare_global(const NeedleEnsemble& e);

struct CenteringOptions {
    double eps = 0.1;
    std::optional<double> exponent_budget;  // default 2(1-eps)/(3(3-eps))
    std::optional<double> c7p;              // frozen C7'; calibrated here otherwise
    std::optional<double> c8;               // frozen C8; reported only otherwise
};

struct CenteredReport {
    std::vector<std::size_t> Q_centered;
    double nu_centered = 1;
    double exponent_budget = 0;
    double c7p = 0;
    double threshold = 0;
    double markov_floor = 0;  // 1 - delta^{(1-eps)/(9-3eps)}
    bool markov_ok = true;
    double max_gap = 0;  // over Q_centered ∩ Q_long, in u coordinates
    double gap_scale = 0;  // delta^{(1-eps)/(9-3eps)}
    double c8 = 0;
    bool gap_ok = true;
};
CenteredReport centered_needles(const NeedleEnsemble& e, const ClassificationReport& cls,
                                const CenteringOptions& opt = {});

struct MainSymdiff {
    Side side;
    double value;
    double minus_value;
    double plus_value;
};
MainSymdiff main_symdiff(const NeedleEnsemble& e);

struct MinSideMass {
    double min_side;
    double slice_bound;
    double r1;
    double r2;
};
MinSideMass min_side_mass(const NeedleEnsemble& e, const ClassificationReport& cls);

// A_q -> domain \ A_q and theta -> 1 - theta
NeedleEnsemble complement_ensemble(const NeedleEnsemble& e);

// f = 1 + eps h with h the centred truncation of the guiding function
LsiWitness reverse_lsi_witness_global(const NeedleEnsemble& e, double sigma, double eps_amp, double lambda);

// (1-eps)/(9-3eps)
double main_exponent(double eps);

}  // namespace needle
