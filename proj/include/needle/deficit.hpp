#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "needle/needle_measure.hpp"

namespace needle {

struct DeficitOptions {
    // "small deficit" regime: delta <= regime_factor * min(theta, 1-theta)^3
    double regime_factor = 0.01;
    // calibrated tail constant; when set, tail_T and tail_S are checked
    std::optional<double> c4;
};

struct DeficitReport {
    double theta = 0;
    double a_theta = 0;
    double delta = 0;
    double alpha = 0;
    double slope = 0;  // psi'_+(a_theta)
    double T = kInf;
    double S = -kInf;
    double tail_T = 0;
    double tail_S = 0;
    bool in_regime = true;
    bool valid = true;
    std::vector<std::string> flags;
};

struct CutPoints {
    double T;
    double S;
};

struct EnvelopeMargins {
    double lower_margin;
    double upper_margin;
};

struct SymdiffBound {
    double deficit_A;
    double symdiff_min;
    double ratio;
};

struct LsiWitness {
    double lhs;
    double rhs;
    bool holds;
};

struct TalagrandWitness {
    double w2_sq;
    double ent;
    bool holds;
};

struct Orientation {
    NeedleMeasure measure;
    bool reflected;
    double shift;
};

Orientation orient_detail(const NeedleMeasure& m, double theta);
NeedleMeasure orient_for_theta(const NeedleMeasure& m, double theta);

// T and S for given theta, delta and psi'_+(a_theta); +-inf when delta = 0
CutPoints cut_points(double theta, double delta, double slope);
// the limit bound on |alpha|/delta as delta -> 0, read off the proof
double c3_bound(double theta);

DeficitReport deficit(const NeedleMeasure& oriented, double theta, const DeficitOptions& opt = {});
// (gamma([T,inf)) - sqrt(delta)) / delta, and the same for (-inf,S]
double tail_ratio_T(const DeficitReport& r);
double tail_ratio_S(const DeficitReport& r);

std::vector<double> default_envelope_grid(const NeedleMeasure& m, const DeficitReport& r, double step = 0.01);
EnvelopeMargins envelope_check(const NeedleMeasure& oriented, double theta, const DeficitReport& r,
                               const std::vector<double>& grid);

SymdiffBound symdiff_bound(const NeedleMeasure& oriented, double theta, const IntervalSet& A);
double reverse_poincare_needle(const NeedleMeasure& oriented, double theta, const DeficitReport& r);

LsiWitness reverse_lsi_witness(const NeedleMeasure& m, double a, double b, double sigma, double eps_amp,
                               double lambda);
// mu given by its Lebesgue density
TalagrandWitness talagrand_witness(const NeedleMeasure& m, const std::function<double(double)>& mu_density,
                                   double lambda);

}  // namespace needle

namespace needle {

// psi = x^2/2 + t max(x - p, 0), oriented for theta and run through the lab
struct FamilyRow {
    double t;
    bool reflected;
    DeficitReport report;
    EnvelopeMargins margins;
    double rp_ratio;
};
std::vector<FamilyRow> hinge_family(double theta, const std::vector<double>& t_list, double kink_pos = 0.0,
                                    const DeficitOptions& opt = {});

// least-squares slope of log y against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace needle
