#pragma once

#include <utility>

namespace needle {

// standard normal helpers (K = 1)
double std_pdf(double x);
double std_cdf(double x);
double std_sf(double x);  // 1 - cdf without cancellation
// Phi(h) - Phi(l) picking whichever tail keeps precision
double std_mass(double l, double h);
double std_quantile(double p);

inline constexpr double kSqrt2Pi = 2.50662827463100050242;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

struct ProfileDerivatives {
    double first;
    double second;
};

class GaussianModel {
public:
    explicit GaussianModel(double K = 1.0);

    double K() const { return K_; }

    double density(double x) const;
    double cdf(double x) const;
    double quantile_a(double theta) const;
    double profile_inf(double theta) const;
    ProfileDerivatives profile_derivatives(double theta) const;
    // (1/sqrt(2 pi)) e^{-T^2/2} / (T + 1); K = 1 only
    double tail_lower_bound(double T) const;

private:
    double K_;
};

// theta must sit in (1e-9, 1 - 1e-9)
void check_theta(double theta);

}  // namespace needle
