#include "needle/gauss.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "needle/quadrature.hpp"

namespace needle {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;

// Acklam's rational approximation, ~1e-9 relative; refined below
double acklam(double p)
{
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00, 2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        double q = std::sqrt(-2 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    if (p > 1 - plow) {
        double q = std::sqrt(-2 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
}
}  // namespace

double std_pdf(double x) { return std::exp(-0.5 * x * x) / kSqrt2Pi; }

double std_cdf(double x)
{
    if (std::isnan(x)) return x;
    return 0.5 * std::erfc(-x * kInvSqrt2);
}

double std_sf(double x)
{
    if (std::isnan(x)) return x;
    return 0.5 * std::erfc(x * kInvSqrt2);
}

double std_mass(double l, double h)
{
    if (!(h > l)) return 0.0;
    if (l >= 0) return std_sf(l) - std_sf(h);
    if (h <= 0) return std_cdf(h) - std_cdf(l);
    return 1.0 - std_cdf(l) - std_sf(h);
}

double std_quantile(double p)
{
    if (!(p > 0 && p < 1)) throw std::domain_error("std_quantile: p outside (0,1)");
    // work on the lower half so the residual is computed without cancellation
    bool upper = p > 0.5;
    double pl = upper ? 1 - p : p;
    double x = acklam(pl);
    for (int it = 0; it < 2; ++it) {
        double e = std_cdf(x) - pl;
        double u = e * kSqrt2Pi * std::exp(0.5 * x * x);
        x -= u / (1 + 0.5 * x * u);  // Halley
    }
    return upper ? -x : x;
}

void check_theta(double theta)
{
    if (!(theta > 1e-9 && theta < 1 - 1e-9))
        throw std::domain_error("theta must lie in (1e-9, 1-1e-9), got " + std::to_string(theta));
}

GaussianModel::GaussianModel(double K) : K_(K)
{
    if (!(K > 0) || !std::isfinite(K)) throw std::domain_error("GaussianModel: K must be positive");
    double w = 40.0 / std::sqrt(K);
    double total = integrate([this](double x) { return density(x); }, -w, w);
    if (std::abs(total - 1) > 1e-10)
        throw std::runtime_error("GaussianModel: density does not integrate to 1");
}

double GaussianModel::density(double x) const
{
    if (!std::isfinite(x)) throw std::domain_error("density: non-finite x");
    return std::sqrt(K_) * std_pdf(std::sqrt(K_) * x);
}

double GaussianModel::cdf(double x) const
{
    if (x == -std::numeric_limits<double>::infinity()) return 0.0;
    if (x == std::numeric_limits<double>::infinity()) return 1.0;
    return std_cdf(std::sqrt(K_) * x);
}

double GaussianModel::quantile_a(double theta) const
{
    if (!(theta > 0 && theta < 1)) throw std::domain_error("quantile_a: theta outside (0,1)");
    return std_quantile(theta) / std::sqrt(K_);
}

double GaussianModel::profile_inf(double theta) const
{
    check_theta(theta);
    return density(quantile_a(theta));
}

ProfileDerivatives GaussianModel::profile_derivatives(double theta) const
{
    check_theta(theta);
    double a = quantile_a(theta);
    return {-K_ * a, -K_ / density(a)};
}

double GaussianModel::tail_lower_bound(double T) const
{
    if (K_ != 1.0) throw std::domain_error("tail_lower_bound: only defined for K = 1");
    if (!(T >= 0)) throw std::domain_error("tail_lower_bound: T must be >= 0");
    if (std::isinf(T)) return 0.0;
    return std_pdf(T) / (T + 1);
}

}  // namespace needle
