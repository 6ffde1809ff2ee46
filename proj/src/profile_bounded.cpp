#include "needle/profile_bounded.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "needle/gauss.hpp"
#include "needle/quadrature.hpp"
#include "needle/roots.hpp"

namespace needle {

namespace {
double window_mass(double K, double lo, double hi)
{
    return integrate([K](double t) { return std::exp(-0.5 * K * t * t); }, lo, hi);
}

void check_xi(const BoundedProfileQuery& q, double xi)
{
    if (!(xi >= -q.D && xi <= 0)) throw std::domain_error("xi outside [-D, 0]");
}
}  // namespace

void validate(const BoundedProfileQuery& q)
{
    if (!(q.K > 0) || !std::isfinite(q.K)) throw std::domain_error("K must be positive");
    if (!(q.D > 0) || !std::isfinite(q.D)) throw std::domain_error("D must be positive");
    check_theta(q.theta);
}

double b_of(const BoundedProfileQuery& q, double xi)
{
    validate(q);
    check_xi(q, xi);
    double total = window_mass(q.K, xi, xi + q.D);
    auto g = [&](double b) { return window_mass(q.K, xi, b) / total - q.theta; };
    return solve_bracketed(g, xi, xi + q.D, 1e-12 * q.D);
}

double f_xi_D(const BoundedProfileQuery& q, double xi)
{
    double b = b_of(q, xi);
    return std::exp(-0.5 * q.K * b * b) / window_mass(q.K, xi, xi + q.D);
}

BoundedProfile profile_D(const BoundedProfileQuery& q)
{
    validate(q);
    const int n = 65;
    double h = q.D / (n - 1);
    int best = 0;
    double fbest = 0;
    for (int i = 0; i < n; ++i) {
        double xi = i == n - 1 ? 0.0 : -q.D + i * h;
        double v = f_xi_D(q, xi);
        if (i == 0 || v < fbest) {
            best = i;
            fbest = v;
        }
    }
    double lo = -q.D + std::max(best - 1, 0) * h;
    double hi = std::min(-q.D + std::min(best + 1, n - 1) * h, 0.0);
    MinResult r = golden_min([&](double xi) { return f_xi_D(q, xi); }, lo, hi, 1e-9);
    double xbest = best == n - 1 ? 0.0 : -q.D + best * h;
    if (r.f < fbest) return {r.f, r.x};
    return {fbest, xbest};
}

double gap_lower_bound(double K, double D)
{
    if (!(K > 0) || !(D > 0)) throw std::domain_error("gap_lower_bound: K and D must be positive");
    double sk = std::sqrt(K);
    return sk / std::numbers::pi * std::exp(-K * D * D) / (sk * D + 1);
}

}  // namespace needle
