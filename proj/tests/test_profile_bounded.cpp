#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "needle/gauss.hpp"
#include "needle/profile_bounded.hpp"
#include "needle/quadrature.hpp"

using namespace needle;

namespace {
double window(double lo, double hi)
{
    return integrate([](double t) { return std::exp(-0.5 * t * t); }, lo, hi);
}
}  // namespace

TEST_CASE("b_of examples")
{
    CHECK(std::abs(b_of({1, 2, 0.5}, -1)) < 1e-12);
    // root of int_0^b = 0.5 int_0^2, 40-digit oracle
    CHECK(std::abs(b_of({1, 2, 0.5}, 0) - 0.63911191087127283) < 1e-10);
    double prev = b_of({1, 1, 1e-3}, -1);
    for (double th : {1e-5, 1e-7}) {
        double b = b_of({1, 1, th}, -1);
        CHECK(b < prev);
        prev = b;
    }
    CHECK(prev + 1 < 1e-6);
    CHECK_THROWS_AS(b_of({1, 2, 0.5}, 0.1), std::domain_error);
    CHECK_THROWS_AS(b_of({1, 2, 0.5}, -2.1), std::domain_error);
}

TEST_CASE("b_of mass ratio")
{
    for (double xi : {-2.0, -1.3, -0.4, 0.0})
        for (double th : {0.05, 0.3, 0.5, 0.9}) {
            BoundedProfileQuery q{1, 2, th};
            double b = b_of(q, xi);
            CHECK(b >= xi);
            CHECK(b <= xi + 2);
            CHECK(std::abs(window(xi, b) / window(xi, xi + 2) - th) < 1e-10);
        }
}

TEST_CASE("f_xi_D examples")
{
    CHECK(std::abs(f_xi_D({1, 2, 0.5}, -1) - 0.58436856725681664) < 1e-12);
    // 1 / int_{-2}^{2} e^{-t^2/2} dt
    double v = f_xi_D({1, 4, 0.5}, -2);
    CHECK(std::abs(v - 0.41795955023513457) < 1e-12);
    GaussianModel g;
    CHECK(v > g.profile_inf(0.5));
    CHECK(v - g.profile_inf(0.5) < 0.02);
    for (double th : {0.1, 0.5, 0.8})
        for (int i = 0; i <= 20; ++i) {
            double xi = -3.0 + 3.0 * i / 20;
            CHECK(f_xi_D({1, 3, th}, xi) >= g.profile_inf(th));
        }
}

TEST_CASE("profile_D examples")
{
    BoundedProfile p = profile_D({1, 2, 0.5});
    CHECK(std::abs(p.value - 0.58436856725681664) < 1e-8);
    CHECK(std::abs(p.argmin_xi + 1) < 1e-6);
    GaussianModel g;
    for (double th : {0.2, 0.5, 0.7}) {
        double prev = INFINITY;
        for (double D : {1.0, 2.0, 3.0, 4.0}) {
            double v = profile_D({1, D, th}).value;
            CHECK(v <= prev + 1e-8);
            CHECK(v >= g.profile_inf(th));
            prev = v;
        }
    }
    double far = profile_D({1, 12, 0.3}).value - g.profile_inf(0.3);
    CHECK(far >= 0);
    CHECK(far < 1e-8);
}

TEST_CASE("gap lower bound")
{
    CHECK(std::abs(gap_lower_bound(1, 2) - 0.0019433496433521291) < 1e-17);
    CHECK(0.58436856725681664 - 0.3989422804014327 > gap_lower_bound(1, 2));
    CHECK_THROWS_AS(gap_lower_bound(0, 2), std::domain_error);
    CHECK_THROWS_AS(gap_lower_bound(1, -1), std::domain_error);
}

TEST_CASE("invariant: gap bound, reversal symmetry, monotone in D")
{
    GaussianModel g;
    for (double D : {1.0, 2.0, 3.0})
        for (int i = 1; i <= 19; i += 3) {
            double th = i / 20.0;
            double v = profile_D({1, D, th}).value;
            CHECK(v - g.profile_inf(th) > gap_lower_bound(1, D));
            CHECK(std::abs(v - profile_D({1, D, 1 - th}).value) < 1e-8);
        }
}

TEST_CASE("invariant: b_of increasing in theta")
{
    for (double xi : {-1.5, -0.5}) {
        double prev = -INFINITY;
        for (int i = 1; i < 40; ++i) {
            double b = b_of({1, 2, i / 40.0}, xi);
            CHECK(b > prev);
            prev = b;
        }
    }
}

TEST_CASE("K other than 1")
{
    BoundedProfileQuery q{2.0, 1.5, 0.4};
    double b = b_of(q, -0.7);
    auto w = [](double lo, double hi) {
        return integrate([](double t) { return std::exp(-t * t); }, lo, hi);
    };
    CHECK(std::abs(w(-0.7, b) / w(-0.7, 0.8) - 0.4) < 1e-10);
    CHECK(profile_D(q).value > GaussianModel(2.0).profile_inf(0.4) + gap_lower_bound(2.0, 1.5));
}
