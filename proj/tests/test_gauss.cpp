#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "needle/gauss.hpp"

using namespace needle;

TEST_CASE("density values")
{
    GaussianModel g;
    CHECK(g.density(0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(g.density(1) == doctest::Approx(0.24197072451914335).epsilon(1e-14));
    CHECK(g.density(-1) == g.density(1));
    CHECK_THROWS_AS(g.density(NAN), std::domain_error);
    CHECK_THROWS_AS(g.density(INFINITY), std::domain_error);
    GaussianModel g2(4.0);
    CHECK(g2.density(0.5) == doctest::Approx(2 * std_pdf(1.0)).epsilon(1e-14));
}

TEST_CASE("cdf values and limits")
{
    GaussianModel g;
    CHECK(g.cdf(0) == 0.5);
    CHECK(std::abs(g.cdf(1) - 0.84134474606854295) < 1e-15);
    CHECK(std::abs(g.cdf(-2) - 0.022750131948179207) < 1e-15);
    CHECK(g.cdf(-INFINITY) == 0.0);
    CHECK(g.cdf(INFINITY) == 1.0);
}

TEST_CASE("quantile")
{
    GaussianModel g;
    CHECK(g.quantile_a(0.5) == 0.0);
    CHECK(std::abs(g.quantile_a(0.8413447) - 1.0) < 1e-6);
    CHECK(std::abs(g.quantile_a(0.0227501) + 2.0) < 1e-6);
    for (double th : {1e-9, 1e-5, 0.01, 0.3, 0.77, 0.999999})
        CHECK(std::abs(g.cdf(g.quantile_a(th)) - th) <= 1e-10 * std::max(th, 1e-3));
    CHECK(g.quantile_a(0.2) == doctest::Approx(-g.quantile_a(0.8)).epsilon(1e-14));
    CHECK_THROWS_AS(g.quantile_a(0.0), std::domain_error);
    CHECK_THROWS_AS(g.quantile_a(1.0), std::domain_error);
}

TEST_CASE("profile_inf and derivatives")
{
    GaussianModel g;
    CHECK(g.profile_inf(0.5) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
    CHECK(std::abs(g.profile_inf(0.1586553) - 0.2419707) < 1e-7);
    CHECK(g.profile_inf(0.2) == doctest::Approx(g.profile_inf(0.8)).epsilon(1e-13));
    double prev = 1;
    for (double th = 1e-3; th > 1e-8; th /= 10) {
        double v = g.profile_inf(th);
        CHECK(v < prev);
        prev = v;
    }
    auto d = g.profile_derivatives(0.5);
    CHECK(d.first == 0.0);
    CHECK(d.second == doctest::Approx(-2.5066282746310002).epsilon(1e-14));
    auto d2 = g.profile_derivatives(0.15865525393145707);
    CHECK(d2.first == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d2.second == doctest::Approx(-4.1327313541224929).epsilon(1e-12));
    CHECK_THROWS_AS(g.profile_inf(1e-10), std::domain_error);
    CHECK_THROWS_AS(g.profile_derivatives(1.0), std::domain_error);
}

TEST_CASE("tail lower bound")
{
    GaussianModel g;
    CHECK(g.tail_lower_bound(0) == doctest::Approx(0.3989422804014327).epsilon(1e-15));
    CHECK(std::abs(g.tail_lower_bound(2) - 0.017996988837729351) < 1e-16);
    CHECK(g.tail_lower_bound(2) <= 1 - g.cdf(2));
    CHECK(g.tail_lower_bound(40) < 1e-300);
    CHECK_THROWS_AS(g.tail_lower_bound(-0.1), std::domain_error);
    CHECK_THROWS_AS(GaussianModel(2.0).tail_lower_bound(1.0), std::domain_error);
}

TEST_CASE("invariant: cdf monotone and symmetric on a grid")
{
    GaussianModel g;
    double prev = 0;
    for (int i = -800; i <= 800; ++i) {
        double x = i * 0.01;
        double c = g.cdf(x);
        CHECK(c >= prev);
        prev = c;
        CHECK(std::abs(c + g.cdf(-x) - 1) <= 1e-10);
    }
}

TEST_CASE("invariant: quantile inverts cdf on [-6, 6]")
{
    GaussianModel g;
    for (int i = -600; i <= 600; ++i) {
        double x = i * 0.01;
        CHECK(std::abs(g.quantile_a(g.cdf(x)) - x) <= 1e-8);
    }
}

TEST_CASE("invariant: I * I'' = -K and finite differences")
{
    for (double K : {1.0, 2.5}) {
        GaussianModel g(K);
        for (int i = 1; i <= 99; ++i) {
            double th = i / 100.0;
            CHECK(std::abs(g.profile_inf(th) * g.profile_derivatives(th).second + K) <= 1e-6);
            double h = 1e-4;
            double fd = (g.profile_inf(th + h) - 2 * g.profile_inf(th) + g.profile_inf(th - h)) / (h * h);
            CHECK(std::abs(fd - g.profile_derivatives(th).second) <= 1e-4 * std::max(1.0, std::abs(fd)));
        }
    }
}

TEST_CASE("invariant: tail bound below the tail on [0, 8]")
{
    GaussianModel g;
    for (int i = 0; i <= 800; ++i) {
        double T = i * 0.01;
        CHECK(g.tail_lower_bound(T) <= std_sf(T));
    }
}

TEST_CASE("construction rejects bad K")
{
    CHECK_THROWS_AS(GaussianModel(0.0), std::domain_error);
    CHECK_THROWS_AS(GaussianModel(-1.0), std::domain_error);
}
