#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "needle/product_sim.hpp"

using namespace needle;

TEST_CASE("rigidity at zero intensity")
{
    for (auto p : {Perturbation::hinge, Perturbation::flip, Perturbation::offset}) {
        auto spec = uniform_spec(7, 0.3, p);
        auto e = build_product(spec);
        auto c = classify(e);
        CHECK(std::abs(c.delta_A) < 1e-9);
        CHECK(main_symdiff(e).value < 1e-9);
        CHECK(std::abs(reverse_poincare_global(e).ratio - 1) < 1e-9);
        CHECK(min_side_mass(e, c).min_side == 0);
        for (const auto& en : e.entries) CHECK(en.offset == 0);
    }
}

TEST_CASE("hinge product examples")
{
    auto spec = uniform_spec(16, 0.3, Perturbation::hinge);
    spec.intensity = 0.1;
    auto e = build_product(spec);
    CHECK(e.entries.size() == 16);
    CHECK(classify(e).delta_A > 0);
    for (const auto& en : e.entries) CHECK(std::abs(en.needle.mass(en.A) - 0.3) < 1e-12);
    CHECK(std::abs(guiding_mean(e)) < 1e-12);
    CHECK(e.entries.front().label == "f0000");
}

TEST_CASE("flip and offset perturbations")
{
    auto spec = uniform_spec(20, 0.3, Perturbation::flip);
    spec.intensity = 0.1;
    auto c = classify(build_product(spec));
    CHECK(std::abs(c.nu_plus - 0.1) < 1e-12);
    CHECK(std::abs(c.nu_minus - 0.9) < 1e-12);
    spec.slack = 0.01;
    auto e = build_product(spec);
    auto k = classify(e);
    CHECK(std::abs(k.nu_plus - 0.1) < 1e-12);
    CHECK(std::abs(min_side_mass(e, k).min_side - 0.1) < 1e-12);
    spec.intensity = 1.2;
    CHECK_THROWS_AS(build_product(spec), std::domain_error);

    auto off = uniform_spec(8, 0.3, Perturbation::offset);
    off.intensity = 0.5;
    auto g = reverse_poincare_global(build_product(off));
    CHECK(std::abs(g.variance - 1.25) < 1e-12);
    CHECK_FALSE(g.poincare_ok);
}

TEST_CASE("product spec validation")
{
    ProductSpec s;
    CHECK_THROWS_AS(build_product(s), std::domain_error);
    s.fiber_weights = {0.5, 0.4};
    CHECK_THROWS_AS(build_product(s), std::domain_error);
    s.fiber_weights = {0.5, 0.5};
    s.labels = {"a"};
    CHECK_THROWS_AS(build_product(s), std::domain_error);
    s.labels.clear();
    s.intensity = 0.2;
    s.kink_scale = {1, -1};
    CHECK_THROWS_AS(build_product(s), std::domain_error);
    CHECK_THROWS_AS(parse_perturbation("twist"), std::domain_error);
    CHECK(to_string(parse_perturbation("flip")) == "flip");
    CHECK_THROWS_AS(uniform_spec(0, 0.3, Perturbation::hinge), std::domain_error);
}

TEST_CASE("sweep examples")
{
    auto spec = uniform_spec(16, 0.3, Perturbation::hinge);
    std::vector<double> ts{0.4, 0.2, 0.1, 0.05, 0.025};
    auto rows = sweep(spec, ts);
    REQUIRE(rows.size() == ts.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) CHECK(rows[i].delta_A < rows[i - 1].delta_A);
        CHECK(rows[i].symdiff_scaled <= 2 * rows[0].symdiff_scaled);
        CHECK(rows[i].long_ok);
        CHECK(rows[i].sides_ok);
        CHECK(rows[i].poincare_ok);
        CHECK(rows[i].side == Side::minus);
        CHECK(rows[i].ratio <= 1);
    }
    CHECK_THROWS_AS(sweep(spec, {0.1, 0.2}), std::domain_error);
    CHECK_THROWS_AS(sweep(spec, {0.1, 0.0}), std::domain_error);
    CHECK_THROWS_AS(sweep(spec, {}), std::domain_error);
}

TEST_CASE("sweep is independent of the job count")
{
    auto spec = uniform_spec(9, 0.3, Perturbation::hinge);
    std::vector<double> ts{0.3, 0.2, 0.1, 0.05};
    auto a = sweep(spec, ts, {0.1, 1});
    auto b = sweep(spec, ts, {0.1, 4});
    for (std::size_t i = 0; i < ts.size(); ++i) {
        CHECK(a[i].delta_A == b[i].delta_A);
        CHECK(a[i].main_symdiff == b[i].main_symdiff);
        CHECK(a[i].ratio == b[i].ratio);
        CHECK(a[i].max_gap == b[i].max_gap);
    }
}

TEST_CASE("invariant: fibre permutations leave aggregates unchanged")
{
    std::mt19937_64 rng(10010);
    const int n = 12;
    ProductSpec base = uniform_spec(n, 0.3, Perturbation::hinge);
    std::uniform_real_distribution<double> w(0.5, 2), p(-1.5, 1.5), c(0.2, 1.5);
    double tot = 0;
    for (int q = 0; q < n; ++q) {
        base.fiber_weights[q] = w(rng);
        tot += base.fiber_weights[q];
        base.labels.push_back("s" + std::to_string(100 + q));
        base.kink_pos.push_back(p(rng));
        base.kink_scale.push_back(c(rng));
    }
    for (auto& x : base.fiber_weights) x /= tot;
    auto ref = sweep(base, {0.3, 0.1});
    for (int it = 0; it < 5; ++it) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        ProductSpec s = base;
        for (int q = 0; q < n; ++q) {
            s.fiber_weights[q] = base.fiber_weights[perm[q]];
            s.labels[q] = base.labels[perm[q]];
            s.kink_pos[q] = base.kink_pos[perm[q]];
            s.kink_scale[q] = base.kink_scale[perm[q]];
        }
        auto rows = sweep(s, {0.3, 0.1});
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows[i].delta_A == ref[i].delta_A);
            CHECK(rows[i].main_symdiff == ref[i].main_symdiff);
            CHECK(rows[i].ratio == ref[i].ratio);
            CHECK(rows[i].min_side == ref[i].min_side);
            CHECK(rows[i].nu_long == ref[i].nu_long);
        }
    }
}

TEST_CASE("invariant: generated needles honour the contract")
{
    auto spec = uniform_spec(10, 0.4, Perturbation::hinge);
    spec.intensity = 0.35;
    std::mt19937_64 rng(11011);
    std::uniform_real_distribution<double> x(-5, 5), u(0, 1);
    for (const auto& en : build_product(spec).entries) {
        CHECK(std::abs(en.needle.mass(en.A) - 0.4) < 1e-12);
        const auto& psi = en.needle.weight();
        for (int i = 0; i < 200; ++i) {
            double a = x(rng), b = x(rng), t = u(rng);
            double rhs = (1 - t) * psi(a) + t * psi(b) - 0.5 * t * (1 - t) * (a - b) * (a - b);
            CHECK(psi((1 - t) * a + t * b) <= rhs + 1e-12 * std::max(1.0, std::abs(rhs)));
        }
    }
}
