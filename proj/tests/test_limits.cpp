#include <cmath>
#include <numbers>

#include <doctest.h>

#include "levyratio/errors.hpp"
#include "levyratio/limits.hpp"
#include "levyratio/numerics.hpp"

using namespace levyratio;
using doctest::Approx;

namespace
{
double lamperti_mass(double a, double b, double beta, double p)
{
    return numerics::integrate([&](double x) { return lamperti_density(x, beta, p); }, a, b,
                               1e-12)
        .value;
}

double arcsine_cdf(double x)
{
    return 2 / std::numbers::pi * std::asin(std::sqrt(x));
}
}  // namespace

TEST_CASE("limit cdf closed forms")
{
    auto coin = WeightLaw::two_point(0, 1, 0.5);
    LimitLaw half(0.5, coin);
    CHECK(limit_cdf(0.5, half) == Approx(0.5).epsilon(1e-14));
    CHECK(limit_cdf(0.25, half) == Approx(1.0 / 3).epsilon(1e-12));
    for (double x = 0.05; x < 1; x += 0.1)
    {
        CHECK(limit_cdf(x, half) == Approx(arcsine_cdf(x)).epsilon(1e-12));
    }
    CHECK(limit_cdf(-0.5, half) == 0);
    CHECK(limit_cdf(1.5, half) == 1);

    auto g = WeightLaw::gaussian(0.3, 1);
    CHECK(limit_cdf(1.3, LimitLaw(1, g)) == 1);
    CHECK(limit_cdf(0.2, LimitLaw(1, g)) == 0);
    CHECK(limit_cdf(0.7, LimitLaw(0, g)) == Approx(g.cdf(0.7)));
}

TEST_CASE("limit cdf is a cdf")
{
    for (auto const& w : {WeightLaw::gaussian(0, 1), WeightLaw::uniform(-1, 2),
                          WeightLaw::two_point(-2, 1, 0.3)})
    {
        LimitLaw law(0.4, w);
        double prev = 0;
        for (double x = -30; x <= 30; x += 0.25)
        {
            double const c = limit_cdf(x, law);
            CHECK(c >= prev - 1e-14);
            prev = c;
        }
        CHECK(limit_cdf(-1e6, law) < 1e-3);
        CHECK(limit_cdf(1e6, law) > 1 - 1e-3);
    }
}

TEST_CASE("arcsine density")
{
    CHECK(arcsine_density(0.5) == Approx(2 / std::numbers::pi));
    CHECK(arcsine_density(0.1) == Approx(arcsine_density(0.9)));
    auto const total = numerics::integrate(arcsine_density, 0, 1, 1e-12);
    CHECK(total.value == Approx(1).epsilon(1e-8));
    CHECK_THROWS_AS(arcsine_density(1.5), DomainError);
}

TEST_CASE("lamperti density")
{
    CHECK(lamperti_density(0.5, 0.5, 0.5) == Approx(2 / std::numbers::pi));
    for (double x = 0.1; x < 0.95; x += 0.1)
    {
        CHECK(std::fabs(lamperti_density(x, 0.5, 0.5) - arcsine_density(x)) < 1e-10);
    }
    for (double beta : {0.3, 0.7})
    {
        for (double p : {0.2, 0.6})
        {
            // Right half through g(1 - x; beta, p) = g(x; beta, 1 - p), keeping
            // resolution at the x = 1 singularity
            auto const total = lamperti_mass(0, 0.5, beta, p)
                               + lamperti_mass(0, 0.5, beta, 1 - p);
            CHECK(total == Approx(1).epsilon(1e-6));
        }
    }
    // Derivative of the limit cdf for 0/1 weights
    for (double p : {0.3, 0.5})
    {
        LimitLaw law(0.6, WeightLaw::two_point(0, 1, p));
        for (double x = 0.1; x < 0.95; x += 0.1)
        {
            double const h = 1e-5;
            double const fd = (limit_cdf(x + h, law) - limit_cdf(x - h, law)) / (2 * h);
            CHECK(std::fabs(fd - lamperti_density(x, 0.6, p)) < 1e-5);
        }
    }
}

TEST_CASE("stable characteristic exponent")
{
    LimitLaw law(0.5, WeightLaw::two_point(0, 1, 0.5));
    CHECK(std::abs(stable_cexp(0, 0, law)) == 0);
    auto const one = stable_cexp(0, 1, law);
    CHECK(one.real() == Approx(-1));
    CHECK(one.imag() == Approx(std::tan(std::numbers::pi / 4)));
    auto const a = stable_cexp(1.3, -0.7, law);
    auto const b = stable_cexp(-1.3, 0.7, law);
    CHECK(b.real() == Approx(a.real()));
    CHECK(b.imag() == Approx(-a.imag()));

    LimitLaw gauss(0.4, WeightLaw::gaussian(0, 1), 2.0);
    auto const c = stable_cexp(0.8, 0.1, gauss);
    auto const d = stable_cexp(-0.8, -0.1, gauss);
    CHECK(d.real() == Approx(c.real()).epsilon(1e-10));
    CHECK(d.imag() == Approx(-c.imag()).epsilon(1e-10));
}

TEST_CASE("fourier inversion")
{
    LimitLaw half(0.5, WeightLaw::two_point(0, 1, 0.5));
    CHECK(std::fabs(fourier_cdf(0.5, half).value - 0.5) < 1e-6);
    CHECK(std::fabs(fourier_cdf(0.25, half).value - 1.0 / 3) < 1e-4);

    for (double beta : {0.3, 0.7})
    {
        LimitLaw law(beta, WeightLaw::gaussian(0.5, 1));
        for (double x : {-1.0, 0.2, 0.9, 2.5})
        {
            CHECK(std::fabs(fourier_cdf(x, law).value - limit_cdf(x, law)) < 1e-4);
        }
    }
    LimitLaw c1(0.5, WeightLaw::two_point(0, 1, 0.3), 1.0);
    LimitLaw c2(0.5, WeightLaw::two_point(0, 1, 0.3), 3.7);
    for (double x : {0.1, 0.4, 0.8})
    {
        CHECK(std::fabs(fourier_cdf(x, c1).value - fourier_cdf(x, c2).value) < 1e-6);
    }
}

TEST_CASE("expected rt")
{
    for (double beta : {0.25, 0.5})
    {
        for (double t : {0.1, 1.0, 10.0})
        {
            auto const r = expected_rt(t, *make_stable(beta));
            CHECK(std::fabs(r.value - (1 - beta)) < 1e-6);
            CHECK(r.warning.empty());
        }
    }
    for (auto const& m : {make_exp_compound_poisson(), make_log_slowly_varying(),
                          make_index_one_log_corrected()})
    {
        for (double t : {1e-3, 1.0})
        {
            auto const r = expected_rt(t, *m, false);
            CAPTURE(m->name());
            CHECK(r.value >= 0);
            CHECK(r.value <= 1);
        }
    }
    // Slowly varying: one jump dominates, so R_t -> 1
    CHECK(expected_rt(1e-4, *make_log_slowly_varying(), false).value > 0.99);
    // Block measure violates the relative stability condition
    CHECK_FALSE(expected_rt(1, *make_block_oscillating()).warning.empty());
}

TEST_CASE("limit second moment")
{
    auto coin = WeightLaw::two_point(0, 1, 0.5);
    CHECK(limit_second_moment(LimitLaw(0.5, coin)) == Approx(0.375));
    // Against the arcsine law directly
    auto const direct = numerics::integrate(
        [](double x) { return x * x * arcsine_density(x); }, 0, 1, 1e-12);
    CHECK(direct.value == Approx(0.375).epsilon(1e-8));

    auto g = WeightLaw::gaussian(1, 2);
    CHECK(limit_second_moment(LimitLaw(1, g)) == Approx(1));
    CHECK(limit_second_moment(LimitLaw(0, g)) == Approx(5));
}

TEST_CASE("limit law validation")
{
    CHECK_THROWS_AS(LimitLaw(1.5, WeightLaw::two_point(0, 1, 0.5)), DomainError);
    CHECK_THROWS_AS(LimitLaw(0.5, WeightLaw::two_point(0, 1, 0.5), -1), DomainError);
}
