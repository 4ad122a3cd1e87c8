#include <cmath>

#include <doctest.h>

#include "levyratio/errors.hpp"
#include "levyratio/rng.hpp"
#include "levyratio/weights.hpp"

using namespace levyratio;
using doctest::Approx;

TEST_CASE("two point moments and sampling")
{
    auto w = WeightLaw::two_point(0, 1, 0.5);
    CHECK(w.mean() == Approx(0.5));
    CHECK(w.variance() == Approx(0.25));
    CHECK(w.cdf(-0.1) == 0);
    CHECK(w.cdf(0) == Approx(0.5));
    CHECK(w.cdf(1) == Approx(1));

    RngStream rng(3, 0);
    int const n = 100000;
    double sum = 0;
    for (int i = 0; i < n; ++i)
    {
        sum += w.sample(rng);
    }
    CHECK(std::fabs(sum / n - 0.5) <= 4 * 0.5 / std::sqrt(double(n)));
}

TEST_CASE("degenerate weights need an override")
{
    CHECK_THROWS_AS(WeightLaw::two_point(0, 1, 1), DomainError);
    auto w = WeightLaw::two_point(0, 1, 1, true);
    RngStream rng(1, 0);
    for (int i = 0; i < 100; ++i)
    {
        CHECK(w.sample(rng) == 1);
    }
}

TEST_CASE("gaussian sampling variance")
{
    auto w = WeightLaw::gaussian(0, 1);
    RngStream rng(5, 0);
    int const n = 100000;
    double s1 = 0;
    double s2 = 0;
    for (int i = 0; i < n; ++i)
    {
        double const x = w.sample(rng);
        s1 += x;
        s2 += x * x;
    }
    double const var = s2 / n - (s1 / n) * (s1 / n);
    CHECK(std::fabs(var - 1) < 0.05);
    CHECK(w.abs_mean() == Approx(std::sqrt(2 / M_PI)));
}

TEST_CASE("fractional moment pair")
{
    auto w = WeightLaw::two_point(0, 1, 0.5);
    auto fm = w.frac_moment_pair(0.25, 0.5);
    CHECK(fm.m == Approx(0.5 * (0.5 + std::sqrt(0.75))).epsilon(1e-12));
    CHECK(fm.s == Approx(0.5 * (0.5 - std::sqrt(0.75))).epsilon(1e-12));
    CHECK(fm.m == Approx(0.683013).epsilon(1e-6));
    CHECK(fm.s == Approx(-0.183013).epsilon(1e-5));
    CHECK(w.frac_moment_pair(0.5, 0.5).s == Approx(0).epsilon(1e-15));

    auto g = WeightLaw::gaussian(0, 1);
    CHECK(std::fabs(g.frac_moment_pair(0, 0.5).s) < 1e-10);

    // |s| <= m everywhere, m > 0 for nondegenerate laws
    auto u = WeightLaw::uniform(-1, 2);
    for (double x = -3; x <= 3; x += 0.37)
    {
        for (auto const& law : {w, g, u})
        {
            auto const p = law.frac_moment_pair(x, 0.3);
            CHECK(p.m > 0);
            CHECK(std::fabs(p.s) <= p.m * (1 + 1e-12));
        }
    }
    // Atom at x contributes sgn(0) = 0
    auto at = w.frac_moment_pair(0, 0.5);
    CHECK(at.s == Approx(-0.5));
    CHECK(at.m == Approx(0.5));
}

TEST_CASE("uniform and empirical laws")
{
    auto u = WeightLaw::uniform(0, 2);
    CHECK(u.mean() == Approx(1));
    CHECK(u.variance() == Approx(1.0 / 3));
    CHECK(u.cdf(0.5) == Approx(0.25));
    CHECK(u.p_moment(2) == Approx(4.0 / 3));

    auto e = WeightLaw::empirical({3, 1, 2, 2});
    CHECK(e.mean() == Approx(2));
    CHECK(e.cdf(2) == Approx(0.75));
    CHECK(e.atoms().front().value == 1);
    CHECK_THROWS_AS(WeightLaw::empirical({1, 1}), DomainError);
}

TEST_CASE("expectation over the law")
{
    auto g = WeightLaw::gaussian(1, 2);
    CHECK(g.expect([](double x) { return x * x; }, 0) == Approx(5).epsilon(1e-8));
    auto w = WeightLaw::two_point(-1, 3, 0.25);
    CHECK(w.expect([](double x) { return x; }, 0) == Approx(0));
}
