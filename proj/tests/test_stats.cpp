#include <cmath>
#include <vector>

#include <doctest.h>

#include "levyratio/rng.hpp"
#include "levyratio/stats.hpp"

using namespace levyratio;
using doctest::Approx;

TEST_CASE("ks against own empirical cdf")
{
    std::vector<double> sample = {0.3, 0.1, 0.7, 0.5};
    auto ecdf = [&](double x) {
        double c = 0;
        for (double s : sample)
        {
            c += s <= x;
        }
        return c / double(sample.size());
    };
    CHECK(ks_statistic(sample, ecdf) == Approx(1.0 / 8));
}

TEST_CASE("constant sample against a step")
{
    std::vector<double> sample(10, 2.0);
    CHECK(ks_statistic(sample, [](double x) { return x >= 2 ? 1.0 : 0.0; }) == Approx(0.5));
}

TEST_CASE("uniform sample below the critical value")
{
    RngStream rng(2024, 0);
    std::size_t const n = 100000;
    std::vector<double> u(n);
    for (auto& x : u)
    {
        x = rng.uniform();
    }
    double const d = ks_statistic(u, [](double x) { return std::fmin(std::fmax(x, 0.0), 1.0); });
    CHECK(d < 1.63 / std::sqrt(double(n)));
    CHECK(ks_critical(n, 0.01) * std::sqrt(double(n)) == Approx(1.6276).epsilon(1e-4));
}

TEST_CASE("two sample ks")
{
    std::vector<double> a = {1, 2, 3, 4};
    std::vector<double> b = {1, 2, 3, 4};
    CHECK(ks_two_sample(a, b) == 0);
    std::vector<double> c = {5, 6, 7, 8};
    CHECK(ks_two_sample(a, c) == Approx(1));
    CHECK(ks_critical_two_sample(20000, 20000, 0.01)
          == Approx(1.6276 * std::sqrt(2.0 / 20000)).epsilon(1e-4));
}

TEST_CASE("mean and standard error")
{
    auto r = mean_se({1, 2, 3, 4});
    CHECK(r.mean == Approx(2.5));
    CHECK(r.variance == Approx(5.0 / 3));
    CHECK(r.se == Approx(std::sqrt(5.0 / 12)));
}
