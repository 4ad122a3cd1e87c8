#include <cmath>

#include <doctest.h>

#include "levyratio/diagnostics.hpp"
#include "levyratio/errors.hpp"

using namespace levyratio;
using doctest::Approx;

namespace
{
void check_constant(RatioScan const& scan, double value)
{
    for (double r : scan.ratio)
    {
        REQUIRE(std::fabs(r - value) <= 1e-6 * value);
    }
    CHECK_FALSE(scan.unbounded);
}
}  // namespace

TEST_CASE("grid construction")
{
    auto g = make_grid({ScanEnd::zero, 1, 4, 2});
    REQUIRE(g.size() == 9);
    CHECK(g.front() == Approx(1));
    CHECK(g.back() == Approx(1e-2));
    for (std::size_t i = 1; i < g.size(); ++i)
    {
        CHECK(g[i] < g[i - 1]);
    }
    auto h = make_grid({ScanEnd::infinity, 2, 8, 3});
    CHECK(h.back() == Approx(2e3));
}

TEST_CASE("stable scans are constant")
{
    GridSpec const grid;
    for (double beta : {0.25, 0.5, 0.9})
    {
        auto m = make_stable(beta);
        check_constant(centered_feller_scan(*m, grid), (2 - beta) / beta);
        check_constant(relative_stability_scan(*m, grid), 1 - beta);
        check_constant(stochastic_compactness_scan(*m, grid),
                       beta * (2 - beta) / (2 * (1 - beta)));
    }
    CHECK(centered_feller_scan(*make_stable(0.5), grid).ratio.front() == Approx(3));
    CHECK(centered_feller_scan(*make_stable(0.25), grid).ratio.front() == Approx(7));
    CHECK(relative_stability_scan(*make_stable(0.5), grid).ratio.front() == Approx(0.5));
    CHECK(stochastic_compactness_scan(*make_stable(0.5), grid).ratio.front() == Approx(0.75));
    CHECK(stochastic_compactness_scan(*make_stable(0.9), grid).ratio.front() == Approx(4.95));
}

TEST_CASE("compound poisson relative stability near zero")
{
    auto scan = relative_stability_scan(*make_exp_compound_poisson(), GridSpec{});
    for (std::size_t i = 0; i < scan.x.size(); ++i)
    {
        double const x = scan.x[i];
        CHECK(scan.ratio[i] == Approx(x * std::exp(-x) / -std::expm1(-x)).epsilon(1e-8));
    }
    CHECK(scan.ratio.back() == Approx(1).epsilon(1e-5));
}

TEST_CASE("block measure flags")
{
    auto m = make_block_oscillating();
    GridSpec fine;
    fine.decades = 10;
    CHECK(centered_feller_scan(*m, fine).unbounded);
    auto const rs = relative_stability_scan(*m, fine);
    CHECK(rs.liminf_estimate < 0.05);
    auto const report = diagnose(*m, fine);
    CHECK_FALSE(report.inf_condition);
    CHECK(report.classification == Regime::not_feller_likely);
}

TEST_CASE("index estimates")
{
    GridSpec const grid;
    auto const stable = rv_index_estimate(*make_stable(0.5), grid);
    CHECK(stable.slope == Approx(-0.5).epsilon(1e-10));
    CHECK(stable.residual < 1e-10);
    CHECK(stable.collapse_deviation < 1e-8);

    GridSpec deep;
    deep.decades = 12;
    auto const sv = rv_index_estimate(*make_log_slowly_varying(), deep);
    CHECK(std::fabs(sv.slope_inner) < std::fabs(sv.slope_outer));
    CHECK(std::fabs(sv.slope_inner) < 0.1);
    auto const io = rv_index_estimate(*make_index_one_log_corrected(), deep);
    CHECK(io.slope_inner < io.slope_outer);
    CHECK(io.slope_inner < -0.8);

    CHECK_THROWS(rv_index_estimate(*make_stable(0.5), GridSpec{ScanEnd::zero, 1, 64, 2}));
}

TEST_CASE("classification")
{
    GridSpec const grid;
    auto const st = diagnose(*make_stable(0.3), grid);
    CHECK(st.classification == Regime::regularly_varying);
    CHECK(st.beta == Approx(0.3).epsilon(1e-8));
    CHECK(st.inf_condition);
    CHECK_FALSE(st.centered_feller.unbounded);
    CHECK_FALSE(st.disclaimer.empty());

    CHECK(diagnose(*make_log_slowly_varying(), grid).classification == Regime::slowly_varying);
    CHECK(diagnose(*make_index_one_log_corrected(), grid).classification == Regime::index_one);

    GridSpec inf_end;
    inf_end.end = ScanEnd::infinity;
    auto const at_inf = diagnose(*make_stable(0.6), inf_end);
    CHECK(at_inf.classification == Regime::regularly_varying);
    CHECK(at_inf.beta == Approx(0.6).epsilon(1e-8));
}

TEST_CASE("scans reject grids below the support")
{
    GridSpec grid;
    grid.start = 1e-3;
    StepMeasure m({0.01, 1.0}, {1.0, 0.0});
    CHECK_THROWS(centered_feller_scan(m, grid));
}
