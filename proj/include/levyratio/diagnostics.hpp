#pragma once

#include <string>
#include <vector>

#include "levy_measure.hpp"

namespace levyratio
{
enum class ScanEnd
{
    zero,
    infinity
};

char const* to_string(ScanEnd end);
ScanEnd scan_end_from_string(std::string const& name);

//! Geometric grid running from `start` toward the chosen end.
struct GridSpec
{
    ScanEnd end = ScanEnd::zero;
    double start = 1;
    int points_per_decade = 64;
    int decades = 6;
};

std::vector<double> make_grid(GridSpec const& spec);

//! One ratio condition evaluated along a grid.
struct RatioScan
{
    std::string condition;
    std::vector<double> x;
    std::vector<double> ratio;
    //! Max / min over the half of the grid nearest the end
    double limsup_estimate = 0;
    double liminf_estimate = 0;
    //! OLS slope of log(ratio) against decades toward the end, two-sided p
    double trend_slope = 0;
    double trend_pvalue = 1;
    //! Running maximum grows across decades (one-sided p < 0.01, > 2x)
    bool unbounded = false;
};

//! v^2 tail(v) / V2(v).
RatioScan centered_feller_scan(LevyMeasure const& measure, GridSpec const& grid);

//! x tail(x) / I(x).
RatioScan relative_stability_scan(LevyMeasure const& measure, GridSpec const& grid);

//! t (I(t) - t tail(t)) / (V2(t) + t^2 tail(t)).
RatioScan stochastic_compactness_scan(LevyMeasure const& measure,
                                      GridSpec const& grid);

struct RvIndexEstimate
{
    //! Slope of log tail against log x over the half of the grid nearest the end
    double slope = 0;
    double residual = 0;
    //! Slopes over the two halves of that range, outer then inner
    double slope_outer = 0;
    double slope_inner = 0;
    //! max |log(t tail(v t^{1/b})) + b log v| over v in [1/2, 2], two t values
    double collapse_deviation = 0;
};

RvIndexEstimate rv_index_estimate(LevyMeasure const& measure, GridSpec const& grid);

enum class Regime
{
    regularly_varying,
    slowly_varying,
    index_one,
    centered_feller_likely,
    not_feller_likely,
    inconclusive
};

char const* to_string(Regime regime);

struct DiagnosticsReport
{
    GridSpec grid;
    RatioScan centered_feller;
    RatioScan relative_stability;
    RatioScan stochastic_compactness;
    RvIndexEstimate rv;
    Regime classification = Regime::inconclusive;
    //! Index for regularly_varying, else the fitted -slope
    double beta = 0;
    //! liminf x tail / I stays above inf_tolerance
    bool inf_condition = false;
    double inf_tolerance = 0.05;
    std::string disclaimer;
};

DiagnosticsReport diagnose(LevyMeasure const& measure, GridSpec const& grid,
                           double inf_tolerance = 0.05);

}  // namespace levyratio
