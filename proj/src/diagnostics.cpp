#include "levyratio/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <boost/math/distributions/students_t.hpp>

#include "levyratio/errors.hpp"

namespace levyratio
{
namespace
{
struct LineFit
{
    double slope = 0;
    double intercept = 0;
    double residual = 0;  // RMS
    double slope_se = 0;
};

LineFit fit_line(std::vector<double> const& x, std::vector<double> const& y)
{
    auto const n = static_cast<double>(x.size());
    if (x.size() < 3)
    {
        throw NumericError("trend fit needs at least three points");
    }
    double mx = 0;
    double my = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0;
    double sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0))
    {
        throw NumericError("degenerate fit: grid has no spread");
    }
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        double const r = y[i] - fit.intercept - fit.slope * x[i];
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.slope_se = std::sqrt(ss / (n - 2) / sxx);
    return fit;
}

// p-value of the slope; exact fits give 1 for zero slope and 0 otherwise
double slope_pvalue(LineFit const& fit, std::size_t n, bool one_sided)
{
    double const scale = std::fmax(std::fabs(fit.slope), 1.0);
    if (!(fit.slope_se > 1e-12 * scale))
    {
        if (std::fabs(fit.slope) <= 1e-12)
        {
            return 1;
        }
        return one_sided && fit.slope < 0 ? 1.0 : 0.0;
    }
    boost::math::students_t dist(static_cast<double>(n) - 2);
    double const tstat = fit.slope / fit.slope_se;
    if (one_sided)
    {
        return boost::math::cdf(boost::math::complement(dist, tstat));
    }
    return 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(tstat)));
}

template<class F>
RatioScan run_scan(std::string name, GridSpec const& spec, F&& ratio_at)
{
    RatioScan scan;
    scan.condition = std::move(name);
    scan.x = make_grid(spec);
    scan.ratio.reserve(scan.x.size());
    for (double x : scan.x)
    {
        double const r = ratio_at(x);
        if (!std::isfinite(r) || r < 0)
        {
            throw NumericError(scan.condition + ": ratio not finite at x = "
                               + std::to_string(x)
                               + " (grid outside the support?)");
        }
        scan.ratio.push_back(r);
    }

    auto const n = scan.x.size();
    auto const half = n / 2;
    scan.limsup_estimate = *std::max_element(scan.ratio.begin() + half, scan.ratio.end());
    scan.liminf_estimate = *std::min_element(scan.ratio.begin() + half, scan.ratio.end());

    // Trend in log(ratio) against distance (decades) toward the end
    std::vector<double> depth(n);
    std::vector<double> log_ratio(n);
    bool has_zero = false;
    for (std::size_t i = 0; i < n; ++i)
    {
        depth[i] = static_cast<double>(i) / spec.points_per_decade;
        has_zero = has_zero || !(scan.ratio[i] > 0);
        log_ratio[i] = std::log(std::fmax(scan.ratio[i], 1e-300));
    }
    if (!has_zero)
    {
        auto const fit = fit_line(depth, log_ratio);
        scan.trend_slope = fit.slope;
        scan.trend_pvalue = slope_pvalue(fit, n, false);
    }

    // Growth of the running maximum, sampled once per decade
    std::vector<double> decade;
    std::vector<double> log_max;
    double running = 0;
    for (int d = 0; d < spec.decades; ++d)
    {
        auto const begin = scan.ratio.begin() + static_cast<long>(d) * spec.points_per_decade;
        auto const end = begin + spec.points_per_decade + 1;
        running = std::fmax(running, *std::max_element(begin, std::min(end, scan.ratio.end())));
        decade.push_back(d);
        log_max.push_back(std::log(std::fmax(running, 1e-300)));
    }
    if (decade.size() >= 3)
    {
        auto const fit = fit_line(decade, log_max);
        double const p = slope_pvalue(fit, decade.size(), true);
        scan.unbounded = fit.slope > 0 && p < 0.01
                         && log_max.back() - log_max.front() > std::log(2.0);
    }
    return scan;
}
}  // namespace

char const* to_string(ScanEnd end)
{
    return end == ScanEnd::zero ? "zero" : "infinity";
}

ScanEnd scan_end_from_string(std::string const& name)
{
    if (name == "zero")
    {
        return ScanEnd::zero;
    }
    if (name == "infinity")
    {
        return ScanEnd::infinity;
    }
    throw DomainError("unknown scan end '" + name + "' (zero|infinity)");
}

char const* to_string(Regime regime)
{
    switch (regime)
    {
        case Regime::regularly_varying:
            return "regularly_varying";
        case Regime::slowly_varying:
            return "slowly_varying";
        case Regime::index_one:
            return "index_one";
        case Regime::centered_feller_likely:
            return "centered_feller_likely";
        case Regime::not_feller_likely:
            return "not_feller_likely";
        case Regime::inconclusive:
            return "inconclusive";
    }
    return "unknown";
}

std::vector<double> make_grid(GridSpec const& spec)
{
    if (!(spec.start > 0) || spec.points_per_decade < 1 || spec.decades < 1)
    {
        throw DomainError("grid needs start > 0, points_per_decade >= 1, decades >= 1");
    }
    double const sign = spec.end == ScanEnd::zero ? -1.0 : 1.0;
    int const count = spec.points_per_decade * spec.decades + 1;
    std::vector<double> grid(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
    {
        grid[static_cast<std::size_t>(i)]
            = spec.start * std::pow(10.0, sign * i / spec.points_per_decade);
    }
    return grid;
}

RatioScan centered_feller_scan(LevyMeasure const& measure, GridSpec const& grid)
{
    return run_scan("centered_feller", grid, [&](double v) {
        double const v2 = measure.second_truncated_moment(v);
        if (!(v2 > 0))
        {
            throw NumericError("centered_feller: V2 vanishes at v = "
                               + std::to_string(v) + " (below the support)");
        }
        return v * v * measure.tail(v) / v2;
    });
}

RatioScan relative_stability_scan(LevyMeasure const& measure, GridSpec const& grid)
{
    return run_scan("relative_stability", grid, [&](double x) {
        return x * measure.tail(x) / measure.small_jump_mean(x);
    });
}

RatioScan stochastic_compactness_scan(LevyMeasure const& measure,
                                      GridSpec const& grid)
{
    return run_scan("stochastic_compactness", grid, [&](double t) {
        double const tail_t = measure.tail(t);
        double const first = measure.small_jump_mean(t) - t * tail_t;
        return t * first / (measure.second_truncated_moment(t) + t * t * tail_t);
    });
}

RvIndexEstimate rv_index_estimate(LevyMeasure const& measure, GridSpec const& grid)
{
    if (grid.decades < 3)
    {
        throw DomainError("rv_index_estimate needs a grid spanning at least 3 decades");
    }
    auto const x = make_grid(grid);
    auto const half = x.size() / 2;
    std::vector<double> lx;
    std::vector<double> ly;
    for (std::size_t i = half; i < x.size(); ++i)
    {
        double const tail = measure.tail(x[i]);
        if (!(tail > 0) || !std::isfinite(tail))
        {
            throw NumericError("rv_index_estimate: tail is zero or infinite on the grid");
        }
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(tail));
    }
    RvIndexEstimate est;
    auto const fit = fit_line(lx, ly);
    est.slope = fit.slope;
    est.residual = fit.residual;
    auto const mid = lx.size() / 2;
    est.slope_outer = fit_line({lx.begin(), lx.begin() + static_cast<long>(mid) + 1},
                               {ly.begin(), ly.begin() + static_cast<long>(mid) + 1})
                          .slope;
    est.slope_inner = fit_line({lx.begin() + static_cast<long>(mid), lx.end()},
                               {ly.begin() + static_cast<long>(mid), ly.end()})
                          .slope;

    // Scaling collapse t tail(v t^{1/b}) ~ v^{-b}
    double const b = -fit.slope;
    if (b > 1e-3)
    {
        double const t_base = grid.end == ScanEnd::zero ? 1e-2 : 1e2;
        for (double t : {t_base, t_base * t_base})
        {
            for (int k = -8; k <= 8; ++k)
            {
                double const v = std::pow(2.0, k / 8.0);
                double const log_arg = std::log(v) + std::log(t) / b;
                double const scaled = std::log(t) + std::log(measure.tail_at_log(log_arg));
                est.collapse_deviation
                    = std::fmax(est.collapse_deviation, std::fabs(scaled + b * std::log(v)));
            }
        }
    }
    return est;
}

DiagnosticsReport diagnose(LevyMeasure const& measure, GridSpec const& grid,
                           double inf_tolerance)
{
    DiagnosticsReport report;
    report.grid = grid;
    report.inf_tolerance = inf_tolerance;
    report.centered_feller = centered_feller_scan(measure, grid);
    report.relative_stability = relative_stability_scan(measure, grid);
    report.stochastic_compactness = stochastic_compactness_scan(measure, grid);
    report.rv = rv_index_estimate(measure, grid);
    report.inf_condition = report.relative_stability.liminf_estimate > inf_tolerance;
    report.beta = -report.rv.slope;

    auto const& rv = report.rv;
    bool const clean_fit = rv.residual < 0.05;
    double const drift = std::fabs(rv.slope_inner - rv.slope_outer);
    if (clean_fit && std::fabs(rv.slope_inner) < 0.15
        && std::fabs(rv.slope_inner) < std::fabs(rv.slope_outer) - 1e-3)
    {
        report.classification = Regime::slowly_varying;
    }
    else if (clean_fit && rv.slope_inner < -0.8 && rv.slope_inner < rv.slope_outer - 1e-3)
    {
        report.classification = Regime::index_one;
    }
    else if (clean_fit && drift < 0.01 && report.beta > 0.02 && report.beta < 0.98)
    {
        report.classification = Regime::regularly_varying;
    }
    else if (report.centered_feller.unbounded)
    {
        report.classification = Regime::not_feller_likely;
    }
    else if (report.inf_condition)
    {
        report.classification = Regime::centered_feller_likely;
    }
    report.disclaimer
        = "grid estimates over " + std::to_string(grid.decades)
          + " decades, not a proof: limsup/liminf are extrema on the grid "
            "half nearest the end, and the trend p-values come from an OLS fit";
    return report;
}

}  // namespace levyratio
