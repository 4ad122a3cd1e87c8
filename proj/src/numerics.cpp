#include "levyratio/numerics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "levyratio/errors.hpp"

namespace levyratio::numerics
{
namespace
{
// Relative error above which a quadrature result is treated as divergent
constexpr double divergence_ratio = 1e-5;

void check(QuadResult const& r, double l1, char const* what)
{
    double const scale = std::fmax(std::fabs(r.value), l1);
    if (!std::isfinite(r.value) || !std::isfinite(r.error)
        || r.error > divergence_ratio * scale + 1e-300)
    {
        throw NumericError(std::string(what)
                           + ": quadrature did not converge (value "
                           + std::to_string(r.value) + ", error estimate "
                           + std::to_string(r.error) + ")");
    }
}

boost::math::quadrature::tanh_sinh<double>& tanh_sinh_rule()
{
    thread_local boost::math::quadrature::tanh_sinh<double> rule(15);
    return rule;
}

boost::math::quadrature::exp_sinh<double>& exp_sinh_rule()
{
    thread_local boost::math::quadrature::exp_sinh<double> rule(12);
    return rule;
}
}  // namespace

QuadResult
integrate(ScalarFunction const& f, double a, double b, double rel_tol)
{
    if (!(a < b))
    {
        return {};
    }
    QuadResult r;
    double l1 = 0;
    r.value = tanh_sinh_rule().integrate(f, a, b, rel_tol, &r.error, &l1);
    check(r, l1, "integrate");
    return r;
}

QuadResult
integrate_smooth(ScalarFunction const& f, double a, double b, double rel_tol)
{
    if (!(a < b))
    {
        return {};
    }
    QuadResult r;
    double l1 = 0;
    r.value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 15, rel_tol, &r.error, &l1);
    check(r, l1, "integrate_smooth");
    return r;
}

QuadResult
integrate_to_infinity(ScalarFunction const& f, double a, double rel_tol)
{
    QuadResult r;
    double l1 = 0;
    r.value = exp_sinh_rule().integrate(
        [&](double w) { return f(a + w); },
        0.0,
        std::numeric_limits<double>::infinity(),
        rel_tol,
        &r.error,
        &l1);
    check(r, l1, "integrate_to_infinity");
    return r;
}

QuadResult integrate_from_zero(ScalarFunction const& f, double x, double rel_tol)
{
    if (!(x > 0))
    {
        return {};
    }
    QuadResult r;
    double l1 = 0;
    r.value = exp_sinh_rule().integrate(
        [&](double w) {
            double const y = x * std::exp(-w);
            return y > 0 ? f(y) * y : 0.0;
        },
        0.0,
        std::numeric_limits<double>::infinity(),
        rel_tol,
        &r.error,
        &l1);
    check(r, l1, "integrate_from_zero");
    return r;
}

QuadResult
integrate_half_line(ScalarFunction const& f, double pivot, double rel_tol)
{
    auto lower = integrate_from_zero(f, pivot, rel_tol);
    QuadResult upper;
    double l1 = 0;
    upper.value = exp_sinh_rule().integrate(
        [&](double w) {
            double const y = pivot * std::exp(w);
            return std::isfinite(y) ? f(y) * y : 0.0;
        },
        0.0,
        std::numeric_limits<double>::infinity(),
        rel_tol,
        &upper.error,
        &l1);
    check(upper, l1, "integrate_half_line");
    return {lower.value + upper.value, lower.error + upper.error};
}

QuadResult integrate_panels(ScalarFunction const& f, double pivot,
                            double width, double abs_stop, int min_panels,
                            int max_panels)
{
    QuadResult total;
    for (int direction : {+1, -1})
    {
        bool settled = false;
        for (int k = 0; k < max_panels; ++k)
        {
            double a = pivot + direction * k * width;
            double b = a + direction * width;
            if (direction < 0)
            {
                std::swap(a, b);
            }
            double err = 0;
            double l1 = 0;
            double const v
                = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
                    f, a, b, 10, 1e-13, &err, &l1);
            if (!std::isfinite(v))
            {
                throw NumericError("integrate_panels: non-finite panel");
            }
            total.value += v;
            total.error += err;
            if (k + 1 >= min_panels && l1 < abs_stop)
            {
                settled = true;
                break;
            }
        }
        if (!settled)
        {
            throw NumericError(
                "integrate_panels: integrand did not decay within the panel "
                "budget");
        }
    }
    return total;
}

RootResult solve_decreasing(ScalarFunction const& g, double lo, double hi,
                            double abs_tol, int max_iter)
{
    double glo = g(lo);
    double ghi = g(hi);
    RootResult result;
    int side = 0;
    for (int i = 0; i < max_iter; ++i)
    {
        result.iterations = i + 1;
        if (hi - lo <= abs_tol)
        {
            result.root = lo;
            result.converged = true;
            return result;
        }
        double mid = 0.5 * (lo + hi);
        if (std::isfinite(glo) && std::isfinite(ghi) && glo > 0 && ghi < 0)
        {
            // Illinois false position, kept away from the bracket ends
            double const guess = lo + (hi - lo) * glo / (glo - ghi);
            double const margin = 1e-3 * (hi - lo);
            if (guess > lo + margin && guess < hi - margin)
            {
                mid = guess;
            }
        }
        double const gm = g(mid);
        if (gm > 0)
        {
            lo = mid;
            glo = gm;
            if (side == -1)
            {
                ghi *= 0.5;
            }
            side = -1;
        }
        else
        {
            hi = mid;
            ghi = gm;
            if (side == 1)
            {
                glo *= 0.5;
            }
            side = 1;
        }
    }
    result.root = lo;
    return result;
}

}  // namespace levyratio::numerics
