#pragma once

#include <functional>

namespace levyratio::numerics
{
using ScalarFunction = std::function<double(double)>;

struct QuadResult
{
    double value = 0;
    double error = 0;
};

//! Default relative tolerance for the quadrature helpers.
inline constexpr double default_rel_tol = 1e-11;

// Integrate over a finite interval; endpoint singularities are allowed
QuadResult integrate(ScalarFunction const& f, double a, double b,
                     double rel_tol = default_rel_tol);

// Integrate a smooth function with adaptive Gauss-Kronrod
QuadResult integrate_smooth(ScalarFunction const& f, double a, double b,
                            double rel_tol = default_rel_tol);

// Integrate over [a, infinity)
QuadResult integrate_to_infinity(ScalarFunction const& f, double a,
                                 double rel_tol = default_rel_tol);

// Integrate f over (0, x] in the coordinate y = x exp(-w)
QuadResult integrate_from_zero(ScalarFunction const& f, double x,
                               double rel_tol = default_rel_tol);

// Integrate f over (0, infinity), split at `pivot` into two log-axis pieces
QuadResult integrate_half_line(ScalarFunction const& f, double pivot,
                               double rel_tol = default_rel_tol);

/*!
 * Sum panel integrals outward from a pivot in both directions.
 *
 * Panels [pivot + k*width, pivot + (k+1)*width] are integrated with
 * Gauss-Kronrod until a panel contributes less than `abs_stop` (after at
 * least `min_panels` panels in that direction) or `max_panels` is reached.
 * Throws NumericError if a direction does not settle.
 */
QuadResult integrate_panels(ScalarFunction const& f, double pivot,
                            double width, double abs_stop,
                            int min_panels = 3, int max_panels = 4000);

//! Result of a bracketed monotone root solve.
struct RootResult
{
    double root = 0;
    int iterations = 0;
    bool converged = false;
};

/*!
 * Locate sup{x in [lo, hi] : g(x) > 0} for a nonincreasing g, to absolute
 * tolerance in x. Plateaus and jumps of g are handled; smooth crossings
 * converge superlinearly through Illinois steps with a bisection fallback.
 *
 * Precondition: g(lo) > 0 >= g(hi).
 */
RootResult solve_decreasing(ScalarFunction const& g, double lo, double hi,
                            double abs_tol, int max_iter = 200);

}  // namespace levyratio::numerics
