#pragma once

#include <complex>
#include <string>

#include "levy_measure.hpp"
#include "weights.hpp"

namespace levyratio
{
/*!
 * Limit law of T_t in the regime of index beta.
 *
 * beta in (0,1) gives the generalized arcsine (Lamperti-type) family,
 * beta = 0 the weight law itself and beta = 1 a point mass at EX. The scale
 * c of the limiting stable pair does not affect the ratio law.
 */
struct LimitLaw
{
    double beta = 0.5;
    WeightLaw weights;
    double scale_c = 1;

    LimitLaw(double beta, WeightLaw weights, double scale_c = 1);
};

//! P{T <= x} for the limit law.
double limit_cdf(double x, LimitLaw const& law);

//! (x(1-x))^{-1/2} / pi on (0, 1).
double arcsine_density(double x);

//! Density of the two-point ratio law with index beta and weight p at 1.
double lamperti_density(double x, double beta, double p);

/*!
 * Log characteristic function of (U, V) at (theta1, theta2):
 * -c int |theta1 u + theta2|^beta (1 - i sgn(.) tan(pi beta / 2)) F(du).
 */
std::complex<double> stable_cexp(double theta1, double theta2, LimitLaw const& law);

struct FourierConfig
{
    //! Panel width in log(u)
    double panel_width = 0.5;
    //! Stop once a panel contributes less than this
    double panel_stop = 1e-14;
    int max_panels = 4000;
};

struct FourierResult
{
    double value = 0;
    double error = 0;
};

//! P{U/V <= x} by numerical inversion of the characteristic function.
FourierResult fourier_cdf(double x, LimitLaw const& law, FourierConfig const& cfg = {});

struct ExpectedRt
{
    double value = 0;
    double error = 0;
    //! Empty unless the relative-stability ratio looks degenerate near 0
    std::string warning;
};

/*!
 * E R_t = int_0^inf -t u Phi''(u) exp(-t Phi(u)) du.
 *
 * If check_condition is set, x tail(x) / I(x) is screened on [1e-12, 1] and a
 * warning is attached when it approaches 0 (the formula then need not hold).
 */
ExpectedRt expected_rt(double t, LevyMeasure const& measure, bool check_condition = true);

//! (EX)^2 + Var(X) (1 - beta).
double limit_second_moment(LimitLaw const& law);

}  // namespace levyratio
