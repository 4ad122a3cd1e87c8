#include "levyratio/limits.hpp"

#include <cmath>
#include <numbers>

#include "levyratio/errors.hpp"
#include "levyratio/numerics.hpp"

namespace levyratio
{
namespace
{
constexpr double pi = std::numbers::pi;

void require_open_index(double beta, char const* what)
{
    if (!(beta > 0 && beta < 1))
    {
        throw DomainError(std::string(what) + " needs 0 < beta < 1");
    }
}

void require_unit_interval(double x, char const* what)
{
    if (!(x > 0 && x < 1))
    {
        throw DomainError(std::string(what) + " is defined on (0, 1)");
    }
}
}  // namespace

LimitLaw::LimitLaw(double b, WeightLaw w, double c)
    : beta(b), weights(std::move(w)), scale_c(c)
{
    if (!(beta >= 0 && beta <= 1))
    {
        throw DomainError("limit law index beta must lie in [0, 1]");
    }
    if (!(scale_c > 0))
    {
        throw DomainError("limit law scale c must be positive");
    }
}

double limit_cdf(double x, LimitLaw const& law)
{
    if (law.beta == 0)
    {
        return law.weights.cdf(x);
    }
    if (law.beta == 1)
    {
        return x >= law.weights.mean() ? 1.0 : 0.0;
    }
    auto const fm = law.weights.frac_moment_pair(x, law.beta);
    if (!(fm.m > 0))
    {
        throw NumericError("limit_cdf: vanishing fractional moment (degenerate F?)");
    }
    double const arg = fm.s / fm.m * std::tan(pi * law.beta / 2);
    double const value = 0.5 + std::atan(arg) / (pi * law.beta);
    return std::fmin(std::fmax(value, 0.0), 1.0);
}

double arcsine_density(double x)
{
    require_unit_interval(x, "arcsine_density");
    return 1 / (pi * std::sqrt(x * (1 - x)));
}

double lamperti_density(double x, double beta, double p)
{
    require_unit_interval(x, "lamperti_density");
    require_open_index(beta, "lamperti_density");
    require_unit_interval(p, "lamperti_density weight p");
    double const q = 1 - p;
    double const xb = std::pow(x, beta);
    double const yb = std::pow(1 - x, beta);
    double const num = std::sin(pi * beta) / pi * p * q * (xb / x) * (yb / (1 - x));
    double const den = p * p * yb * yb + q * q * xb * xb
                       + 2 * p * q * xb * yb * std::cos(pi * beta);
    return num / den;
}

std::complex<double> stable_cexp(double theta1, double theta2, LimitLaw const& law)
{
    require_open_index(law.beta, "stable_cexp");
    double const beta = law.beta;
    double const skew = std::tan(pi * beta / 2);
    auto arg = [=](double u) { return theta1 * u + theta2; };
    double const breakpoint = theta1 != 0 ? -theta2 / theta1 : 0.0;
    double const re = law.weights.expect(
        [&](double u) { return std::pow(std::fabs(arg(u)), beta); }, breakpoint);
    double const im = law.weights.expect(
        [&](double u) {
            double const a = arg(u);
            double const sign = static_cast<double>((a > 0) - (a < 0));
            return std::pow(std::fabs(a), beta) * sign;
        },
        breakpoint);
    return -law.scale_c * std::complex<double>(re, -skew * im);
}

FourierResult fourier_cdf(double x, LimitLaw const& law, FourierConfig const& cfg)
{
    require_open_index(law.beta, "fourier_cdf");
    double const beta = law.beta;
    // For u > 0 the exponent at (u, -u x) is u^beta times its value at (1, -x)
    std::complex<double> const kappa = stable_cexp(1.0, -x, law);
    if (!(kappa.real() < 0))
    {
        throw NumericError("fourier_cdf: characteristic function does not decay");
    }
    // Integrate Im Psi(u, -u x) / u du in z = log u, starting at the decay scale
    auto integrand = [&](double z) {
        double const scale = std::exp(beta * z);
        if (scale == 0 || -scale * kappa.real() > 745)
        {
            return 0.0;
        }
        return std::exp(scale * kappa).imag();
    };
    double const pivot = -std::log(-kappa.real()) / beta;
    auto const q = numerics::integrate_panels(integrand, pivot, cfg.panel_width / beta,
                                              cfg.panel_stop, 3, cfg.max_panels);
    FourierResult result;
    result.value = 0.5 - q.value / pi;
    // Quadrature error plus the neglected tails beyond the last panels
    result.error = (q.error + 2 * cfg.panel_stop / (1 - std::exp(-cfg.panel_width))) / pi;
    return result;
}

ExpectedRt expected_rt(double t, LevyMeasure const& measure, bool check_condition)
{
    if (!(t > 0) || !std::isfinite(t))
    {
        throw DomainError("expected_rt needs t > 0");
    }
    ExpectedRt result;

    // Decay scale: t Phi(u) = 1, or half the plateau for finite activity
    auto t_phi = [&](double z) { return t * measure.laplace_exponent_at_log(z).value; };
    double z_hi = 40;
    while (t_phi(z_hi) < 1 && z_hi < 1e8)
    {
        double const next = t_phi(2 * z_hi);
        if (!std::isfinite(next) || next <= t_phi(z_hi) * (1 + 1e-9))
        {
            break;
        }
        z_hi *= 2;
    }
    double const target = std::fmin(1.0, 0.5 * t_phi(z_hi));
    double z_lo = -40;
    while (t_phi(z_lo) > target && z_lo > -700)
    {
        z_lo *= 2;
    }
    auto const root = numerics::solve_decreasing(
        [&](double z) { return target - t_phi(z); }, z_lo, z_hi, 1e-6);
    double const pivot = root.root;

    // f_(t)(u) du = -t u^2 Phi''(u) e^{-t Phi(u)} d(log u)
    auto integrand = [&](double z) {
        auto const le = measure.laplace_exponent_at_log(z);
        if (!std::isfinite(le.value))
        {
            return 0.0;
        }
        return -t * le.second * std::exp(-t * le.value);
    };
    double const width = std::fmax(0.5, std::fabs(pivot) / 32);
    auto const q = numerics::integrate_panels(integrand, pivot, width, 1e-14, 3, 4000);
    result.value = q.value;
    result.error = q.error;
    if (result.value < -1e-9 || result.value > 1 + 1e-9)
    {
        throw NumericError("expected_rt: value outside [0, 1]");
    }
    result.value = std::fmin(std::fmax(result.value, 0.0), 1.0);

    if (check_condition)
    {
        double min_ratio = 1;
        // Diagnostics resolution and tolerance over 12 decades
        for (int k = 0; k <= 12 * 64; ++k)
        {
            double const x = std::pow(10.0, -k / 64.0);
            double const mass = measure.small_jump_mean(x);
            if (mass > 0)
            {
                min_ratio = std::fmin(min_ratio, x * measure.tail(x) / mass);
            }
        }
        if (min_ratio < 0.05)
        {
            result.warning = "x tail(x)/I(x) drops to "
                             + std::to_string(min_ratio)
                             + " on [1e-12, 1]; the E R_t integral formula may not apply";
        }
    }
    return result;
}

double limit_second_moment(LimitLaw const& law)
{
    auto const& w = law.weights;
    if (!std::isfinite(w.second_moment()))
    {
        throw DomainError("limit_second_moment needs EX^2 < inf");
    }
    return w.mean() * w.mean() + w.variance() * (1 - law.beta);
}

}  // namespace levyratio
