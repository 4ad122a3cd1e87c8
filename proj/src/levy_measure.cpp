#include "levyratio/levy_measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "levyratio/errors.hpp"
#include "levyratio/numerics.hpp"

namespace levyratio
{
namespace
{
constexpr double inf = std::numeric_limits<double>::infinity();

// Log-axis envelope range for numeric inversion
constexpr double envelope_z_lo = -745.0;
constexpr double envelope_z_hi = 709.0;
constexpr double envelope_dz = 0.25;

double safe_log(double x)
{
    return x > 0 ? std::log(x) : -inf;
}

void require_positive(double value, char const* what)
{
    if (!(value > 0))
    {
        throw DomainError(std::string(what) + " must be positive");
    }
}
}  // namespace

char const* to_string(MeasureKind kind)
{
    switch (kind)
    {
        case MeasureKind::stable_positive:
            return "stable";
        case MeasureKind::exp_compound_poisson:
            return "exp_compound_poisson";
        case MeasureKind::log_slowly_varying:
            return "log_slowly_varying";
        case MeasureKind::index_one_log_corrected:
            return "index_one_log_corrected";
        case MeasureKind::block_oscillating:
            return "block_oscillating";
        case MeasureKind::user_defined:
            return "user_defined";
    }
    return "unknown";
}

//---------------------------------------------------------------------------//
// NUMERIC DEFAULTS
//---------------------------------------------------------------------------//

double LevyMeasure::tail_at_log(double log_x) const
{
    return this->tail(std::exp(log_x));
}

auto LevyMeasure::envelope() const -> Envelope const&
{
    std::call_once(envelope_once_, [this] {
        envelope_.z_lo = envelope_z_lo;
        envelope_.dz = envelope_dz;
        auto const n = static_cast<std::size_t>(
            (envelope_z_hi - envelope_z_lo) / envelope_dz) + 1;
        envelope_.log_tail.resize(n);
        for (std::size_t i = 0; i < n; ++i)
        {
            double const z = envelope_z_lo + envelope_dz * static_cast<double>(i);
            envelope_.log_tail[i] = safe_log(this->tail_at_log(z));
        }
    });
    return envelope_;
}

double LevyMeasure::numeric_log_tail_inverse(double s) const
{
    require_positive(s, "tail_inverse argument");
    auto const& env = this->envelope();
    double const log_s = std::log(s);
    // First grid point whose tail is <= s
    auto const it = std::find_if(env.log_tail.begin(), env.log_tail.end(),
                                 [log_s](double lt) { return !(lt > log_s); });
    if (it == env.log_tail.begin())
    {
        // Empty set at grid resolution: phi(s) is 0 or below exp(z_lo)
        return -inf;
    }
    if (it == env.log_tail.end())
    {
        throw NumericError("tail_inverse: tail exceeds s=" + std::to_string(s)
                           + " across the whole inversion envelope");
    }
    auto const idx = static_cast<double>(it - env.log_tail.begin());
    double const z_hi = env.z_lo + env.dz * idx;
    double const z_lo = z_hi - env.dz;
    auto const root = numerics::solve_decreasing(
        [this, log_s](double z) { return safe_log(this->tail_at_log(z)) - log_s; },
        z_lo,
        z_hi,
        1e-13,
        200);
    if (!root.converged)
    {
        throw NumericError("tail_inverse: bisection did not converge for s="
                           + std::to_string(s));
    }
    return root.root;
}

double LevyMeasure::numeric_tail_inverse(double s) const
{
    return std::exp(this->numeric_log_tail_inverse(s));
}

double LevyMeasure::numeric_small_jump_mean(double x) const
{
    require_positive(x, "small_jump_mean argument");
    try
    {
        return numerics::integrate_from_zero(
                   [this](double y) { return this->tail(y); }, x)
            .value;
    }
    catch (NumericError const& e)
    {
        throw NumericError(std::string("small_jump_mean diverges: the tail "
                                       "is not integrable at 0 (")
                           + e.what() + ")");
    }
}

double LevyMeasure::numeric_second_truncated_moment(double v) const
{
    require_positive(v, "second_truncated_moment argument");
    double const tail_v = this->tail(v);
    return numerics::integrate_from_zero(
               [this, tail_v](double y) {
                   return 2 * y * (this->tail(y) - tail_v);
               },
               v)
        .value;
}

LaplaceExponent LevyMeasure::numeric_laplace_exponent(double u) const
{
    require_positive(u, "laplace_exponent argument");
    double const pivot = 1 / u;
    auto integrate = [&](auto weight) {
        return numerics::integrate_half_line(
                   [&](double y) {
                       // y underflowing to 0 carries no mass
                       double const damp = std::exp(-u * y);
                       return y > 0 && damp > 0 ? this->tail(y) * weight(y) * damp
                                                : 0.0;
                   },
                   pivot)
            .value;
    };
    LaplaceExponent result;
    result.value = u * integrate([](double) { return 1.0; });
    result.first = integrate([u](double y) { return 1 - u * y; });
    result.second = -integrate([u](double y) { return y * (2 - u * y); });
    return result;
}

double LevyMeasure::tail_inverse(double s) const
{
    return this->numeric_tail_inverse(s);
}

double LevyMeasure::log_tail_inverse(double s) const
{
    return this->numeric_log_tail_inverse(s);
}

double LevyMeasure::small_jump_mean(double x) const
{
    return this->numeric_small_jump_mean(x);
}

double LevyMeasure::second_truncated_moment(double v) const
{
    return this->numeric_second_truncated_moment(v);
}

LaplaceExponent LevyMeasure::laplace_exponent(double u) const
{
    return this->numeric_laplace_exponent(u);
}

LaplaceExponent LevyMeasure::laplace_exponent_at_log(double z) const
{
    double const u = std::exp(z);
    if (!std::isfinite(u))
    {
        return {inf, 0, 0};
    }
    auto r = this->laplace_exponent(u);
    r.first *= u;
    r.second *= u * u;
    return r;
}

double LevyMeasure::tail_integral_of_inverse(double s0) const
{
    require_positive(s0, "tail_integral_of_inverse argument");
    // int_{s0}^inf phi = int_0^inf (tail(y) - s0)^+ dy
    double const phi0 = this->tail_inverse(s0);
    if (!(phi0 > 0))
    {
        return 0;
    }
    return std::fmax(this->small_jump_mean(phi0) - s0 * phi0, 0.0);
}

double LevyMeasure::tail_integral_of_inverse_sq(double s0) const
{
    require_positive(s0, "tail_integral_of_inverse_sq argument");
    // int_{s0}^inf phi^2 = int_0^inf 2y (tail(y) - s0)^+ dy
    double const phi0 = this->tail_inverse(s0);
    if (!(phi0 > 0))
    {
        return 0;
    }
    double const v2 = this->second_truncated_moment(phi0);
    return std::fmax(v2 + phi0 * phi0 * (this->tail(phi0) - s0), 0.0);
}

//---------------------------------------------------------------------------//
// STABLE
//---------------------------------------------------------------------------//

StablePositiveMeasure::StablePositiveMeasure(double beta) : beta_(beta)
{
    if (!(beta > 0 && beta < 1))
    {
        throw DomainError("stable index beta must lie in (0, 1)");
    }
    gamma_one_minus_beta_ = std::tgamma(1 - beta);
}

std::string StablePositiveMeasure::name() const
{
    std::ostringstream os;
    os << "stable(beta=" << beta_ << ")";
    return os.str();
}

double StablePositiveMeasure::tail(double x) const
{
    return x > 0 ? std::pow(x, -beta_) : inf;
}

double StablePositiveMeasure::tail_at_log(double log_x) const
{
    return std::exp(-beta_ * log_x);
}

double StablePositiveMeasure::tail_inverse(double s) const
{
    require_positive(s, "tail_inverse argument");
    if (beta_ == 0.5)
    {
        return 1 / (s * s);
    }
    if (beta_ == 0.25)
    {
        double const s2 = s * s;
        return 1 / (s2 * s2);
    }
    return std::pow(s, -1 / beta_);
}

double StablePositiveMeasure::log_tail_inverse(double s) const
{
    require_positive(s, "tail_inverse argument");
    return -std::log(s) / beta_;
}

double StablePositiveMeasure::small_jump_mean(double x) const
{
    require_positive(x, "small_jump_mean argument");
    return std::pow(x, 1 - beta_) / (1 - beta_);
}

double StablePositiveMeasure::second_truncated_moment(double v) const
{
    require_positive(v, "second_truncated_moment argument");
    return beta_ * std::pow(v, 2 - beta_) / (2 - beta_);
}

LaplaceExponent StablePositiveMeasure::laplace_exponent(double u) const
{
    require_positive(u, "laplace_exponent argument");
    double const value = gamma_one_minus_beta_ * std::pow(u, beta_);
    return {value, beta_ * value / u, beta_ * (beta_ - 1) * value / (u * u)};
}

double StablePositiveMeasure::tail_integral_of_inverse(double s0) const
{
    require_positive(s0, "tail_integral_of_inverse argument");
    return beta_ * std::pow(s0, 1 - 1 / beta_) / (1 - beta_);
}

double StablePositiveMeasure::tail_integral_of_inverse_sq(double s0) const
{
    require_positive(s0, "tail_integral_of_inverse_sq argument");
    return beta_ * std::pow(s0, 1 - 2 / beta_) / (2 - beta_);
}

//---------------------------------------------------------------------------//
// EXPONENTIAL COMPOUND POISSON
//---------------------------------------------------------------------------//

double ExpCompoundPoissonMeasure::tail(double x) const
{
    return x > 0 ? std::exp(-x) : 1.0;
}

double ExpCompoundPoissonMeasure::tail_inverse(double s) const
{
    require_positive(s, "tail_inverse argument");
    return s < 1 ? -std::log(s) : 0.0;
}

double ExpCompoundPoissonMeasure::log_tail_inverse(double s) const
{
    require_positive(s, "tail_inverse argument");
    return s < 1 ? std::log(-std::log(s)) : -inf;
}

double ExpCompoundPoissonMeasure::small_jump_mean(double x) const
{
    require_positive(x, "small_jump_mean argument");
    return -std::expm1(-x);
}

double ExpCompoundPoissonMeasure::second_truncated_moment(double v) const
{
    require_positive(v, "second_truncated_moment argument");
    // int_0^v u^2 e^{-u} du = Gamma(3) P(3, v)
    return 2 * boost::math::gamma_p(3.0, v);
}

LaplaceExponent ExpCompoundPoissonMeasure::laplace_exponent(double u) const
{
    require_positive(u, "laplace_exponent argument");
    double const w = 1 / (1 + u);
    return {u * w, w * w, -2 * w * w * w};
}

double ExpCompoundPoissonMeasure::tail_integral_of_inverse(double s0) const
{
    require_positive(s0, "tail_integral_of_inverse argument");
    if (s0 >= 1)
    {
        return 0;
    }
    return 1 - s0 + s0 * std::log(s0);
}

double ExpCompoundPoissonMeasure::tail_integral_of_inverse_sq(double s0) const
{
    require_positive(s0, "tail_integral_of_inverse_sq argument");
    if (s0 >= 1)
    {
        return 0;
    }
    double const l = std::log(s0);
    return 2 - s0 * (l * l - 2 * l + 2);
}

//---------------------------------------------------------------------------//
// LOG SLOWLY VARYING
//---------------------------------------------------------------------------//

double LogSlowlyVaryingMeasure::tail(double x) const
{
    return x > 0 ? std::log1p(1 / x) : inf;
}

double LogSlowlyVaryingMeasure::tail_at_log(double log_x) const
{
    // log(1 + e^{-z})
    return log_x < 0 ? -log_x + std::log1p(std::exp(log_x))
                     : std::log1p(std::exp(-log_x));
}

double LogSlowlyVaryingMeasure::tail_inverse(double s) const
{
    require_positive(s, "tail_inverse argument");
    return 1 / std::expm1(s);
}

double LogSlowlyVaryingMeasure::log_tail_inverse(double s) const
{
    require_positive(s, "tail_inverse argument");
    if (s > 30)
    {
        return -s - std::log1p(-std::exp(-s));
    }
    return -std::log(std::expm1(s));
}

double LogSlowlyVaryingMeasure::small_jump_mean(double x) const
{
    require_positive(x, "small_jump_mean argument");
    return x * std::log1p(1 / x) + std::log1p(x);
}

double LogSlowlyVaryingMeasure::second_truncated_moment(double v) const
{
    require_positive(v, "second_truncated_moment argument");
    // Lambda(du) = du / (u (1 + u)), so V2(v) = v - log(1 + v)
    if (v < 1e-3)
    {
        return v * v * (0.5 - v * (1.0 / 3 - v * (0.25 - v / 5)));
    }
    return v - std::log1p(v);
}

namespace
{
// e^u E1(u)
double scaled_e1(double u)
{
    if (u < 600)
    {
        return std::exp(u) * boost::math::expint(1, u);
    }
    // Asymptotic series, truncated well before its smallest term
    double term = 1 / u;
    double sum = term;
    for (int k = 1; k < 30; ++k)
    {
        term *= -k / u;
        sum += term;
    }
    return sum;
}

// e^u E1(u) - 1/u
double scaled_e1_minus_reciprocal(double u)
{
    if (u < 40)
    {
        return scaled_e1(u) - 1 / u;
    }
    double term = 1 / u;
    double sum = 0;
    for (int k = 1; k < 36; ++k)
    {
        term *= -k / u;
        sum += term;
    }
    return sum;
}
}  // namespace

LaplaceExponent LogSlowlyVaryingMeasure::laplace_exponent(double u) const
{
    require_positive(u, "laplace_exponent argument");
    double const g = scaled_e1(u);
    double value = std::log(u) + std::numbers::egamma + g;
    if (u < 0.5)
    {
        // Phi = -expm1(u) (log u + gamma) + e^u sum_{k>=1} (-1)^{k+1} u^k / (k k!)
        double term = 1;
        double sum = 0;
        for (int k = 1; k < 30; ++k)
        {
            term *= -u / k;
            sum -= term / k;
        }
        value = -std::expm1(u) * (std::log(u) + std::numbers::egamma)
                + std::exp(u) * sum;
    }
    return {value, g, scaled_e1_minus_reciprocal(u)};
}

LaplaceExponent LogSlowlyVaryingMeasure::laplace_exponent_at_log(double z) const
{
    if (z < 30)
    {
        return LevyMeasure::laplace_exponent_at_log(z);
    }
    // Phi = z + gamma + 1/u + ..., u Phi' = 1 - 1/u + ..., u^2 Phi'' = -1 + 2/u ...
    double const r = std::exp(-z);
    return {z + std::numbers::egamma + r, 1 - r, -1 + 2 * r};
}

double LogSlowlyVaryingMeasure::tail_integral_of_inverse(double s0) const
{
    require_positive(s0, "tail_integral_of_inverse argument");
    return -std::log(-std::expm1(-s0));
}

double LogSlowlyVaryingMeasure::tail_integral_of_inverse_sq(double s0) const
{
    require_positive(s0, "tail_integral_of_inverse_sq argument");
    double const q = std::exp(-s0);
    if (q < 0.1)
    {
        // sum_{k>=2} q^k (k - 1) / k
        double sum = 0;
        double qk = q;
        for (int k = 2; k < 40; ++k)
        {
            qk *= q;
            sum += qk * (k - 1) / k;
        }
        return sum;
    }
    return q / (1 - q) + std::log1p(-q);
}

//---------------------------------------------------------------------------//
// INDEX ONE, LOG CORRECTED
//---------------------------------------------------------------------------//

double IndexOneLogCorrectedMeasure::tail(double x) const
{
    if (!(x > 0))
    {
        return inf;
    }
    double const l = std::log(std::numbers::e + 1 / x);
    return 1 / (x * l * l);
}

double IndexOneLogCorrectedMeasure::tail_at_log(double log_x) const
{
    // log(e + e^{-z})
    double const l = log_x < 0
                         ? -log_x + std::log1p(std::numbers::e * std::exp(log_x))
                         : std::log(std::numbers::e + std::exp(-log_x));
    return std::exp(-log_x - 2 * std::log(l));
}

double IndexOneLogCorrectedMeasure::log_tail_inverse(double s) const
{
    if (!(s > 0))
    {
        return inf;
    }
    if (std::isinf(s))
    {
        return -inf;
    }
    // Newton on g(y) = -y - 2 log L(y) - log s, L(y) = log(e + e^{-y})
    double const log_s = std::log(s);
    double y = -log_s;
    for (int i = 0; i < 60; ++i)
    {
        double const ex = std::numbers::e * std::exp(y);
        double const l = y < 0 ? -y + std::log1p(ex) : std::log(std::numbers::e + std::exp(-y));
        double const g = -y - 2 * std::log(l) - log_s;
        double const dg = -1 + 2 / (l * (ex + 1));
        double const step = g / dg;
        y -= step;
        if (std::fabs(step) <= 1e-15 * std::fmax(1.0, std::fabs(y)))
        {
            return y;
        }
    }
    return this->numeric_log_tail_inverse(s);
}

double IndexOneLogCorrectedMeasure::tail_inverse(double s) const
{
    return std::exp(this->log_tail_inverse(s));
}

double IndexOneLogCorrectedMeasure::small_jump_mean(double x) const
{
    require_positive(x, "small_jump_mean argument");
    // Substituting w = log(e + 1/y) gives
    // I(x) = 1/w(x) + e int_{w(x)}^inf dw / ((e^w - e) w^2)
    double const w0 = std::log(std::numbers::e + 1 / x);
    auto const rest = numerics::integrate_to_infinity(
        [](double w) {
            double const d = std::numbers::e * std::expm1(w - 1);
            return d > 0 ? 1 / (d * w * w) : 0.0;
        },
        w0);
    return 1 / w0 + std::numbers::e * rest.value;
}

LaplaceExponent IndexOneLogCorrectedMeasure::laplace_exponent(double u) const
{
    require_positive(u, "laplace_exponent argument");
    // With d = log(e + 1/y) - 1: y = 1 / (e expm1(d)) and
    // tail(y) dy = e^d / (expm1(d) (1 + d)^2) dd
    auto integrate = [u](auto weight) {
        auto f = [u, &weight](double d) {
            double const em1 = std::expm1(d);
            if (!(em1 > 0))
            {
                return 0.0;
            }
            double const y = 1 / (std::numbers::e * em1);
            double const uy = u * y;
            if (uy > 745)
            {
                return 0.0;
            }
            double const jacobian = -1 / (std::expm1(-d) * (1 + d) * (1 + d));
            return jacobian * weight(y, uy) * std::exp(-uy);
        };
        // d < 1 in log scale (the transition sits near d = u / e), d >= 1 directly
        auto f_log = [&f](double v) {
            double const d = std::exp(v);
            return f(d) * d;
        };
        double const v_mid = std::log(u / std::numbers::e);
        double lower = 0;
        if (v_mid < 0)
        {
            lower = numerics::integrate_smooth(f_log, v_mid - 12, v_mid).value
                    + numerics::integrate_smooth(f_log, v_mid, 0).value;
        }
        else
        {
            lower = numerics::integrate_smooth(f_log, -12, 0).value;
        }
        double const pivot = std::log(std::numbers::e + u) - 1;
        double upper = 0;
        if (pivot > 2)
        {
            // e^{-u y} < e^{-e^{40}} below pivot - 40
            upper = numerics::integrate_smooth(f, std::fmax(1.0, pivot - 40), pivot).value
                    + numerics::integrate_to_infinity(f, pivot).value;
        }
        else
        {
            upper = numerics::integrate_to_infinity(f, 1).value;
        }
        return lower + upper;
    };
    LaplaceExponent r;
    r.value = u * integrate([](double, double) { return 1.0; });
    r.first = integrate([](double, double uy) { return 1 - uy; });
    r.second = -integrate([](double y, double uy) { return y * (2 - uy); });
    return r;
}

//---------------------------------------------------------------------------//
// BLOCK OSCILLATING
//---------------------------------------------------------------------------//

namespace
{
constexpr int block_count = 4096;
double const log4 = std::log(4.0);
}  // namespace

BlockOscillatingMeasure::BlockOscillatingMeasure()
{
    log2_value_.resize(block_count);
    int previous = 0;  // tail(1) = 1
    for (int k = 0; k < block_count; ++k)
    {
        // Lower envelope x^{-1/4} at the block's left end 4^{-(k+1)}
        double const lower = 0.5 * (k + 1);
        int const value = previous <= lower ? k + 1 : previous;
        log2_value_[k] = value;
        previous = value;
    }
}

double BlockOscillatingMeasure::block_value(int k) const
{
    return std::ldexp(1.0, log2_value_[static_cast<std::size_t>(k)]);
}

int BlockOscillatingMeasure::block_of_log(double log_x) const
{
    int k = static_cast<int>(std::floor(-log_x / log4));
    return std::clamp(k, 0, block_count - 1);
}

double BlockOscillatingMeasure::tail(double x) const
{
    if (!(x > 0))
    {
        return inf;
    }
    if (x >= 1)
    {
        return 1 / std::sqrt(x);
    }
    // Locate k with 4^{-(k+1)} <= x < 4^{-k} using exact powers of two
    int k = block_of_log(std::log(x));
    while (k + 1 < block_count && x < std::ldexp(1.0, -2 * (k + 1)))
    {
        ++k;
    }
    while (k > 0 && x >= std::ldexp(1.0, -2 * k))
    {
        --k;
    }
    return block_value(k);
}

double BlockOscillatingMeasure::tail_at_log(double log_x) const
{
    if (log_x >= 0)
    {
        return std::exp(-0.5 * log_x);
    }
    if (log_x > -700)
    {
        return this->tail(std::exp(log_x));
    }
    return block_value(block_of_log(log_x));
}

double BlockOscillatingMeasure::tail_inverse(double s) const
{
    require_positive(s, "tail_inverse argument");
    if (s < 1)
    {
        return 1 / (s * s);
    }
    double const log2_s = std::log2(s);
    for (int k = 0; k < block_count; ++k)
    {
        if (log2_value_[k] > log2_s)
        {
            return std::ldexp(1.0, -2 * k);
        }
    }
    return 0;
}

std::vector<double> BlockOscillatingMeasure::jump_points(double x_min) const
{
    std::vector<double> points{1.0};
    for (int k = 0; k + 1 < block_count; ++k)
    {
        double const x = std::ldexp(1.0, -2 * (k + 1));
        if (x < x_min || x == 0)
        {
            break;
        }
        if (log2_value_[k + 1] > log2_value_[k])
        {
            points.push_back(x);
        }
    }
    return points;
}

namespace
{
// Atoms (position, mass) of the block measure below and at x = 1
struct Atom
{
    double position;
    double mass;
};

std::vector<Atom> block_atoms(BlockOscillatingMeasure const& m)
{
    std::vector<Atom> atoms;
    for (double p : m.jump_points(1e-300))
    {
        double const above = p >= 1 ? 1.0 : m.tail(p);
        double const below = m.tail(p * (1 - 1e-12));
        atoms.push_back({p, below - above});
    }
    return atoms;
}
}  // namespace

double BlockOscillatingMeasure::small_jump_mean(double x) const
{
    require_positive(x, "small_jump_mean argument");
    if (x > 1)
    {
        return this->small_jump_mean(1.0) + 2 * (std::sqrt(x) - 1);
    }
    int k = block_of_log(std::log(x));
    while (k + 1 < block_count && x < std::ldexp(1.0, -2 * (k + 1)))
    {
        ++k;
    }
    while (k > 0 && x >= std::ldexp(1.0, -2 * k))
    {
        --k;
    }
    double sum = block_value(k) * (x - std::ldexp(1.0, -2 * (k + 1)));
    for (int j = k + 1; j < block_count; ++j)
    {
        double const term = 0.75 * std::ldexp(1.0, log2_value_[j] - 2 * j);
        sum += term;
        // Remaining terms are bounded by 3 * 2^{-j}
        if (std::ldexp(3.0, -j) < 1e-17 * sum)
        {
            break;
        }
    }
    return sum;
}

double BlockOscillatingMeasure::second_truncated_moment(double v) const
{
    require_positive(v, "second_truncated_moment argument");
    double sum = 0;
    for (auto const& atom : block_atoms(*this))
    {
        if (atom.position <= v)
        {
            sum += atom.position * atom.position * atom.mass;
        }
    }
    if (v > 1)
    {
        sum += (std::pow(v, 1.5) - 1) / 3;
    }
    return sum;
}

LaplaceExponent BlockOscillatingMeasure::laplace_exponent(double u) const
{
    require_positive(u, "laplace_exponent argument");
    LaplaceExponent r;
    for (auto const& atom : block_atoms(*this))
    {
        double const e = std::exp(-u * atom.position);
        r.value += atom.mass * -std::expm1(-u * atom.position);
        r.first += atom.mass * atom.position * e;
        r.second -= atom.mass * atom.position * atom.position * e;
    }
    // Continuous part x^{-1/2} on (1, inf)
    double const sqrt_u = std::sqrt(u);
    r.value += -std::expm1(-u) + sqrt_u * boost::math::tgamma(0.5, u);
    r.first += 0.5 * boost::math::tgamma(0.5, u) / sqrt_u;
    r.second -= 0.5 * boost::math::tgamma(1.5, u) / (u * sqrt_u);
    return r;
}

//---------------------------------------------------------------------------//
// USER DEFINED
//---------------------------------------------------------------------------//

FunctionMeasure::FunctionMeasure(std::string name,
                                 std::function<double(double)> tail,
                                 bool tail_at_zero_infinite,
                                 double support_upper)
    : name_(std::move(name))
    , tail_(std::move(tail))
    , infinite_(tail_at_zero_infinite)
    , support_upper_(support_upper)
{
}

StepMeasure::StepMeasure(std::vector<double> x, std::vector<double> tail_values)
    : x_(std::move(x)), values_(std::move(tail_values))
{
    if (x_.size() != values_.size() || x_.size() < 2)
    {
        throw DomainError("step tail needs at least two (x, tail) knots");
    }
    for (std::size_t i = 0; i < x_.size(); ++i)
    {
        if (!(x_[i] > 0) || !(values_[i] >= 0) || !std::isfinite(values_[i]))
        {
            throw DomainError("step tail knots must be positive with finite "
                              "nonnegative values");
        }
        if (i > 0 && (!(x_[i] > x_[i - 1]) || values_[i] > values_[i - 1]))
        {
            throw DomainError("step tail must have increasing x and "
                              "nonincreasing values");
        }
    }
    if (values_.back() != 0)
    {
        throw DomainError("step tail must vanish at its last knot");
    }
}

double StepMeasure::tail(double x) const
{
    auto const it = std::upper_bound(x_.begin(), x_.end(), x);
    if (it == x_.begin())
    {
        return values_.front();
    }
    return values_[static_cast<std::size_t>(it - x_.begin()) - 1];
}

double StepMeasure::tail_inverse(double s) const
{
    require_positive(s, "tail_inverse argument");
    double result = 0;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i)
    {
        if (values_[i] > s)
        {
            result = x_[i + 1];
        }
    }
    return result;
}

double StepMeasure::small_jump_mean(double x) const
{
    require_positive(x, "small_jump_mean argument");
    double sum = values_.front() * std::fmin(x, x_.front());
    for (std::size_t i = 0; i + 1 < x_.size() && x_[i] < x; ++i)
    {
        sum += values_[i] * (std::fmin(x, x_[i + 1]) - x_[i]);
    }
    return sum;
}

double StepMeasure::second_truncated_moment(double v) const
{
    require_positive(v, "second_truncated_moment argument");
    double sum = 0;
    for (std::size_t i = 1; i < x_.size() && x_[i] <= v; ++i)
    {
        sum += x_[i] * x_[i] * (values_[i - 1] - values_[i]);
    }
    return sum;
}

LaplaceExponent StepMeasure::laplace_exponent(double u) const
{
    require_positive(u, "laplace_exponent argument");
    LaplaceExponent r;
    for (std::size_t i = 1; i < x_.size(); ++i)
    {
        double const mass = values_[i - 1] - values_[i];
        double const p = x_[i];
        double const e = std::exp(-u * p);
        r.value += mass * -std::expm1(-u * p);
        r.first += mass * p * e;
        r.second -= mass * p * p * e;
    }
    return r;
}

//---------------------------------------------------------------------------//
// SCALED
//---------------------------------------------------------------------------//

ScaledMeasure::ScaledMeasure(MeasurePtr base, double scale)
    : base_(std::move(base)), scale_(scale)
{
    require_positive(scale, "jump scale");
}

std::string ScaledMeasure::name() const
{
    std::ostringstream os;
    os << "scaled(" << base_->name() << ", c=" << scale_ << ")";
    return os.str();
}

double ScaledMeasure::tail_at_log(double log_x) const
{
    return base_->tail_at_log(log_x - std::log(scale_));
}

double ScaledMeasure::tail_inverse(double s) const
{
    return scale_ * base_->tail_inverse(s);
}

double ScaledMeasure::log_tail_inverse(double s) const
{
    return std::log(scale_) + base_->log_tail_inverse(s);
}

double ScaledMeasure::small_jump_mean(double x) const
{
    return scale_ * base_->small_jump_mean(x / scale_);
}

double ScaledMeasure::second_truncated_moment(double v) const
{
    return scale_ * scale_ * base_->second_truncated_moment(v / scale_);
}

LaplaceExponent ScaledMeasure::laplace_exponent(double u) const
{
    auto r = base_->laplace_exponent(scale_ * u);
    r.first *= scale_;
    r.second *= scale_ * scale_;
    return r;
}

LaplaceExponent ScaledMeasure::laplace_exponent_at_log(double z) const
{
    return base_->laplace_exponent_at_log(z + std::log(scale_));
}

double ScaledMeasure::tail_integral_of_inverse(double s0) const
{
    return scale_ * base_->tail_integral_of_inverse(s0);
}

double ScaledMeasure::tail_integral_of_inverse_sq(double s0) const
{
    return scale_ * scale_ * base_->tail_integral_of_inverse_sq(s0);
}

//---------------------------------------------------------------------------//
// FACTORIES
//---------------------------------------------------------------------------//

MeasurePtr make_stable(double beta)
{
    return std::make_shared<StablePositiveMeasure>(beta);
}

MeasurePtr make_exp_compound_poisson()
{
    return std::make_shared<ExpCompoundPoissonMeasure>();
}

MeasurePtr make_log_slowly_varying()
{
    return std::make_shared<LogSlowlyVaryingMeasure>();
}

MeasurePtr make_index_one_log_corrected()
{
    return std::make_shared<IndexOneLogCorrectedMeasure>();
}

MeasurePtr make_block_oscillating()
{
    return std::make_shared<BlockOscillatingMeasure>();
}

MeasurePtr make_scaled(MeasurePtr base, double scale)
{
    return std::make_shared<ScaledMeasure>(std::move(base), scale);
}

MeasurePtr make_step_from_csv(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open tail CSV '" + path + "'");
    }
    std::vector<double> xs;
    std::vector<double> values;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty() || line[0] == '#')
        {
            continue;
        }
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        double x = 0;
        double v = 0;
        if (!(fields >> x >> v))
        {
            if (xs.empty())
            {
                continue;  // header row
            }
            throw ConfigError(path + ":" + std::to_string(line_no)
                              + ": expected two numeric columns");
        }
        xs.push_back(x);
        values.push_back(v);
    }
    auto measure = std::make_shared<StepMeasure>(std::move(xs), std::move(values));
    validate_small_jump_condition(*measure);
    return measure;
}

void validate_small_jump_condition(LevyMeasure const& measure)
{
    double i1 = 0;
    try
    {
        i1 = measure.small_jump_mean(1.0);
    }
    catch (NumericError const& e)
    {
        throw DomainError(measure.name()
                          + " violates int_0^1 y Lambda(dy) < inf: "
                          + e.what());
    }
    if (!std::isfinite(i1))
    {
        throw DomainError(measure.name()
                          + " violates int_0^1 y Lambda(dy) < inf");
    }
}

}  // namespace levyratio
