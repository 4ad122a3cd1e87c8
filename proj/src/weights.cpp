#include "levyratio/weights.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "levyratio/errors.hpp"
#include "levyratio/numerics.hpp"

namespace levyratio
{
namespace
{
double sgn(double v)
{
    return static_cast<double>((v > 0) - (v < 0));
}

double normal_density(double z)
{
    return std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
}
}  // namespace

char const* to_string(WeightKind kind)
{
    switch (kind)
    {
        case WeightKind::two_point:
            return "two_point";
        case WeightKind::uniform:
            return "uniform";
        case WeightKind::gaussian:
            return "gaussian";
        case WeightKind::empirical:
            return "empirical";
    }
    return "unknown";
}

WeightLaw WeightLaw::two_point(double a, double b, double p, bool allow_degenerate)
{
    if (!(p >= 0 && p <= 1))
    {
        throw DomainError("two-point probability must lie in [0, 1]");
    }
    WeightLaw law;
    law.kind_ = WeightKind::two_point;
    law.a_ = a;
    law.b_ = b;
    law.p_ = p;
    law.atoms_ = {{a, 1 - p}, {b, p}};
    if (a > b)
    {
        std::swap(law.atoms_[0], law.atoms_[1]);
    }
    law.finish_atomic(allow_degenerate);
    return law;
}

WeightLaw WeightLaw::uniform(double a, double b)
{
    if (!(a < b))
    {
        throw DomainError("uniform weights need a < b");
    }
    WeightLaw law;
    law.kind_ = WeightKind::uniform;
    law.a_ = a;
    law.b_ = b;
    law.mean_ = 0.5 * (a + b);
    law.second_moment_ = (a * a + a * b + b * b) / 3;
    if (a >= 0 || b <= 0)
    {
        law.abs_mean_ = std::fabs(law.mean_);
    }
    else
    {
        law.abs_mean_ = (a * a + b * b) / (2 * (b - a));
    }
    return law;
}

WeightLaw WeightLaw::gaussian(double mu, double sigma)
{
    if (!(sigma > 0))
    {
        throw DomainError("gaussian weights need sigma > 0");
    }
    WeightLaw law;
    law.kind_ = WeightKind::gaussian;
    law.a_ = mu;
    law.b_ = sigma;
    law.mean_ = mu;
    law.second_moment_ = mu * mu + sigma * sigma;
    double const r = mu / sigma;
    law.abs_mean_ = sigma * 2 * normal_density(r)
                    + mu * std::erf(r / std::numbers::sqrt2);
    return law;
}

WeightLaw WeightLaw::empirical(std::vector<double> values, bool allow_degenerate)
{
    if (values.empty())
    {
        throw DomainError("empirical weights need at least one value");
    }
    std::sort(values.begin(), values.end());
    WeightLaw law;
    law.kind_ = WeightKind::empirical;
    double const w = 1.0 / static_cast<double>(values.size());
    law.atoms_.reserve(values.size());
    for (double v : values)
    {
        law.atoms_.push_back({v, w});
    }
    law.finish_atomic(allow_degenerate);
    return law;
}

WeightLaw WeightLaw::empirical_from_csv(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw ConfigError("cannot open weight CSV '" + path + "'");
    }
    std::vector<double> values;
    std::string line;
    while (std::getline(in, line))
    {
        if (line.empty() || line[0] == '#')
        {
            continue;
        }
        std::istringstream fields(line.substr(0, line.find(',')));
        double v = 0;
        if (fields >> v)
        {
            values.push_back(v);
        }
        else if (!values.empty())
        {
            throw ConfigError(path + ": non-numeric weight value '" + line + "'");
        }
    }
    return empirical(std::move(values));
}

void WeightLaw::finish_atomic(bool allow_degenerate)
{
    double total = 0;
    for (auto const& atom : atoms_)
    {
        total += atom.probability;
        mean_ += atom.probability * atom.value;
        abs_mean_ += atom.probability * std::fabs(atom.value);
        second_moment_ += atom.probability * atom.value * atom.value;
    }
    if (std::fabs(total - 1) > 1e-10)
    {
        throw DomainError("weight probabilities must sum to 1");
    }
    // Variance from centered values to avoid cancellation
    double var = 0;
    for (auto const& atom : atoms_)
    {
        var += atom.probability * (atom.value - mean_) * (atom.value - mean_);
    }
    if (!(var > 0) && !allow_degenerate)
    {
        throw DomainError("weight law is degenerate (Var(X) = 0)");
    }
}

std::string WeightLaw::name() const
{
    std::ostringstream os;
    switch (kind_)
    {
        case WeightKind::two_point:
            os << "two_point(a=" << a_ << ", b=" << b_ << ", p=" << p_ << ")";
            break;
        case WeightKind::uniform:
            os << "uniform(a=" << a_ << ", b=" << b_ << ")";
            break;
        case WeightKind::gaussian:
            os << "gaussian(mu=" << a_ << ", sigma=" << b_ << ")";
            break;
        case WeightKind::empirical:
            os << "empirical(n=" << atoms_.size() << ")";
            break;
    }
    return os.str();
}

double WeightLaw::p_moment(double p) const
{
    return this->expect([p](double u) { return std::pow(std::fabs(u), p); }, 0.0);
}

double WeightLaw::cdf(double x) const
{
    switch (kind_)
    {
        case WeightKind::uniform:
            return std::clamp((x - a_) / (b_ - a_), 0.0, 1.0);
        case WeightKind::gaussian:
            return 0.5 * std::erfc(-(x - a_) / (b_ * std::numbers::sqrt2));
        default:
            break;
    }
    double total = 0;
    for (auto const& atom : atoms_)
    {
        if (atom.value <= x)
        {
            total += atom.probability;
        }
    }
    return std::fmin(total, 1.0);
}

double WeightLaw::density(double x) const
{
    switch (kind_)
    {
        case WeightKind::uniform:
            return x >= a_ && x <= b_ ? 1 / (b_ - a_) : 0.0;
        case WeightKind::gaussian:
            return normal_density((x - a_) / b_) / b_;
        default:
            throw DomainError("atomic weight law has no density");
    }
}

double WeightLaw::expect(std::function<double(double)> const& g,
                         double breakpoint) const
{
    if (this->is_atomic())
    {
        double sum = 0;
        for (auto const& atom : atoms_)
        {
            sum += atom.probability * g(atom.value);
        }
        return sum;
    }
    if (kind_ == WeightKind::uniform)
    {
        double const scale = 1 / (b_ - a_);
        auto f = [&](double u) { return g(u) * scale; };
        if (breakpoint > a_ && breakpoint < b_)
        {
            return numerics::integrate(f, a_, breakpoint).value
                   + numerics::integrate(f, breakpoint, b_).value;
        }
        return numerics::integrate(f, a_, b_).value;
    }
    // Gaussian: standard coordinates on [-40, 40], split at the breakpoint
    double const mu = a_;
    double const sigma = b_;
    auto f = [&](double z) {
        return g(mu + sigma * z) * std::exp(-0.5 * z * z) / std::sqrt(2 * std::numbers::pi);
    };
    constexpr double z_max = 40;
    double const zb = (breakpoint - mu) / sigma;
    if (zb > -z_max && zb < z_max)
    {
        return numerics::integrate(f, -z_max, zb).value
               + numerics::integrate(f, zb, z_max).value;
    }
    return numerics::integrate(f, -z_max, z_max).value;
}

FracMoments WeightLaw::frac_moment_pair(double x, double beta) const
{
    if (!(beta > 0 && beta < 1))
    {
        throw DomainError("frac_moment_pair needs 0 < beta < 1");
    }
    FracMoments result;
    if (this->is_atomic())
    {
        for (auto const& atom : atoms_)
        {
            double const d = x - atom.value;
            double const w = atom.probability * std::pow(std::fabs(d), beta);
            result.m += w;
            result.s += w * sgn(d);
        }
        return result;
    }
    if (kind_ == WeightKind::uniform)
    {
        double const q = beta + 1;
        double const norm = 1 / (q * (b_ - a_));
        if (x <= a_)
        {
            result.m = (std::pow(b_ - x, q) - std::pow(a_ - x, q)) * norm;
            result.s = -result.m;
        }
        else if (x >= b_)
        {
            result.m = (std::pow(x - a_, q) - std::pow(x - b_, q)) * norm;
            result.s = result.m;
        }
        else
        {
            double const left = std::pow(x - a_, q);
            double const right = std::pow(b_ - x, q);
            result.m = (left + right) * norm;
            result.s = (left - right) * norm;
        }
        return result;
    }
    result.m = this->expect(
        [x, beta](double u) { return std::pow(std::fabs(u - x), beta); }, x);
    result.s = this->expect(
        [x, beta](double u) {
            return std::pow(std::fabs(u - x), beta) * sgn(x - u);
        },
        x);
    return result;
}

}  // namespace levyratio
