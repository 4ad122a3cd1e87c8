#include "levyratio/stats.hpp"

#include <algorithm>
#include <cmath>

#include "levyratio/errors.hpp"

namespace levyratio
{
double ks_statistic(std::vector<double> sample, std::function<double(double)> const& cdf)
{
    if (sample.empty())
    {
        throw DomainError("ks_statistic needs a nonempty sample");
    }
    std::sort(sample.begin(), sample.end());
    double const n = static_cast<double>(sample.size());
    double d = 0;
    std::size_t i = 0;
    while (i < sample.size())
    {
        std::size_t j = i;
        while (j + 1 < sample.size() && sample[j + 1] == sample[i])
        {
            ++j;
        }
        double const below = static_cast<double>(i) / n;
        double const at = static_cast<double>(j + 1) / n;
        d = std::fmax(d, std::fabs(cdf(sample[i]) - 0.5 * (below + at)));
        i = j + 1;
    }
    return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty())
    {
        throw DomainError("ks_two_sample needs nonempty samples");
    }
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double const na = static_cast<double>(a.size());
    double const nb = static_cast<double>(b.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0;
    while (i < a.size() && j < b.size())
    {
        double const x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x)
        {
            ++i;
        }
        while (j < b.size() && b[j] == x)
        {
            ++j;
        }
        d = std::fmax(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_critical(std::size_t n, double alpha)
{
    if (n == 0 || !(alpha > 0 && alpha < 1))
    {
        throw DomainError("ks_critical needs n >= 1 and 0 < alpha < 1");
    }
    return std::sqrt(-0.5 * std::log(alpha / 2)) / std::sqrt(static_cast<double>(n));
}

double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha)
{
    if (n == 0 || m == 0)
    {
        throw DomainError("ks_critical_two_sample needs nonempty samples");
    }
    double const nn = static_cast<double>(n);
    double const mm = static_cast<double>(m);
    return ks_critical(1, alpha) * std::sqrt((nn + mm) / (nn * mm));
}

MeanSe mean_se(std::vector<double> const& values)
{
    MeanSe r;
    if (values.empty())
    {
        return r;
    }
    double const n = static_cast<double>(values.size());
    for (double v : values)
    {
        r.mean += v;
    }
    r.mean /= n;
    if (values.size() > 1)
    {
        double ss = 0;
        for (double v : values)
        {
            ss += (v - r.mean) * (v - r.mean);
        }
        r.variance = ss / (n - 1);
        r.se = std::sqrt(r.variance / n);
    }
    return r;
}

}  // namespace levyratio
