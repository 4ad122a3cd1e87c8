#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace levyratio
{
/*!
 * One-sample KS distance with the midpoint convention.
 *
 * Each distinct sample value is compared with the midpoint of the empirical
 * jump there: |F(x) - (F_n(x-) + F_n(x)) / 2|. For continuous F this is the
 * classical statistic minus 1/(2n); a sample compared with its own ECDF gives
 * exactly 1/(2n).
 */
double ks_statistic(std::vector<double> sample, std::function<double(double)> const& cdf);

//! Classical two-sample statistic sup |F_n - G_m|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

//! Asymptotic critical value sqrt(-log(alpha/2)/2) / sqrt(n).
double ks_critical(std::size_t n, double alpha);

//! Two-sample critical value at level alpha.
double ks_critical_two_sample(std::size_t n, std::size_t m, double alpha);

struct MeanSe
{
    double mean = 0;
    double se = 0;
    double variance = 0;  //!< unbiased sample variance
};

MeanSe mean_se(std::vector<double> const& values);

}  // namespace levyratio
