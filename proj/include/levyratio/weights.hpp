#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rng.hpp"

namespace levyratio
{
enum class WeightKind
{
    two_point,
    uniform,
    gaussian,
    empirical
};

char const* to_string(WeightKind kind);

//! Pair of fractional moments about a point x.
struct FracMoments
{
    double m = 0;  //!< int |u - x|^beta F(du)
    double s = 0;  //!< int |u - x|^beta sgn(x - u) F(du), with sgn(0) = 0
};

//---------------------------------------------------------------------------//
/*!
 * Distribution F of the weights X attached to each jump.
 *
 * Discrete laws (two-point, empirical) keep their atoms and evaluate every
 * functional as an exact sum; continuous laws use closed forms or
 * quadrature. Construction rejects degenerate laws unless explicitly
 * allowed, since the ratio theory needs Var(X) > 0.
 */
class WeightLaw
{
  public:
    struct Atom
    {
        double value;
        double probability;
    };

    //! X = b with probability p, else a.
    static WeightLaw two_point(double a, double b, double p,
                               bool allow_degenerate = false);
    static WeightLaw uniform(double a, double b);
    static WeightLaw gaussian(double mu, double sigma);
    //! Equal-probability atoms at the given values.
    static WeightLaw empirical(std::vector<double> values,
                               bool allow_degenerate = false);
    //! One-column CSV of values.
    static WeightLaw empirical_from_csv(std::string const& path);

    WeightKind kind() const { return kind_; }
    std::string name() const;
    bool is_atomic() const { return !atoms_.empty(); }
    std::vector<Atom> const& atoms() const { return atoms_; }

    double mean() const { return mean_; }
    double abs_mean() const { return abs_mean_; }
    double second_moment() const { return second_moment_; }
    double variance() const { return second_moment_ - mean_ * mean_; }
    double p_moment(double p) const;

    double cdf(double x) const;
    double density(double x) const;

    //! Draw one weight from a caller-owned stream.
    double sample(RngStream& rng) const
    {
        switch (kind_)
        {
            case WeightKind::two_point:
                return rng.uniform() < p_ ? b_ : a_;
            case WeightKind::uniform:
                return a_ + (b_ - a_) * rng.uniform();
            case WeightKind::gaussian:
                return a_ + b_ * rng.normal();
            case WeightKind::empirical:
                break;
        }
        auto const n = atoms_.size();
        auto idx = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
        return atoms_[idx < n ? idx : n - 1].value;
    }

    /*!
     * E[g(X)]. Exact sum for atomic laws; quadrature otherwise, split at
     * `breakpoint` where g may have a kink.
     */
    double expect(std::function<double(double)> const& g,
                  double breakpoint) const;

    // Fractional moment pair m_beta(x), s_beta(x) for 0 < beta < 1
    FracMoments frac_moment_pair(double x, double beta) const;

  private:
    WeightKind kind_ = WeightKind::two_point;
    double a_ = 0;  // two-point low / uniform low / gaussian mean
    double b_ = 0;  // two-point high / uniform high / gaussian sigma
    double p_ = 0;
    std::vector<Atom> atoms_;
    double mean_ = 0;
    double abs_mean_ = 0;
    double second_moment_ = 0;

    void finish_atomic(bool allow_degenerate);
};

}  // namespace levyratio
