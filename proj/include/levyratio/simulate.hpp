#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "levy_measure.hpp"
#include "rng.hpp"
#include "weights.hpp"

namespace levyratio
{
enum class Engine
{
    series,
    layered
};

/*!
 * Treatment of the jumps below the truncation level.
 *
 * - drop: discard them; the expected discarded mass is reported.
 * - mean: add their exact conditional mean to U, V and sum of squares.
 * - gaussian: add a Gaussian draw with the exact mean and covariance of the
 *   discarded (U, V) part.
 */
enum class RemainderMode
{
    drop,
    mean,
    gaussian
};

char const* to_string(Engine engine);
char const* to_string(RemainderMode mode);
Engine engine_from_string(std::string const& name);
RemainderMode remainder_from_string(std::string const& name);

//! Truncation controls for the inverse-tail series.
struct SeriesConfig
{
    //! Terms with jump size below this floor are not generated.
    double jump_floor_eps = 1e-6;
    //! Optional floor relative to the largest term; 0 disables.
    double relative_floor = 0;
    std::uint64_t max_terms = 100'000'000;
    //! Cap on discarded mass / (t I(1)) when max_terms is hit.
    double relative_mass_budget = 1e-3;
    RemainderMode remainder = RemainderMode::drop;
};

//! Shell layout for the layered compound-Poisson sampler.
struct ShellConfig
{
    //! Explicit decreasing boundaries a_1 > ... > a_N (a_0 = inf implied).
    std::vector<double> boundaries;
    //! Geometric ratio a_{n-1} / a_n when boundaries are not given.
    double ratio = 2.0;
    //! Smallest boundary a_N; 0 selects it from floor_relative_mass.
    double small_shell_floor = 0;
    //! Default a_N satisfies I(a_N) <= floor_relative_mass * I(1).
    double floor_relative_mass = 1e-8;
    RemainderMode remainder = RemainderMode::drop;
};

/*!
 * One draw of (U_t, V_t) with the statistics derived from the same jumps.
 *
 * Jump sizes are stored relative to exp(log_scale) so that laws whose
 * jumps underflow double precision (slowly varying tails at small t) still
 * yield exact ratios.
 */
struct UVSample
{
    double u = 0;         //!< U / scale
    double v = 0;         //!< V / scale
    double sum_sq = 0;    //!< sum of squared jumps / scale^2
    double max_jump = 0;  //!< largest jump / scale
    double log_scale = 0;
    std::uint64_t terms = 0;
    //! Expected mass of the jumps that were not generated
    double discarded_bound = 0;
    //! Expected sum of their squares (= variance of the discarded V part)
    double discarded_sq = 0;

    //! T = U / V, with 0/0 := 0.
    double ratio() const { return v > 0 ? u / v : 0.0; }
    //! R = sum of squared jumps / V^2, with 0/0 := 0.
    double rt() const { return v > 0 ? sum_sq / (v * v) : 0.0; }
    double max_share() const { return v > 0 ? max_jump / v : 0.0; }
    double log_v() const;
    double v_absolute() const;
    double u_absolute() const;
};

//---------------------------------------------------------------------------//
/*!
 * Inverse-tail (shot-noise) series sampler for fixed t.
 *
 * Generates S_i as partial sums of unit exponentials and accumulates
 * X_i phi(S_i / t) and phi(S_i / t) while the jump stays above the floor.
 * The expected mass beyond the cutoff is reported and optionally
 * compensated. Setup that depends only on (t, measure, config) is done once.
 */
class SeriesSampler
{
  public:
    SeriesSampler(double t, MeasurePtr measure, WeightLaw weights,
                  SeriesConfig cfg);

    UVSample operator()(RngStream& rng) const;

    //! t * int_{s*}^inf phi for the absolute cutoff s* = tail(eps).
    double expected_discarded_mass() const { return rem_mean_; }
    //! RMS fluctuation of the discarded V part.
    double remainder_rms() const;
    //! Reference scale t * I(1) for relative budgets.
    double reference_mass() const { return reference_mass_; }

  private:
    double t_;
    MeasurePtr measure_;
    WeightLaw weights_;
    SeriesConfig cfg_;
    double s_cut_ = 0;
    double rem_mean_ = 0;
    double rem_sq_ = 0;
    double reference_mass_;
};

/*!
 * Layered compound-Poisson sampler: each shell [a_n, a_{n-1}) contributes a
 * Poisson(t mu_n) number of jumps drawn by inverse-tail sampling within the
 * shell, each with an independent weight.
 */
class LayeredSampler
{
  public:
    LayeredSampler(double t, MeasurePtr measure, WeightLaw weights,
                   ShellConfig cfg);

    UVSample operator()(RngStream& rng) const;

    //! Boundaries a_1 > ... > a_N actually used.
    std::vector<double> const& boundaries() const { return bounds_; }
    double expected_discarded_mass() const { return rem_mean_; }
    double remainder_rms() const { return std::sqrt(rem_sq_); }

  private:
    struct Shell
    {
        double tail_upper;  // tail at a_{n-1} (0 for the top shell)
        double mass;        // mu_n
    };

    double t_;
    MeasurePtr measure_;
    WeightLaw weights_;
    ShellConfig cfg_;
    std::vector<double> bounds_;
    std::vector<Shell> shells_;
    double rem_mean_ = 0;
    double rem_sq_ = 0;
};

//! Draw one (U, V) by the series representation.
UVSample series_sample_uv(double t, MeasurePtr const& measure,
                          WeightLaw const& weights, SeriesConfig const& cfg,
                          RngStream& rng);

//! Draw one (U, V) by the layered compound-Poisson representation.
UVSample layered_sample_uv(double t, MeasurePtr const& measure,
                           WeightLaw const& weights, ShellConfig const& cfg,
                           RngStream& rng);

//---------------------------------------------------------------------------//
// BATCHES
//---------------------------------------------------------------------------//

struct BatchOptions
{
    Engine engine = Engine::series;
    SeriesConfig series;
    ShellConfig shells;
    std::uint64_t seed = 1;
    unsigned jobs = 1;
};

//! Monte Carlo replicates of (T_t, R_t, V_t).
struct RatioBatch
{
    double t = 0;
    std::size_t n = 0;
    std::vector<double> ratios;
    std::vector<double> rt_values;
    std::vector<double> v_values;
    std::vector<double> log_v_values;
    std::vector<double> max_shares;
    //! Largest per-replicate expected discarded mass
    double discarded_mass_bound = 0;
    //! RMS size of the part of V that was compensated rather than sampled
    double residual_error_bound = 0;
    double reference_mass = 0;
    double mean_terms = 0;
    std::size_t zero_v_count = 0;
    Engine engine = Engine::series;
    std::uint64_t seed = 0;
    RemainderMode remainder = RemainderMode::drop;
};

//! Replicates per independently seeded partition.
inline constexpr std::size_t batch_partition_size = 2048;

/*!
 * Generate n independent replicates.
 *
 * Replicates are grouped into fixed partitions with one derived stream
 * each, so output is bitwise identical for any number of jobs.
 */
RatioBatch ratio_batch(double t, MeasurePtr const& measure,
                       WeightLaw const& weights, std::size_t n,
                       BatchOptions const& options);

struct ProportionEstimate
{
    double estimate = 0;
    double ci_low = 0;
    double ci_high = 0;
    std::size_t n = 0;
};

/*!
 * P{largest jump / V_t > 1 - eps} by the series engine, with a 95% Wilson
 * interval.
 */
ProportionEstimate dominance_probability(double t, MeasurePtr const& measure,
                                         double eps, std::size_t n,
                                         std::uint64_t seed,
                                         SeriesConfig const& cfg = {},
                                         unsigned jobs = 1);

}  // namespace levyratio
