#include "levyratio/simulate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>
#include <boost/random/poisson_distribution.hpp>

#include "levyratio/errors.hpp"

namespace levyratio
{
namespace
{
constexpr double inf = std::numeric_limits<double>::infinity();

// Jumps with |log size| below this are accumulated without logarithms
constexpr double linear_log_limit = 600;

void require_time(double t)
{
    if (!(t > 0) || !std::isfinite(t))
    {
        throw DomainError("time t must be positive and finite");
    }
}

//! Add the compensated remainder (in absolute units) to a scaled sample.
void compensate(UVSample& out, RemainderMode mode, WeightLaw const& weights,
                double mean_v, double mean_sq, RngStream& rng)
{
    if (mode == RemainderMode::drop || !(mean_v > 0))
    {
        return;
    }
    double const log_factor = -out.log_scale;
    auto rescale = [log_factor](double value, double power) {
        return value > 0 ? std::exp(std::log(value) + power * log_factor) : 0.0;
    };
    double const ex = weights.mean();
    double dv = mean_v;
    double du = ex * mean_v;
    if (mode == RemainderMode::gaussian)
    {
        double const sd_v = std::sqrt(mean_sq);
        double const z1 = rng.normal();
        double const z2 = rng.normal();
        dv = std::fmax(mean_v + sd_v * z1, 0.0);
        du = ex * mean_v + ex * sd_v * z1
             + std::sqrt(weights.variance() * mean_sq) * z2;
    }
    double const sign_u = du < 0 ? -1.0 : 1.0;
    out.v += rescale(dv, 1);
    out.u += sign_u * rescale(std::fabs(du), 1);
    out.sum_sq += rescale(mean_sq, 2);
}
}  // namespace

char const* to_string(Engine engine)
{
    return engine == Engine::series ? "series" : "layered";
}

char const* to_string(RemainderMode mode)
{
    switch (mode)
    {
        case RemainderMode::drop:
            return "drop";
        case RemainderMode::mean:
            return "mean";
        case RemainderMode::gaussian:
            return "gaussian";
    }
    return "unknown";
}

Engine engine_from_string(std::string const& name)
{
    if (name == "series")
    {
        return Engine::series;
    }
    if (name == "layered")
    {
        return Engine::layered;
    }
    throw DomainError("unknown engine '" + name + "' (series|layered)");
}

RemainderMode remainder_from_string(std::string const& name)
{
    if (name == "drop")
    {
        return RemainderMode::drop;
    }
    if (name == "mean")
    {
        return RemainderMode::mean;
    }
    if (name == "gaussian")
    {
        return RemainderMode::gaussian;
    }
    throw DomainError("unknown remainder mode '" + name
                      + "' (drop|mean|gaussian)");
}

double UVSample::log_v() const
{
    return v > 0 ? std::log(v) + log_scale : -inf;
}

double UVSample::v_absolute() const
{
    return v > 0 ? std::exp(this->log_v()) : 0.0;
}

double UVSample::u_absolute() const
{
    return u * std::exp(log_scale);
}

//---------------------------------------------------------------------------//
// SERIES
//---------------------------------------------------------------------------//

SeriesSampler::SeriesSampler(double t, MeasurePtr measure, WeightLaw weights,
                             SeriesConfig cfg)
    : t_(t), measure_(std::move(measure)), weights_(std::move(weights)), cfg_(cfg)
{
    require_time(t);
    if (cfg_.jump_floor_eps < 0 || (cfg_.jump_floor_eps == 0 && !(cfg_.relative_floor > 0)))
    {
        throw DomainError("jump_floor_eps must be positive unless relative_floor is set");
    }
    if (cfg_.max_terms < 1)
    {
        throw DomainError("max_terms must be at least 1");
    }
    if (cfg_.relative_floor < 0 || cfg_.relative_floor >= 1)
    {
        throw DomainError("relative_floor must lie in [0, 1)");
    }
    if (cfg_.jump_floor_eps > 0)
    {
        s_cut_ = measure_->tail(cfg_.jump_floor_eps);
        rem_mean_ = t_ * measure_->tail_integral_of_inverse(s_cut_);
        rem_sq_ = t_ * measure_->tail_integral_of_inverse_sq(s_cut_);
    }
    else
    {
        // Only the relative floor applies
        s_cut_ = inf;
    }
    reference_mass_ = t_ * measure_->small_jump_mean(1.0);
}

double SeriesSampler::remainder_rms() const
{
    return std::sqrt(rem_sq_);
}

UVSample SeriesSampler::operator()(RngStream& rng) const
{
    UVSample out;
    double arrival = 0;
    double s_cut = s_cut_;
    double s_last = 0;
    double inv_scale = 1;
    bool linear = true;
    bool hit_max = false;
    double const log_rel
        = cfg_.relative_floor > 0 ? std::log(cfg_.relative_floor) : 0.0;

    for (;;)
    {
        arrival += rng.exponential();
        double const s = arrival / t_;
        if (!(s < s_cut))
        {
            break;
        }
        if (out.terms >= cfg_.max_terms)
        {
            hit_max = true;
            break;
        }
        double w;
        if (out.terms == 0)
        {
            // Terms arrive in decreasing order: the first is the largest
            double const log_phi = measure_->log_tail_inverse(s);
            if (log_phi == -inf)
            {
                break;
            }
            out.log_scale = log_phi;
            linear = std::fabs(log_phi) < linear_log_limit;
            inv_scale = linear ? std::exp(-log_phi) : 0.0;
            if (cfg_.relative_floor > 0)
            {
                s_cut = std::fmin(s_cut, measure_->tail_at_log(log_phi + log_rel));
            }
            w = 1;
        }
        else if (linear)
        {
            double const phi = measure_->tail_inverse(s);
            if (!(phi > 0))
            {
                break;
            }
            w = phi * inv_scale;
        }
        else
        {
            double const log_phi = measure_->log_tail_inverse(s);
            if (log_phi == -inf)
            {
                break;
            }
            w = std::exp(log_phi - out.log_scale);
        }
        double const x = weights_.sample(rng);
        out.u += x * w;
        out.v += w;
        out.sum_sq += w * w;
        ++out.terms;
        s_last = s;
    }
    out.max_jump = out.terms > 0 ? 1.0 : 0.0;

    double mean_v = rem_mean_;
    double mean_sq = rem_sq_;
    if (hit_max)
    {
        mean_v = t_ * measure_->tail_integral_of_inverse(s_last);
        mean_sq = t_ * measure_->tail_integral_of_inverse_sq(s_last);
        if (mean_v > cfg_.relative_mass_budget * reference_mass_)
        {
            throw NumericError(
                "series truncation budget exceeded: max_terms reached with "
                "expected discarded mass "
                + std::to_string(mean_v) + " > "
                + std::to_string(cfg_.relative_mass_budget) + " * t I(1)");
        }
    }
    else if (s_cut != s_cut_)
    {
        mean_v = t_ * measure_->tail_integral_of_inverse(s_cut);
        mean_sq = t_ * measure_->tail_integral_of_inverse_sq(s_cut);
    }
    out.discarded_bound = mean_v;
    out.discarded_sq = mean_sq;
    compensate(out, cfg_.remainder, weights_, mean_v, mean_sq, rng);
    return out;
}

UVSample series_sample_uv(double t, MeasurePtr const& measure,
                          WeightLaw const& weights, SeriesConfig const& cfg,
                          RngStream& rng)
{
    return SeriesSampler(t, measure, weights, cfg)(rng);
}

//---------------------------------------------------------------------------//
// LAYERED
//---------------------------------------------------------------------------//

LayeredSampler::LayeredSampler(double t, MeasurePtr measure, WeightLaw weights,
                               ShellConfig cfg)
    : t_(t), measure_(std::move(measure)), weights_(std::move(weights)), cfg_(cfg)
{
    require_time(t);
    if (!cfg_.boundaries.empty())
    {
        bounds_ = cfg_.boundaries;
    }
    else
    {
        if (!(cfg_.ratio > 1))
        {
            throw DomainError("shell ratio must exceed 1");
        }
        double floor = cfg_.small_shell_floor;
        if (!(floor > 0))
        {
            double const target = cfg_.floor_relative_mass
                                  * measure_->small_jump_mean(1.0);
            floor = 1.0;
            for (int n = 0; n < 4000 && measure_->small_jump_mean(floor) > target;
                 ++n)
            {
                floor /= cfg_.ratio;
            }
        }
        for (double a = 1 / cfg_.ratio; a > floor; a /= cfg_.ratio)
        {
            bounds_.push_back(a);
        }
        bounds_.push_back(floor);
    }
    double previous_tail = 0;
    double previous_bound = inf;
    for (double a : bounds_)
    {
        if (!(a > 0) || !(a < previous_bound))
        {
            throw DomainError("shell boundaries must be positive and "
                              "strictly decreasing");
        }
        double const tail_a = measure_->tail(a);
        double const mass = tail_a - previous_tail;
        if (!std::isfinite(mass))
        {
            throw NumericError("shell below " + std::to_string(previous_bound)
                               + " has non-finite mass");
        }
        shells_.push_back({previous_tail, mass});
        previous_tail = tail_a;
        previous_bound = a;
    }
    rem_mean_ = t_ * measure_->tail_integral_of_inverse(previous_tail);
    rem_sq_ = t_ * measure_->tail_integral_of_inverse_sq(previous_tail);
}

UVSample LayeredSampler::operator()(RngStream& rng) const
{
    UVSample out;
    bool linear = true;
    double inv_scale = 1;
    for (auto const& shell : shells_)
    {
        double const rate = t_ * shell.mass;
        if (!(rate > 0))
        {
            continue;
        }
        boost::random::poisson_distribution<std::int64_t, double> count_dist(rate);
        auto const count = count_dist(rng);
        for (std::int64_t k = 0; k < count; ++k)
        {
            double const s = shell.tail_upper + shell.mass * rng.uniform_pos();
            double w;
            if (out.terms == 0)
            {
                double const log_phi = measure_->log_tail_inverse(s);
                out.log_scale = log_phi;
                linear = std::fabs(log_phi) < linear_log_limit;
                inv_scale = linear ? std::exp(-log_phi) : 0.0;
                w = 1;
            }
            else if (linear)
            {
                w = measure_->tail_inverse(s) * inv_scale;
            }
            else
            {
                w = std::exp(measure_->log_tail_inverse(s) - out.log_scale);
            }
            double const x = weights_.sample(rng);
            out.u += x * w;
            out.v += w;
            out.sum_sq += w * w;
            out.max_jump = std::fmax(out.max_jump, w);
            ++out.terms;
        }
    }
    out.discarded_bound = rem_mean_;
    out.discarded_sq = rem_sq_;
    compensate(out, cfg_.remainder, weights_, rem_mean_, rem_sq_, rng);
    return out;
}

UVSample layered_sample_uv(double t, MeasurePtr const& measure,
                           WeightLaw const& weights, ShellConfig const& cfg,
                           RngStream& rng)
{
    return LayeredSampler(t, measure, weights, cfg)(rng);
}

//---------------------------------------------------------------------------//
// BATCHES
//---------------------------------------------------------------------------//

namespace
{
template<class Sampler>
RatioBatch run_batch(Sampler const& sampler, double t, std::size_t n,
                     BatchOptions const& options)
{
    RatioBatch batch;
    batch.t = t;
    batch.n = n;
    batch.engine = options.engine;
    batch.seed = options.seed;
    batch.ratios.resize(n);
    batch.rt_values.resize(n);
    batch.v_values.resize(n);
    batch.log_v_values.resize(n);
    batch.max_shares.resize(n);

    std::size_t const partitions
        = (n + batch_partition_size - 1) / batch_partition_size;
    std::vector<double> part_terms(partitions, 0.0);
    std::vector<double> part_bound(partitions, 0.0);
    std::vector<double> part_sq(partitions, 0.0);
    std::vector<std::size_t> part_zero(partitions, 0);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (std::size_t p = next++; p < partitions; p = next++)
        {
            try
            {
                RngStream rng(options.seed, p);
                std::size_t const begin = p * batch_partition_size;
                std::size_t const end = std::min(n, begin + batch_partition_size);
                for (std::size_t i = begin; i < end; ++i)
                {
                    auto const sample = sampler(rng);
                    batch.ratios[i] = sample.ratio();
                    batch.rt_values[i] = sample.rt();
                    batch.v_values[i] = sample.v_absolute();
                    batch.log_v_values[i] = sample.log_v();
                    batch.max_shares[i] = sample.max_share();
                    part_terms[p] += static_cast<double>(sample.terms);
                    part_bound[p] = std::fmax(part_bound[p], sample.discarded_bound);
                    part_sq[p] = std::fmax(part_sq[p], sample.discarded_sq);
                    if (!(sample.v > 0))
                    {
                        ++part_zero[p];
                    }
                }
            }
            catch (...)
            {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure)
                {
                    failure = std::current_exception();
                }
                next = partitions;
            }
        }
    };

    unsigned const jobs = static_cast<unsigned>(std::clamp<std::size_t>(
        options.jobs == 0 ? 1 : options.jobs, 1, std::max<std::size_t>(partitions, 1)));
    if (jobs == 1)
    {
        work();
    }
    else
    {
        std::vector<std::jthread> workers;
        workers.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j)
        {
            workers.emplace_back(work);
        }
    }
    if (failure)
    {
        std::rethrow_exception(failure);
    }

    double total_terms = 0;
    double max_sq = 0;
    for (std::size_t p = 0; p < partitions; ++p)
    {
        total_terms += part_terms[p];
        batch.discarded_mass_bound = std::fmax(batch.discarded_mass_bound, part_bound[p]);
        max_sq = std::fmax(max_sq, part_sq[p]);
        batch.zero_v_count += part_zero[p];
    }
    batch.mean_terms = n > 0 ? total_terms / static_cast<double>(n) : 0.0;
    batch.residual_error_bound = std::sqrt(max_sq);
    return batch;
}
}  // namespace

RatioBatch ratio_batch(double t, MeasurePtr const& measure,
                       WeightLaw const& weights, std::size_t n,
                       BatchOptions const& options)
{
    if (n < 1)
    {
        throw DomainError("batch size n must be at least 1");
    }
    RatioBatch batch;
    RemainderMode mode;
    if (options.engine == Engine::series)
    {
        SeriesSampler sampler(t, measure, weights, options.series);
        batch = run_batch(sampler, t, n, options);
        batch.reference_mass = sampler.reference_mass();
        mode = options.series.remainder;
    }
    else
    {
        LayeredSampler sampler(t, measure, weights, options.shells);
        batch = run_batch(sampler, t, n, options);
        batch.reference_mass = t * measure->small_jump_mean(1.0);
        mode = options.shells.remainder;
    }
    batch.remainder = mode;
    if (mode == RemainderMode::drop)
    {
        batch.residual_error_bound = batch.discarded_mass_bound;
    }
    return batch;
}

ProportionEstimate dominance_probability(double t, MeasurePtr const& measure,
                                         double eps, std::size_t n,
                                         std::uint64_t seed,
                                         SeriesConfig const& cfg, unsigned jobs)
{
    if (!(eps > 0 && eps < 1))
    {
        throw DomainError("dominance eps must lie in (0, 1)");
    }
    BatchOptions options;
    options.engine = Engine::series;
    options.series = cfg;
    options.seed = seed;
    options.jobs = jobs;
    auto const unit = WeightLaw::two_point(1, 1, 1, true);
    auto const batch = ratio_batch(t, measure, unit, n, options);
    auto const hits = static_cast<double>(
        std::count_if(batch.max_shares.begin(), batch.max_shares.end(),
                      [eps](double share) { return share > 1 - eps; }));

    // Wilson score interval at 95%
    double const z = 1.959963984540054;
    double const nn = static_cast<double>(n);
    double const p = hits / nn;
    double const denom = 1 + z * z / nn;
    double const centre = (p + z * z / (2 * nn)) / denom;
    double const half = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / denom;
    return {p, std::fmax(centre - half, 0.0), std::fmin(centre + half, 1.0), n};
}

}  // namespace levyratio
