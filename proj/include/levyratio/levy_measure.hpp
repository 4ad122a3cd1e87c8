#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace levyratio
{
//! Built-in families of driftless subordinator Levy measures.
enum class MeasureKind
{
    stable_positive,
    exp_compound_poisson,
    log_slowly_varying,
    index_one_log_corrected,
    block_oscillating,
    user_defined
};

char const* to_string(MeasureKind kind);

//! Laplace exponent and its first two derivatives at one point.
struct LaplaceExponent
{
    double value = 0;   //!< Phi(u) = int (1 - e^{-ux}) Lambda(dx)
    double first = 0;   //!< Phi'(u) > 0
    double second = 0;  //!< Phi''(u) <= 0
};

//---------------------------------------------------------------------------//
/*!
 * Levy measure of a driftless subordinator, described by its tail function
 * \f$ \bar\Lambda(x) = \Lambda(x, \infty) \f$.
 *
 * Only `tail` is required. Every other functional has a numeric default
 * built on the tail (monotone inversion, log-axis quadrature); built-in
 * families override them with closed forms where available. The
 * `numeric_*` members always take the numeric route so the two can be
 * compared.
 *
 * Instances are immutable after construction and safe to share between
 * threads.
 */
class LevyMeasure
{
  public:
    virtual ~LevyMeasure() = default;

    //! Tail mass Lambda(x, inf); nonincreasing, right-continuous.
    virtual double tail(double x) const = 0;
    //! Tail evaluated at exp(log_x); lets callers reach below DBL_MIN.
    virtual double tail_at_log(double log_x) const;

    virtual MeasureKind kind() const = 0;
    virtual std::string name() const = 0;
    //! Whether the total mass Lambda(0+) is infinite (infinite activity).
    virtual bool tail_at_zero_infinite() const = 0;
    //! Finite right end of the support, if any; 0 means unbounded.
    virtual double support_upper() const { return 0; }

    // Generalized inverse phi(s) = sup{y : tail(y) > s}, 0 if empty
    virtual double tail_inverse(double s) const;
    // log(phi(s)); -inf when phi(s) = 0
    virtual double log_tail_inverse(double s) const;
    // I(x) = int_0^x tail(y) dy
    virtual double small_jump_mean(double x) const;
    // V2(v) = int_{0 < u <= v} u^2 Lambda(du)
    virtual double second_truncated_moment(double v) const;
    // Phi(u), Phi'(u), Phi''(u)
    virtual LaplaceExponent laplace_exponent(double u) const;
    // Phi(u), u Phi'(u), u^2 Phi''(u) at u = e^z (value inf past overflow)
    virtual LaplaceExponent laplace_exponent_at_log(double z) const;
    // int_{s0}^inf phi(s) ds
    virtual double tail_integral_of_inverse(double s0) const;
    // int_{s0}^inf phi(s)^2 ds
    virtual double tail_integral_of_inverse_sq(double s0) const;

    //!@{
    //! Tail-only numeric evaluation, bypassing any closed form
    double numeric_tail_inverse(double s) const;
    double numeric_log_tail_inverse(double s) const;
    double numeric_small_jump_mean(double x) const;
    double numeric_second_truncated_moment(double v) const;
    LaplaceExponent numeric_laplace_exponent(double u) const;
    //!@}

  private:
    struct Envelope
    {
        double z_lo = 0;
        double dz = 0;
        std::vector<double> log_tail;
    };
    mutable std::once_flag envelope_once_;
    mutable Envelope envelope_;

    Envelope const& envelope() const;
};

using MeasurePtr = std::shared_ptr<LevyMeasure const>;

//---------------------------------------------------------------------------//
// BUILT-IN MEASURES
//---------------------------------------------------------------------------//

//! tail(x) = x^{-beta}, 0 < beta < 1.
class StablePositiveMeasure final : public LevyMeasure
{
  public:
    explicit StablePositiveMeasure(double beta);

    double beta() const { return beta_; }

    double tail(double x) const override;
    double tail_at_log(double log_x) const override;
    MeasureKind kind() const override { return MeasureKind::stable_positive; }
    std::string name() const override;
    bool tail_at_zero_infinite() const override { return true; }
    double tail_inverse(double s) const override;
    double log_tail_inverse(double s) const override;
    double small_jump_mean(double x) const override;
    double second_truncated_moment(double v) const override;
    LaplaceExponent laplace_exponent(double u) const override;
    double tail_integral_of_inverse(double s0) const override;
    double tail_integral_of_inverse_sq(double s0) const override;

  private:
    double beta_;
    double gamma_one_minus_beta_;
};

//! tail(x) = e^{-x}: unit-rate compound Poisson with Exp(1) jumps.
class ExpCompoundPoissonMeasure final : public LevyMeasure
{
  public:
    double tail(double x) const override;
    MeasureKind kind() const override
    {
        return MeasureKind::exp_compound_poisson;
    }
    std::string name() const override { return "exp_compound_poisson"; }
    bool tail_at_zero_infinite() const override { return false; }
    double tail_inverse(double s) const override;
    double log_tail_inverse(double s) const override;
    double small_jump_mean(double x) const override;
    double second_truncated_moment(double v) const override;
    LaplaceExponent laplace_exponent(double u) const override;
    double tail_integral_of_inverse(double s0) const override;
    double tail_integral_of_inverse_sq(double s0) const override;
};

//! tail(x) = log(1 + 1/x): slowly varying at zero.
class LogSlowlyVaryingMeasure final : public LevyMeasure
{
  public:
    double tail(double x) const override;
    double tail_at_log(double log_x) const override;
    MeasureKind kind() const override
    {
        return MeasureKind::log_slowly_varying;
    }
    std::string name() const override { return "log_slowly_varying"; }
    bool tail_at_zero_infinite() const override { return true; }
    double tail_inverse(double s) const override;
    double log_tail_inverse(double s) const override;
    double small_jump_mean(double x) const override;
    double second_truncated_moment(double v) const override;
    LaplaceExponent laplace_exponent(double u) const override;
    LaplaceExponent laplace_exponent_at_log(double z) const override;
    double tail_integral_of_inverse(double s0) const override;
    double tail_integral_of_inverse_sq(double s0) const override;
};

//! tail(x) = 1 / (x log^2(e + 1/x)): regularly varying with index -1 at 0.
class IndexOneLogCorrectedMeasure final : public LevyMeasure
{
  public:
    double tail(double x) const override;
    double tail_at_log(double log_x) const override;
    MeasureKind kind() const override
    {
        return MeasureKind::index_one_log_corrected;
    }
    std::string name() const override { return "index_one_log_corrected"; }
    bool tail_at_zero_infinite() const override { return true; }
    double tail_inverse(double s) const override;
    double log_tail_inverse(double s) const override;
    double small_jump_mean(double x) const override;
    LaplaceExponent laplace_exponent(double u) const override;
};

/*!
 * Piecewise-constant tail on the blocks [4^{-(k+1)}, 4^{-k}).
 *
 * The block value stays flat until it falls to the x^{-1/4} envelope at a
 * block's left end, then jumps to the x^{-1/2} envelope there. Above x = 1
 * the tail is x^{-1/2}. Jumps occur at x = 1, 4^{-1}, 4^{-3}, 4^{-7}, 4^{-15},
 * ... with factors 2^{k/2} growing without bound, so x tail(x) / I(x) has
 * liminf 0 and v^2 tail(v) / V2(v) is unbounded as x -> 0. This is a
 * constructed counterexample for the diagnostics, not a model measure.
 */
class BlockOscillatingMeasure final : public LevyMeasure
{
  public:
    BlockOscillatingMeasure();

    double tail(double x) const override;
    double tail_at_log(double log_x) const override;
    MeasureKind kind() const override
    {
        return MeasureKind::block_oscillating;
    }
    std::string name() const override { return "block_oscillating"; }
    bool tail_at_zero_infinite() const override { return true; }
    double tail_inverse(double s) const override;
    double small_jump_mean(double x) const override;
    double second_truncated_moment(double v) const override;
    LaplaceExponent laplace_exponent(double u) const override;

    //! Locations of the atoms of Lambda below 1, in decreasing order.
    std::vector<double> jump_points(double x_min) const;

  private:
    // log2 of the block value on block k
    std::vector<int> log2_value_;
    int block_of_log(double log_x) const;
    double block_value(int k) const;
};

//! Wrap a tail callable with no closed forms (all numeric defaults).
class FunctionMeasure final : public LevyMeasure
{
  public:
    FunctionMeasure(std::string name, std::function<double(double)> tail,
                    bool tail_at_zero_infinite, double support_upper = 0);

    double tail(double x) const override { return tail_(x); }
    MeasureKind kind() const override { return MeasureKind::user_defined; }
    std::string name() const override { return name_; }
    bool tail_at_zero_infinite() const override { return infinite_; }
    double support_upper() const override { return support_upper_; }

  private:
    std::string name_;
    std::function<double(double)> tail_;
    bool infinite_;
    double support_upper_;
};

/*!
 * Right-continuous step tail from knots (x_i, tail_i): the tail equals
 * tail_i on [x_i, x_{i+1}) and tail_1 below x_1. The last value must be 0.
 */
class StepMeasure final : public LevyMeasure
{
  public:
    StepMeasure(std::vector<double> x, std::vector<double> tail_values);

    double tail(double x) const override;
    MeasureKind kind() const override { return MeasureKind::user_defined; }
    std::string name() const override { return "step_csv"; }
    bool tail_at_zero_infinite() const override { return false; }
    double support_upper() const override { return x_.back(); }
    double tail_inverse(double s) const override;
    double small_jump_mean(double x) const override;
    double second_truncated_moment(double v) const override;
    LaplaceExponent laplace_exponent(double u) const override;

  private:
    std::vector<double> x_;
    std::vector<double> values_;
};

//! Jumps multiplied by c: tail(x) = base.tail(x / c).
class ScaledMeasure final : public LevyMeasure
{
  public:
    ScaledMeasure(MeasurePtr base, double scale);

    double tail(double x) const override { return base_->tail(x / scale_); }
    double tail_at_log(double log_x) const override;
    MeasureKind kind() const override { return base_->kind(); }
    std::string name() const override;
    bool tail_at_zero_infinite() const override
    {
        return base_->tail_at_zero_infinite();
    }
    double support_upper() const override
    {
        return base_->support_upper() * scale_;
    }
    double tail_inverse(double s) const override;
    double log_tail_inverse(double s) const override;
    double small_jump_mean(double x) const override;
    double second_truncated_moment(double v) const override;
    LaplaceExponent laplace_exponent(double u) const override;
    LaplaceExponent laplace_exponent_at_log(double z) const override;
    double tail_integral_of_inverse(double s0) const override;
    double tail_integral_of_inverse_sq(double s0) const override;

  private:
    MeasurePtr base_;
    double scale_;
};

//! Forwards only the tail of another measure, forcing numeric evaluation.
class NumericOnlyMeasure final : public LevyMeasure
{
  public:
    explicit NumericOnlyMeasure(MeasurePtr base) : base_(std::move(base)) {}

    double tail(double x) const override { return base_->tail(x); }
    double tail_at_log(double log_x) const override
    {
        return base_->tail_at_log(log_x);
    }
    MeasureKind kind() const override { return base_->kind(); }
    std::string name() const override { return "numeric:" + base_->name(); }
    bool tail_at_zero_infinite() const override
    {
        return base_->tail_at_zero_infinite();
    }
    double support_upper() const override { return base_->support_upper(); }

  private:
    MeasurePtr base_;
};

//---------------------------------------------------------------------------//
// FACTORIES
//---------------------------------------------------------------------------//

MeasurePtr make_stable(double beta);
MeasurePtr make_exp_compound_poisson();
MeasurePtr make_log_slowly_varying();
MeasurePtr make_index_one_log_corrected();
MeasurePtr make_block_oscillating();
MeasurePtr make_scaled(MeasurePtr base, double scale);
MeasurePtr make_step_from_csv(std::string const& path);

// Check that I(1) = int_0^1 tail is finite; throws DomainError otherwise
void validate_small_jump_condition(LevyMeasure const& measure);

}  // namespace levyratio
