#pragma once

#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "levy_measure.hpp"
#include "simulate.hpp"
#include "weights.hpp"

namespace levyratio
{
enum class CompareTarget
{
    limit_cdf,
    weight_cdf,
    point_mass,
    none
};

char const* to_string(CompareTarget target);

//! Sections read by load_experiment.
std::vector<std::string> const& experiment_sections();

//! Build a measure from a config section (name + parameters, or a CSV path).
MeasurePtr measure_from_config(Config const& cfg, std::string const& section = "measure");

//! Build a weight law from a config section.
WeightLaw weights_from_config(Config const& cfg, std::string const& section = "weights");

//! Series / shell settings from the [series] and [shells] sections.
BatchOptions batch_options_from_config(Config const& cfg);

struct ExperimentConfig
{
    Config raw;
    MeasurePtr measure;
    WeightLaw weights;
    std::vector<double> t_values;
    std::size_t n = 0;
    BatchOptions batch;

    CompareTarget target = CompareTarget::none;
    //! Index of the limit law for target = limit_cdf
    double limit_beta = 0.5;
    double alpha = 0.01;
    //! Per-t KS threshold; unset means no per-t KS requirement
    std::optional<double> ks_max;
    //! Require KS strictly decreasing along t_values
    bool require_decreasing = false;
    std::optional<double> final_ks_max;
    //! Var(T) / Var(X) threshold (point-mass target)
    std::optional<double> variance_ratio_max;
    bool mean_check = true;
    double mean_sigmas = 4;

    std::string out_dir = "out";
    std::string format = "csv";
};

//! Validate and interpret a config; unknown keys are errors.
ExperimentConfig load_experiment(Config cfg);

struct ComparisonResult
{
    double t = 0;
    std::size_t n = 0;
    double ks_statistic = 0;
    double ks_critical_at_alpha = 0;
    double mean_T = 0;
    double se_T = 0;
    double var_T = 0;
    double var_ratio = 0;  //!< Var(T) / Var(X)
    double mean_R = 0;
    double se_R = 0;
    double discarded_mass_bound = 0;
    double residual_error_bound = 0;
    double mean_terms = 0;
    std::size_t zero_v_count = 0;
    bool ks_pass = true;
    bool mean_pass = true;
    bool variance_pass = true;
    bool pass = true;
};

struct VerifyReport
{
    std::vector<ComparisonResult> rows;
    bool trend_pass = true;
    bool final_pass = true;
    bool pass = true;
};

//! Target CDF for the configured comparison.
std::function<double(double)> target_cdf(ExperimentConfig const& cfg);

/*!
 * Generate a batch per t and compare it with the configured target.
 * Batches are returned through `batches` when given.
 */
VerifyReport run_verify(ExperimentConfig const& cfg,
                        std::vector<RatioBatch>* batches = nullptr);

}  // namespace levyratio
