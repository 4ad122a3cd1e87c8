#include "levyratio/experiment.hpp"

#include <cmath>

#include "levyratio/errors.hpp"
#include "levyratio/limits.hpp"
#include "levyratio/stats.hpp"

namespace levyratio
{
char const* to_string(CompareTarget target)
{
    switch (target)
    {
        case CompareTarget::limit_cdf:
            return "limit_cdf";
        case CompareTarget::weight_cdf:
            return "weight_cdf";
        case CompareTarget::point_mass:
            return "point_mass";
        case CompareTarget::none:
            return "none";
    }
    return "unknown";
}

std::vector<std::string> const& experiment_sections()
{
    static std::vector<std::string> const sections
        = {"measure", "weights", "run", "series", "shells", "compare", "output"};
    return sections;
}

MeasurePtr measure_from_config(Config const& cfg, std::string const& section)
{
    auto const name = cfg.get_string(section, "name");
    MeasurePtr measure;
    if (name == "stable_positive")
    {
        measure = make_stable(cfg.get_double(section, "beta"));
    }
    else if (name == "exp_compound_poisson")
    {
        measure = make_exp_compound_poisson();
    }
    else if (name == "log_slowly_varying")
    {
        measure = make_log_slowly_varying();
    }
    else if (name == "index_one_log_corrected")
    {
        measure = make_index_one_log_corrected();
    }
    else if (name == "block_oscillating")
    {
        measure = make_block_oscillating();
    }
    else if (name == "user_defined")
    {
        measure = make_step_from_csv(cfg.resolve_path(cfg.get_string(section, "csv")));
    }
    else
    {
        throw ConfigError("[" + section + "] name: unknown measure '" + name + "'");
    }
    double const scale = cfg.get_double(section, "scale", 1.0);
    if (scale != 1)
    {
        measure = make_scaled(measure, scale);
    }
    return measure;
}

WeightLaw weights_from_config(Config const& cfg, std::string const& section)
{
    auto const name = cfg.get_string(section, "name");
    if (name == "two_point")
    {
        return WeightLaw::two_point(cfg.get_double(section, "a", 0.0),
                                    cfg.get_double(section, "b", 1.0),
                                    cfg.get_double(section, "p"));
    }
    if (name == "uniform")
    {
        return WeightLaw::uniform(cfg.get_double(section, "a"), cfg.get_double(section, "b"));
    }
    if (name == "gaussian")
    {
        return WeightLaw::gaussian(cfg.get_double(section, "mu", 0.0),
                                   cfg.get_double(section, "sigma", 1.0));
    }
    if (name == "empirical")
    {
        return WeightLaw::empirical_from_csv(cfg.resolve_path(cfg.get_string(section, "csv")));
    }
    throw ConfigError("[" + section + "] name: unknown weight law '" + name + "'");
}

BatchOptions batch_options_from_config(Config const& cfg)
{
    BatchOptions o;
    o.engine = engine_from_string(cfg.get_string("run", "engine", "series"));
    o.seed = static_cast<std::uint64_t>(cfg.get_int("run", "seed", 1));
    o.jobs = static_cast<unsigned>(cfg.get_int("run", "jobs", 1));

    auto& s = o.series;
    s.jump_floor_eps = cfg.get_double("series", "jump_floor_eps", s.jump_floor_eps);
    s.relative_floor = cfg.get_double("series", "relative_floor", s.relative_floor);
    s.max_terms = static_cast<std::uint64_t>(
        cfg.get_int("series", "max_terms", static_cast<long long>(s.max_terms)));
    s.relative_mass_budget
        = cfg.get_double("series", "relative_mass_budget", s.relative_mass_budget);
    s.remainder = remainder_from_string(cfg.get_string("series", "remainder", "drop"));

    auto& sh = o.shells;
    if (cfg.has("shells", "boundaries"))
    {
        sh.boundaries = cfg.get_list("shells", "boundaries");
    }
    sh.ratio = cfg.get_double("shells", "ratio", sh.ratio);
    sh.small_shell_floor = cfg.get_double("shells", "small_shell_floor", sh.small_shell_floor);
    sh.floor_relative_mass
        = cfg.get_double("shells", "floor_relative_mass", sh.floor_relative_mass);
    sh.remainder = remainder_from_string(cfg.get_string("shells", "remainder", "drop"));
    return o;
}

ExperimentConfig load_experiment(Config cfg)
{
    ExperimentConfig e;
    try
    {
        e.measure = measure_from_config(cfg);
        e.weights = weights_from_config(cfg);
        validate_small_jump_condition(*e.measure);
        e.t_values = cfg.get_list("run", "t");
        for (double t : e.t_values)
        {
            if (!(t > 0) || !std::isfinite(t))
            {
                throw ConfigError("[run] t: values must be positive");
            }
        }
        auto const n = cfg.get_int("run", "n", 0);
        if (n < 1)
        {
            throw ConfigError("[run] n: must be at least 1");
        }
        e.n = static_cast<std::size_t>(n);
        e.batch = batch_options_from_config(cfg);

        auto const target = cfg.get_string("compare", "target", "none");
        if (target == "limit_cdf")
        {
            e.target = CompareTarget::limit_cdf;
            e.limit_beta = cfg.get_double("compare", "beta");
        }
        else if (target == "weight_cdf")
        {
            e.target = CompareTarget::weight_cdf;
        }
        else if (target == "point_mass")
        {
            e.target = CompareTarget::point_mass;
        }
        else if (target != "none")
        {
            throw ConfigError("[compare] target: unknown target '" + target + "'");
        }
        e.alpha = cfg.get_double("compare", "alpha", 0.01);
        auto const ks_max = cfg.get_string(
            "compare", "ks_max", e.target == CompareTarget::limit_cdf ? "critical" : "none");
        if (ks_max == "critical")
        {
            e.ks_max = -1;  // resolved per t from n and alpha
        }
        else if (ks_max != "none")
        {
            e.ks_max = cfg.get_double("compare", "ks_max");
        }
        e.require_decreasing = cfg.get_bool("compare", "require_decreasing", false);
        if (cfg.has("compare", "final_ks_max"))
        {
            e.final_ks_max = cfg.get_double("compare", "final_ks_max");
        }
        if (cfg.has("compare", "variance_ratio_max"))
        {
            e.variance_ratio_max = cfg.get_double("compare", "variance_ratio_max");
        }
        e.mean_check = cfg.get_bool("compare", "mean_check", true);
        e.mean_sigmas = cfg.get_double("compare", "mean_sigmas", 4.0);

        e.out_dir = cfg.get_string("output", "dir", "out");
        e.format = cfg.get_string("output", "format", "csv");
        if (e.format != "csv" && e.format != "json")
        {
            throw ConfigError("[output] format: expected csv or json");
        }
        cfg.check_all_used(experiment_sections());
    }
    catch (DomainError const& err)
    {
        throw ConfigError(err.what());
    }
    e.raw = std::move(cfg);
    return e;
}

std::function<double(double)> target_cdf(ExperimentConfig const& cfg)
{
    switch (cfg.target)
    {
        case CompareTarget::limit_cdf:
        {
            LimitLaw law(cfg.limit_beta, cfg.weights);
            return [law](double x) { return limit_cdf(x, law); };
        }
        case CompareTarget::weight_cdf:
        {
            auto w = cfg.weights;
            return [w](double x) { return w.cdf(x); };
        }
        case CompareTarget::point_mass:
        {
            double const m = cfg.weights.mean();
            return [m](double x) { return x >= m ? 1.0 : 0.0; };
        }
        case CompareTarget::none:
            break;
    }
    return {};
}

VerifyReport run_verify(ExperimentConfig const& cfg, std::vector<RatioBatch>* batches)
{
    VerifyReport report;
    auto const cdf = target_cdf(cfg);
    double const var_x = cfg.weights.variance();
    double const ex = cfg.weights.mean();
    for (double t : cfg.t_values)
    {
        auto batch = ratio_batch(t, cfg.measure, cfg.weights, cfg.n, cfg.batch);
        ComparisonResult row;
        row.t = t;
        row.n = cfg.n;
        auto const tstats = mean_se(batch.ratios);
        auto const rstats = mean_se(batch.rt_values);
        row.mean_T = tstats.mean;
        row.se_T = tstats.se;
        row.var_T = tstats.variance;
        row.var_ratio = var_x > 0 ? tstats.variance / var_x : 0.0;
        row.mean_R = rstats.mean;
        row.se_R = rstats.se;
        row.discarded_mass_bound = batch.discarded_mass_bound;
        row.residual_error_bound = batch.residual_error_bound;
        row.mean_terms = batch.mean_terms;
        row.zero_v_count = batch.zero_v_count;
        row.ks_critical_at_alpha = ks_critical(cfg.n, cfg.alpha);
        if (cdf)
        {
            row.ks_statistic = ks_statistic(batch.ratios, cdf);
        }
        if (cfg.ks_max && cfg.target != CompareTarget::none)
        {
            double const limit = *cfg.ks_max < 0 ? row.ks_critical_at_alpha : *cfg.ks_max;
            row.ks_pass = row.ks_statistic <= limit;
        }
        if (cfg.mean_check)
        {
            row.mean_pass = std::fabs(row.mean_T - ex) <= cfg.mean_sigmas * row.se_T;
        }
        if (cfg.variance_ratio_max)
        {
            row.variance_pass = row.var_ratio <= *cfg.variance_ratio_max;
        }
        row.pass = row.ks_pass && row.mean_pass && row.variance_pass;
        report.rows.push_back(row);
        if (batches)
        {
            batches->push_back(std::move(batch));
        }
    }
    if (cfg.require_decreasing)
    {
        for (std::size_t i = 1; i < report.rows.size(); ++i)
        {
            if (!(report.rows[i].ks_statistic < report.rows[i - 1].ks_statistic))
            {
                report.trend_pass = false;
            }
        }
    }
    if (cfg.final_ks_max && !report.rows.empty())
    {
        report.final_pass = report.rows.back().ks_statistic <= *cfg.final_ks_max;
    }
    report.pass = report.trend_pass && report.final_pass;
    for (auto const& row : report.rows)
    {
        report.pass = report.pass && row.pass;
    }
    return report;
}

}  // namespace levyratio
