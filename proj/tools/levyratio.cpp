// Command-line front end: simulate, limit, diagnose, verify, er-rt.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levyratio/config.hpp"
#include "levyratio/diagnostics.hpp"
#include "levyratio/errors.hpp"
#include "levyratio/experiment.hpp"
#include "levyratio/io.hpp"
#include "levyratio/limits.hpp"
#include "levyratio/stats.hpp"

namespace fs = std::filesystem;
using namespace levyratio;

namespace
{
enum Exit
{
    exit_pass = 0,
    exit_fail = 1,
    exit_usage = 2,
    exit_numeric = 3
};

struct Common
{
    std::string config;
    std::optional<long long> seed;
    std::optional<int> jobs;
    std::optional<std::string> out;
    std::optional<std::string> format;
    bool timing = false;
};

std::vector<std::string> const known_sections = {"measure", "weights", "run",    "series",
                                                 "shells",  "compare", "output", "limit",
                                                 "diagnose"};

Config load_config(Common const& c)
{
    auto cfg = Config::from_file(c.config);
    for (auto const& s : cfg.sections())
    {
        if (std::find(known_sections.begin(), known_sections.end(), s) == known_sections.end())
        {
            throw ConfigError(c.config + ": unknown section [" + s + "]");
        }
    }
    if (c.seed)
    {
        cfg.set("run", "seed", std::to_string(*c.seed));
    }
    if (c.jobs)
    {
        cfg.set("run", "jobs", std::to_string(*c.jobs));
    }
    if (c.out)
    {
        cfg.set("output", "dir", *c.out);
    }
    if (c.format)
    {
        cfg.set("output", "format", *c.format);
    }
    return cfg;
}

std::string output_dir(Config const& cfg)
{
    return cfg.get_string("output", "dir", "out");
}

std::string output_format(Config const& cfg)
{
    auto f = cfg.get_string("output", "format", "csv");
    if (f != "csv" && f != "json")
    {
        throw ConfigError("[output] format: expected csv or json");
    }
    return f;
}

std::string path_in(std::string const& dir, std::string const& name)
{
    return (fs::path(dir) / name).string();
}

void report_time(Common const& c, std::string const& dir,
                 std::chrono::steady_clock::time_point start)
{
    double const secs
        = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "wall time: %.3f s\n", secs);
    if (c.timing)
    {
        write_file(path_in(dir, "timing.json"),
                   "{\n  \"wall_time_seconds\": " + format_real(secs) + "\n}\n");
    }
}

int cmd_simulate(Common const& c)
{
    auto const start = std::chrono::steady_clock::now();
    auto cfg = load_experiment(load_config(c));
    std::vector<std::string> files;
    auto const echo = cfg.raw.echo({"output"});
    for (std::size_t i = 0; i < cfg.t_values.size(); ++i)
    {
        auto batch = ratio_batch(cfg.t_values[i], cfg.measure, cfg.weights, cfg.n, cfg.batch);
        char name[64];
        if (cfg.format == "json")
        {
            std::snprintf(name, sizeof name, "batch_%02zu.json", i);
            write_file(path_in(cfg.out_dir, name), batch_json(batch, echo, true));
            files.emplace_back(name);
        }
        else
        {
            std::snprintf(name, sizeof name, "batch_%02zu.csv", i);
            write_file(path_in(cfg.out_dir, name), batch_csv(batch));
            files.emplace_back(name);
            std::snprintf(name, sizeof name, "batch_%02zu.meta.json", i);
            write_file(path_in(cfg.out_dir, name), batch_json(batch, echo));
            files.emplace_back(name);
        }
        std::printf("t=%s n=%zu discarded_mass_bound=%s mean_terms=%.1f\n",
                    format_real(batch.t).c_str(), batch.n,
                    format_real(batch.discarded_mass_bound).c_str(), batch.mean_terms);
    }
    write_file(path_in(cfg.out_dir, "manifest.json"), manifest_json("simulate", cfg, files));
    report_time(c, cfg.out_dir, start);
    return exit_pass;
}

std::vector<double> limit_grid(Config const& cfg)
{
    if (cfg.has("limit", "x"))
    {
        return cfg.get_list("limit", "x");
    }
    double const lo = cfg.get_double("limit", "x_min", 0.0);
    double const hi = cfg.get_double("limit", "x_max", 1.0);
    auto const points = cfg.get_int("limit", "points", 21);
    if (points < 2 || !(hi > lo))
    {
        throw ConfigError("[limit] grid needs x_max > x_min and points >= 2");
    }
    std::vector<double> xs;
    for (long long i = 0; i < points; ++i)
    {
        xs.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    return xs;
}

int cmd_limit(Common const& c)
{
    auto const start = std::chrono::steady_clock::now();
    auto cfg = load_config(c);
    LimitLaw law(cfg.get_double("limit", "beta"), weights_from_config(cfg),
                 cfg.get_double("limit", "scale_c", 1.0));
    auto method = cfg.get_string("limit", "method", "closed_form");
    if (method != "closed_form" && method != "fourier")
    {
        throw ConfigError("[limit] method: expected closed_form or fourier");
    }
    if (method == "fourier" && !(law.beta > 0 && law.beta < 1))
    {
        throw ConfigError("[limit] method: fourier needs 0 < beta < 1");
    }
    auto const xs = limit_grid(cfg);
    auto const dir = output_dir(cfg);
    auto const format = output_format(cfg);
    cfg.check_all_used({"limit", "weights", "output"});

    // Lamperti density is closed form for 0/1 weights; else difference the CDF
    std::optional<double> p_one;
    auto const& atoms = law.weights.atoms();
    if (atoms.size() == 2 && atoms[0].value == 0 && atoms[1].value == 1)
    {
        p_one = atoms[1].probability;
    }
    auto cdf_at = [&](double x) -> FourierResult {
        if (method == "fourier")
        {
            return fourier_cdf(x, law);
        }
        return {limit_cdf(x, law), 0};
    };
    std::vector<LimitRow> rows;
    for (double x : xs)
    {
        LimitRow row;
        row.x = x;
        auto const r = cdf_at(x);
        row.cdf = r.value;
        row.error = r.error;
        if (p_one && law.beta > 0 && law.beta < 1)
        {
            row.density = x > 0 && x < 1 ? lamperti_density(x, law.beta, *p_one) : 0.0;
        }
        else
        {
            double const h = 1e-5 * std::fmax(1.0, std::fabs(x));
            row.density = (cdf_at(x + h).value - cdf_at(x - h).value) / (2 * h);
        }
        rows.push_back(row);
    }
    if (format == "json")
    {
        write_file(path_in(dir, "limit.json"), limit_json(law, method, rows));
    }
    else
    {
        write_file(path_in(dir, "limit.csv"), limit_csv(rows));
        write_file(path_in(dir, "limit.meta.json"), limit_json(law, method, {}));
    }
    std::fputs(limit_csv(rows).c_str(), stdout);
    report_time(c, dir, start);
    return exit_pass;
}

int cmd_diagnose(Common const& c)
{
    auto const start = std::chrono::steady_clock::now();
    auto cfg = load_config(c);
    auto measure = measure_from_config(cfg);
    GridSpec grid;
    grid.end = scan_end_from_string(cfg.get_string("diagnose", "end", "zero"));
    grid.start = cfg.get_double("diagnose", "start", grid.start);
    grid.points_per_decade = static_cast<int>(
        cfg.get_int("diagnose", "points_per_decade", grid.points_per_decade));
    grid.decades = static_cast<int>(cfg.get_int("diagnose", "decades", grid.decades));
    double const tol = cfg.get_double("diagnose", "inf_tolerance", 0.05);
    auto const dir = output_dir(cfg);
    auto const format = output_format(cfg);
    cfg.check_all_used({"measure", "diagnose", "output"});

    auto report = diagnose(*measure, grid, tol);
    auto const text = diagnostics_json(report, measure->name());
    write_file(path_in(dir, "diagnostics.json"), text);
    if (format == "csv")
    {
        write_file(path_in(dir, "diagnostics.csv"), diagnostics_csv(report));
    }
    std::fputs(text.c_str(), stdout);
    report_time(c, dir, start);
    return exit_pass;
}

int cmd_verify(Common const& c)
{
    auto const start = std::chrono::steady_clock::now();
    auto cfg = load_experiment(load_config(c));
    std::vector<RatioBatch> batches;
    auto report = run_verify(cfg, &batches);
    write_verify_outputs(cfg.out_dir, cfg, report, batches);
    for (auto const& r : report.rows)
    {
        std::printf("t=%-10s ks=%.5f (crit %.5f) mean_T=%.5f se=%.5f var_ratio=%.5f %s\n",
                    format_real(r.t).c_str(), r.ks_statistic, r.ks_critical_at_alpha,
                    r.mean_T, r.se_T, r.var_ratio, r.pass ? "PASS" : "FAIL");
    }
    if (cfg.require_decreasing)
    {
        std::printf("ks decreasing: %s\n", report.trend_pass ? "PASS" : "FAIL");
    }
    if (cfg.final_ks_max)
    {
        std::printf("final ks <= %s: %s\n", format_real(*cfg.final_ks_max).c_str(),
                    report.final_pass ? "PASS" : "FAIL");
    }
    std::printf("verify: %s\n", report.pass ? "PASS" : "FAIL");
    report_time(c, cfg.out_dir, start);
    return report.pass ? exit_pass : exit_fail;
}

int cmd_er_rt(Common const& c)
{
    auto const start = std::chrono::steady_clock::now();
    auto cfg = load_experiment(load_config(c));
    std::string out = "t,expected_rt,quadrature_error,mc_mean_R,mc_se_R,warning\n";
    std::printf("%-12s %-14s %-14s %-10s\n", "t", "expected_rt", "mc_mean_R", "mc_se_R");
    for (double t : cfg.t_values)
    {
        auto const er = expected_rt(t, *cfg.measure);
        auto const batch = ratio_batch(t, cfg.measure, cfg.weights, cfg.n, cfg.batch);
        auto const mc = mean_se(batch.rt_values);
        out += format_real(t) + ',' + format_real(er.value) + ',' + format_real(er.error) + ','
               + format_real(mc.mean) + ',' + format_real(mc.se) + ",\"" + er.warning + "\"\n";
        std::printf("%-12s %-14.8f %-14.8f %-10.6f%s%s\n", format_real(t).c_str(), er.value,
                    mc.mean, mc.se, er.warning.empty() ? "" : "  warning: ",
                    er.warning.c_str());
    }
    write_file(path_in(cfg.out_dir, "er_rt.csv"), out);
    report_time(c, cfg.out_dir, start);
    return exit_pass;
}

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--config", c.config, "Experiment config file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "Override [run] seed");
    sub->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--out", c.out, "Output directory");
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_flag("--timing", c.timing, "Also write timing.json");
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Ratio of weighted Levy jumps: simulation, limit laws, diagnostics"};
    app.require_subcommand(1);
    Common common;
    struct Entry
    {
        char const* name;
        char const* help;
        int (*run)(Common const&);
    };
    Entry const entries[] = {
        {"simulate", "Generate ratio batches", cmd_simulate},
        {"limit", "Tabulate the limit law", cmd_limit},
        {"diagnose", "Scan the ratio conditions of a measure", cmd_diagnose},
        {"verify", "Simulate and compare with a target law", cmd_verify},
        {"er-rt", "E R_t by quadrature next to the Monte Carlo mean", cmd_er_rt},
    };
    std::vector<std::pair<CLI::App*, int (*)(Common const&)>> subs;
    for (auto const& e : entries)
    {
        auto* sub = app.add_subcommand(e.name, e.help);
        add_common(sub, common);
        subs.emplace_back(sub, e.run);
    }
    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? exit_pass : exit_usage;
    }
    try
    {
        for (auto const& [sub, run] : subs)
        {
            if (sub->parsed())
            {
                return run(common);
            }
        }
    }
    catch (ConfigError const& e)
    {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (DomainError const& e)
    {
        std::cerr << "invalid parameter: " << e.what() << '\n';
        return exit_usage;
    }
    catch (IoError const& e)
    {
        std::cerr << "io error: " << e.what() << '\n';
        return exit_usage;
    }
    catch (NumericError const& e)
    {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return exit_numeric;
    }
    return exit_usage;
}
