// End-to-end checks; one PASS/FAIL line per criterion.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "levyratio/config.hpp"
#include "levyratio/diagnostics.hpp"
#include "levyratio/experiment.hpp"
#include "levyratio/io.hpp"
#include "levyratio/limits.hpp"
#include "levyratio/numerics.hpp"
#include "levyratio/simulate.hpp"
#include "levyratio/stats.hpp"

using namespace levyratio;
namespace fs = std::filesystem;

namespace
{
using Clock = std::chrono::steady_clock;

struct Outcome
{
    bool pass = true;
    std::string detail;
};

std::string fmt(char const* f, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double seconds_since(Clock::time_point start)
{
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Batches whose mean of T is checked against EX
struct MeanCase
{
    std::string label;
    double ex;
    MeanSe t;
};
std::vector<MeanCase> mean_cases;

void record_mean(std::string label, WeightLaw const& w, RatioBatch const& b)
{
    mean_cases.push_back({std::move(label), w.mean(), mean_se(b.ratios)});
}

RatioBatch arcsine_batch;
ExperimentConfig arcsine_cfg;

std::string config_path(std::string const& name)
{
    return (fs::path(LEVYRATIO_SOURCE_DIR) / "configs" / name).string();
}

Outcome criterion1()
{
    arcsine_cfg = load_experiment(Config::from_file(config_path("arcsine.ini")));
    auto const start = Clock::now();
    arcsine_batch = ratio_batch(1, arcsine_cfg.measure, arcsine_cfg.weights, 100000,
                                arcsine_cfg.batch);
    double const secs = seconds_since(start);
    record_mean("stable(0.5) x two_point, t=1, series", arcsine_cfg.weights, arcsine_batch);

    LimitLaw law(0.5, arcsine_cfg.weights);
    double const ks = ks_statistic(arcsine_batch.ratios,
                                   [&](double x) { return limit_cdf(x, law); });
    double const reference = arcsine_batch.reference_mass;
    double const residual = arcsine_batch.residual_error_bound / reference;
    double const raw = arcsine_batch.discarded_mass_bound / reference;
    Outcome o;
    o.pass = ks <= 0.01 && residual <= 1e-6 && secs <= 60;
    o.detail = "KS=" + fmt("%.5f", ks) + " (<= 0.01), uncompensated remainder rms / tI(1)="
               + fmt("%.2e", residual) + " (<= 1e-6), expected discarded mass / tI(1)="
               + fmt("%.2e", raw) + " (compensated in mean), runtime " + fmt("%.1f", secs)
               + " s with " + std::to_string(arcsine_cfg.batch.jobs) + " job(s) (<= 60 s)";
    return o;
}

Outcome criterion2()
{
    double worst = 0;
    for (double beta : {0.3, 0.5, 0.7})
    {
        for (double p : {0.3, 0.5})
        {
            LimitLaw law(beta, WeightLaw::two_point(0, 1, p));
            auto mass = [&](double a, double b) {
                // [a, b] with b <= 1/2 directly; otherwise mirror about 1/2,
                // g(1 - x; beta, p) = g(x; beta, 1 - p)
                auto g = [&](double q) {
                    return [=](double x) { return lamperti_density(x, beta, q); };
                };
                if (b <= 0.5)
                {
                    return numerics::integrate(g(p), a, b, 1e-13).value;
                }
                if (a >= 0.5)
                {
                    return numerics::integrate(g(1 - p), 1 - b, 1 - a, 1e-13).value;
                }
                return numerics::integrate(g(p), a, 0.5, 1e-13).value
                       + numerics::integrate(g(1 - p), 1 - b, 0.5, 1e-13).value;
            };
            for (int i = 0; i < 20; ++i)
            {
                double const a = i / 20.0;
                double const b = (i + 1) / 20.0;
                double const diff = limit_cdf(b, law) - limit_cdf(a, law);
                worst = std::fmax(worst, std::fabs(diff - mass(a, b)));
            }
        }
    }
    return {worst <= 1e-6, "max |dF - int g| over 6 laws x 20 cells = " + fmt("%.2e", worst)
                               + " (<= 1e-6)"};
}

Outcome criterion3()
{
    double worst = 0;
    double worst_scale = 0;
    for (double beta : {0.3, 0.5, 0.7})
    {
        for (double p : {0.3, 0.5})
        {
            auto const w = WeightLaw::two_point(0, 1, p);
            LimitLaw law(beta, w);
            LimitLaw scaled(beta, w, 3.7);
            for (int i = 0; i <= 20; ++i)
            {
                double const x = i / 20.0;
                double const f = fourier_cdf(x, law).value;
                worst = std::fmax(worst, std::fabs(f - limit_cdf(x, law)));
                worst_scale = std::fmax(worst_scale, std::fabs(f - fourier_cdf(x, scaled).value));
            }
        }
    }
    return {worst <= 1e-4 && worst_scale <= 1e-6,
            "max |fourier - closed form| = " + fmt("%.2e", worst) + " (<= 1e-4), max |c=1 - c=3.7| = "
                + fmt("%.2e", worst_scale) + " (<= 1e-6)"};
}

Outcome criterion4()
{
    double worst_q = 0;
    double worst_mc = 0;
    auto const coin = WeightLaw::two_point(0, 1, 0.5);
    for (double beta : {0.25, 0.5, 0.75})
    {
        auto const m = make_stable(beta);
        for (double t : {0.1, 1.0, 10.0})
        {
            double const er = expected_rt(t, *m).value;
            worst_q = std::fmax(worst_q, std::fabs(er - (1 - beta)));
            BatchOptions opts;
            opts.seed = 4;
            // About 2000 terms per replicate; the rest is added in mean
            opts.series.jump_floor_eps = std::pow(t / 2000, 1 / beta);
            opts.series.remainder = RemainderMode::mean;
            auto const b = ratio_batch(t, m, coin, 100000, opts);
            record_mean("stable(" + fmt("%g", beta) + ") x two_point, t=" + fmt("%g", t), coin, b);
            worst_mc = std::fmax(worst_mc, std::fabs(mean_se(b.rt_values).mean - er));
        }
    }
    return {worst_q <= 1e-6 && worst_mc <= 0.01,
            "max |E R_t - (1-beta)| = " + fmt("%.2e", worst_q) + " (<= 1e-6), max |mean R - E R_t| = "
                + fmt("%.4f", worst_mc) + " (<= 0.01)"};
}

struct EnginePair
{
    std::string label;
    MeasurePtr measure;
    WeightLaw weights;
    double t;
    double floor;
};

Outcome criterion7()
{
    std::vector<EnginePair> pairs = {
        {"stable(0.5) x two_point(0,1,0.5)", make_stable(0.5), WeightLaw::two_point(0, 1, 0.5),
         1.0, 1e-6},
        {"exp_compound_poisson x uniform(-1,2)", make_exp_compound_poisson(),
         WeightLaw::uniform(-1, 2), 3.0, 1e-9},
        {"log_slowly_varying x gaussian(0,1)", make_log_slowly_varying(),
         WeightLaw::gaussian(0, 1), 0.5, 1e-9},
    };
    std::size_t const n = 20000;
    double const crit = ks_critical_two_sample(n, n, 0.01);
    Outcome o;
    for (auto const& pr : pairs)
    {
        BatchOptions opts;
        opts.seed = 71;
        opts.series.jump_floor_eps = pr.floor;
        opts.series.remainder = RemainderMode::mean;
        opts.shells.small_shell_floor = pr.floor;
        opts.shells.remainder = RemainderMode::mean;
        opts.engine = Engine::series;
        auto const a = ratio_batch(pr.t, pr.measure, pr.weights, n, opts);
        opts.engine = Engine::layered;
        opts.seed = 72;
        auto const b = ratio_batch(pr.t, pr.measure, pr.weights, n, opts);
        record_mean(pr.label + ", series", pr.weights, a);
        record_mean(pr.label + ", layered", pr.weights, b);
        double const ks_t = ks_two_sample(a.ratios, b.ratios);
        double const ks_v = ks_two_sample(a.v_values, b.v_values);
        o.pass = o.pass && ks_t < crit && ks_v < crit;
        o.detail += pr.label + ": KS(T)=" + fmt("%.4f", ks_t) + " KS(V)=" + fmt("%.4f", ks_v)
                    + "; ";
    }
    o.detail += "critical " + fmt("%.4f", crit);
    return o;
}

Outcome criterion8()
{
    auto sv = load_experiment(Config::from_file(config_path("slowly_varying.ini")));
    std::vector<RatioBatch> sv_batches;
    auto const sv_report = run_verify(sv, &sv_batches);
    for (std::size_t i = 0; i < sv_batches.size(); ++i)
    {
        record_mean("log_slowly_varying x gaussian, t=" + fmt("%g", sv.t_values[i]),
                    sv.weights, sv_batches[i]);
    }
    auto io = load_experiment(Config::from_file(config_path("index_one.ini")));
    std::vector<RatioBatch> io_batches;
    auto const io_report = run_verify(io, &io_batches);
    record_mean("index_one x two_point, t=1e-4", io.weights, io_batches.front());

    Outcome o;
    o.detail = "slowly varying KS over t=1e-2,1e-3,1e-4:";
    for (auto const& r : sv_report.rows)
    {
        o.detail += " " + fmt("%.5f", r.ks_statistic);
    }
    o.detail += std::string(sv_report.trend_pass ? " (strictly decreasing)" : " (NOT strictly decreasing)")
                + ", final " + (sv_report.final_pass ? "<= 0.05" : "> 0.05");
    auto const& row = io_report.rows.front();
    o.detail += "; index one Var(T)/Var(X) at t=1e-4 = " + fmt("%.4f", row.var_ratio)
                + " (<= 0.01 required; E R_t = "
                + fmt("%.4f", expected_rt(1e-4, *io.measure, false).value) + ")";
    o.pass = sv_report.trend_pass && sv_report.final_pass && row.variance_pass;
    return o;
}

Outcome criterion5()
{
    Outcome o;
    double worst = 0;
    std::string worst_label;
    for (auto const& c : mean_cases)
    {
        double const z = std::fabs(c.t.mean - c.ex) / c.t.se;
        if (z > worst)
        {
            worst = z;
            worst_label = c.label;
        }
        if (!(z <= 4))
        {
            o.pass = false;
            o.detail += c.label + " off by " + fmt("%.2f", z) + " SE; ";
        }
    }
    o.detail += std::to_string(mean_cases.size()) + " batches, worst |mean T - EX| = "
                + fmt("%.2f", worst) + " SE (" + worst_label + ")";
    return o;
}

Outcome criterion6()
{
    double sum = 0;
    for (double x : arcsine_batch.ratios)
    {
        sum += x * x;
    }
    double const m2 = sum / double(arcsine_batch.ratios.size());
    double const target = limit_second_moment(LimitLaw(0.5, arcsine_cfg.weights));
    return {std::fabs(m2 - target) <= 0.005,
            "E T^2 = " + fmt("%.5f", m2) + " vs " + fmt("%.3f", target) + " (tolerance 0.005)"};
}

Outcome criterion9()
{
    Outcome o;
    double worst = 0;
    for (double beta : {0.25, 0.5, 0.75, 0.9})
    {
        auto const m = make_stable(beta);
        for (auto end : {ScanEnd::zero, ScanEnd::infinity})
        {
            GridSpec grid;
            grid.end = end;
            auto rel = [&](RatioScan const& s, double v) {
                for (double r : s.ratio)
                {
                    worst = std::fmax(worst, std::fabs(r - v) / v);
                }
            };
            rel(centered_feller_scan(*m, grid), (2 - beta) / beta);
            rel(relative_stability_scan(*m, grid), 1 - beta);
            rel(stochastic_compactness_scan(*m, grid), beta * (2 - beta) / (2 * (1 - beta)));
        }
    }
    GridSpec fine;
    fine.decades = 10;
    auto const block = diagnose(*make_block_oscillating(), fine);
    bool const unbounded = block.centered_feller.unbounded;
    bool const liminf_zero = !block.inf_condition;
    o.pass = worst <= 1e-6 && unbounded && liminf_zero;
    o.detail = "max relative deviation of stable scans = " + fmt("%.2e", worst)
               + " (<= 1e-6); block measure on 10 decades: centered Feller unbounded="
               + (unbounded ? "yes" : "no") + ", liminf x tail/I = "
               + fmt("%.4f", block.relative_stability.liminf_estimate) + " ("
               + (liminf_zero ? "flagged" : "not flagged") + "), class "
               + to_string(block.classification);
    return o;
}

std::string slurp(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome criterion10()
{
    auto const base = fs::temp_directory_path() / "levyratio_acceptance_determinism";
    fs::remove_all(base);
    std::vector<std::string> names;
    for (auto const* run : {"run1", "run2"})
    {
        // Each run reloads the config from disk, as a fresh `verify` would
        auto cfg = load_experiment(Config::from_file(config_path("slowly_varying.ini")));
        std::vector<RatioBatch> batches;
        auto const report = run_verify(cfg, &batches);
        names = write_verify_outputs((base / run).string(), cfg, report, batches);
    }
    std::size_t same = 0;
    for (auto const& name : names)
    {
        same += slurp(base / "run1" / name) == slurp(base / "run2" / name);
    }
    fs::remove_all(base);
    return {same == names.size() && !names.empty(),
            std::to_string(same) + "/" + std::to_string(names.size())
                + " output files byte-identical across two verify runs"};
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria"};
    std::vector<int> allowed;
    app.add_option("--allow-fail", allowed,
                   "Criteria whose failure is documented and does not set the exit status");
    CLI11_PARSE(app, argc, argv);
    std::set<int> const allow(allowed.begin(), allowed.end());

    // Order matters: 5 and 6 reuse batches produced by 1, 4, 7 and 8
    std::vector<std::pair<int, std::function<Outcome()>>> const steps = {
        {1, criterion1}, {2, criterion2}, {3, criterion3}, {4, criterion4},
        {7, criterion7}, {8, criterion8}, {5, criterion5}, {6, criterion6},
        {9, criterion9}, {10, criterion10}};
    std::vector<std::pair<int, Outcome>> results;
    for (auto const& [id, run] : steps)
    {
        Outcome o;
        try
        {
            o = run();
        }
        catch (std::exception const& e)
        {
            o = {false, std::string("exception: ") + e.what()};
        }
        results.emplace_back(id, o);
        std::fprintf(stderr, "[criterion %d done]\n", id);
    }
    std::sort(results.begin(), results.end(),
              [](auto const& a, auto const& b) { return a.first < b.first; });
    int unexpected = 0;
    for (auto const& [id, o] : results)
    {
        std::printf("criterion %2d: %s - %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        if (!o.pass && !allow.count(id))
        {
            ++unexpected;
        }
    }
    std::fflush(stdout);
    return unexpected == 0 ? 0 : 1;
}
