#include "levyratio/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "levyratio/errors.hpp"

namespace levyratio
{
namespace
{
using json = nlohmann::ordered_json;

// Non-finite values are stored as strings so that the JSON stays valid
json real(double x)
{
    if (std::isfinite(x))
    {
        return x;
    }
    return format_real(x);
}

json real_array(std::vector<double> const& xs)
{
    json out = json::array();
    for (double x : xs)
    {
        out.push_back(real(x));
    }
    return out;
}

std::string dump(json const& j)
{
    return j.dump(2) + "\n";
}

json scan_json(RatioScan const& scan)
{
    json j;
    j["condition"] = scan.condition;
    j["limsup_estimate"] = real(scan.limsup_estimate);
    j["liminf_estimate"] = real(scan.liminf_estimate);
    j["trend_slope"] = real(scan.trend_slope);
    j["trend_pvalue"] = real(scan.trend_pvalue);
    j["unbounded"] = scan.unbounded;
    return j;
}

std::string batch_file_name(std::size_t index, std::string const& format)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "batch_%02zu.%s", index, format.c_str());
    return buf;
}
}  // namespace

std::string format_real(double x)
{
    if (std::isnan(x))
    {
        return "nan";
    }
    if (std::isinf(x))
    {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string batch_csv(RatioBatch const& batch)
{
    std::string out = "replicate,T,R,V\n";
    out.reserve(batch.n * 64);
    for (std::size_t i = 0; i < batch.ratios.size(); ++i)
    {
        out += std::to_string(i);
        out += ',';
        out += format_real(batch.ratios[i]);
        out += ',';
        out += format_real(batch.rt_values[i]);
        out += ',';
        out += format_real(batch.v_values[i]);
        out += '\n';
    }
    return out;
}

std::string batch_json(RatioBatch const& batch, std::string const& config_echo,
                       bool include_samples)
{
    json j;
    j["t"] = real(batch.t);
    j["n"] = batch.n;
    j["engine"] = to_string(batch.engine);
    j["seed"] = batch.seed;
    j["remainder"] = to_string(batch.remainder);
    j["discarded_mass_bound"] = real(batch.discarded_mass_bound);
    j["residual_error_bound"] = real(batch.residual_error_bound);
    j["reference_mass"] = real(batch.reference_mass);
    j["mean_terms"] = real(batch.mean_terms);
    j["zero_v_count"] = batch.zero_v_count;
    j["config"] = config_echo;
    if (include_samples)
    {
        j["T"] = real_array(batch.ratios);
        j["R"] = real_array(batch.rt_values);
        j["V"] = real_array(batch.v_values);
    }
    return dump(j);
}

std::string verify_csv(VerifyReport const& report)
{
    std::string out
        = "t,n,ks_statistic,ks_critical_at_alpha,mean_T,se_T,var_T,var_ratio,mean_R,se_R,"
          "discarded_mass_bound,residual_error_bound,mean_terms,zero_v_count,ks_pass,"
          "mean_pass,variance_pass,pass\n";
    for (auto const& r : report.rows)
    {
        for (double x : {r.t})
        {
            out += format_real(x);
        }
        out += ',' + std::to_string(r.n);
        for (double x : {r.ks_statistic, r.ks_critical_at_alpha, r.mean_T, r.se_T, r.var_T,
                         r.var_ratio, r.mean_R, r.se_R, r.discarded_mass_bound,
                         r.residual_error_bound, r.mean_terms})
        {
            out += ',' + format_real(x);
        }
        out += ',' + std::to_string(r.zero_v_count);
        for (bool b : {r.ks_pass, r.mean_pass, r.variance_pass, r.pass})
        {
            out += b ? ",1" : ",0";
        }
        out += '\n';
    }
    return out;
}

std::string verify_json(VerifyReport const& report, ExperimentConfig const& cfg)
{
    json j;
    j["target"] = to_string(cfg.target);
    if (cfg.target == CompareTarget::limit_cdf)
    {
        j["beta"] = real(cfg.limit_beta);
    }
    j["alpha"] = real(cfg.alpha);
    j["trend_pass"] = report.trend_pass;
    j["final_pass"] = report.final_pass;
    j["pass"] = report.pass;
    json rows = json::array();
    for (auto const& r : report.rows)
    {
        json row;
        row["t"] = real(r.t);
        row["n"] = r.n;
        row["ks_statistic"] = real(r.ks_statistic);
        row["ks_critical_at_alpha"] = real(r.ks_critical_at_alpha);
        row["mean_T"] = real(r.mean_T);
        row["se_T"] = real(r.se_T);
        row["var_T"] = real(r.var_T);
        row["var_ratio"] = real(r.var_ratio);
        row["mean_R"] = real(r.mean_R);
        row["se_R"] = real(r.se_R);
        row["discarded_mass_bound"] = real(r.discarded_mass_bound);
        row["residual_error_bound"] = real(r.residual_error_bound);
        row["mean_terms"] = real(r.mean_terms);
        row["zero_v_count"] = r.zero_v_count;
        row["ks_pass"] = r.ks_pass;
        row["mean_pass"] = r.mean_pass;
        row["variance_pass"] = r.variance_pass;
        row["pass"] = r.pass;
        rows.push_back(row);
    }
    j["rows"] = rows;
    return dump(j);
}

std::string limit_csv(std::vector<LimitRow> const& rows)
{
    std::string out = "x,cdf,density\n";
    for (auto const& r : rows)
    {
        out += format_real(r.x) + ',' + format_real(r.cdf) + ',' + format_real(r.density)
               + '\n';
    }
    return out;
}

std::string limit_json(LimitLaw const& law, std::string const& method,
                       std::vector<LimitRow> const& rows)
{
    json j;
    j["beta"] = real(law.beta);
    j["weights"] = law.weights.name();
    j["scale_c"] = real(law.scale_c);
    j["method"] = method;
    double max_err = 0;
    for (auto const& r : rows)
    {
        max_err = std::fmax(max_err, r.error);
    }
    j["max_quadrature_error"] = real(max_err);
    json pts = json::array();
    for (auto const& r : rows)
    {
        pts.push_back(json{{"x", real(r.x)},
                           {"cdf", real(r.cdf)},
                           {"density", real(r.density)},
                           {"error", real(r.error)}});
    }
    j["points"] = pts;
    return dump(j);
}

std::string diagnostics_csv(DiagnosticsReport const& report)
{
    std::string out = "x,centered_feller,relative_stability,stochastic_compactness\n";
    auto const& x = report.centered_feller.x;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        out += format_real(x[i]) + ',' + format_real(report.centered_feller.ratio[i]) + ','
               + format_real(report.relative_stability.ratio[i]) + ','
               + format_real(report.stochastic_compactness.ratio[i]) + '\n';
    }
    return out;
}

std::string diagnostics_json(DiagnosticsReport const& report, std::string const& measure)
{
    json j;
    j["measure"] = measure;
    j["end"] = to_string(report.grid.end);
    j["grid"] = json{{"start", real(report.grid.start)},
                     {"points_per_decade", report.grid.points_per_decade},
                     {"decades", report.grid.decades}};
    j["centered_feller"] = scan_json(report.centered_feller);
    j["relative_stability"] = scan_json(report.relative_stability);
    j["stochastic_compactness"] = scan_json(report.stochastic_compactness);
    j["rv_index_estimate"] = json{{"slope", real(report.rv.slope)},
                                  {"residual", real(report.rv.residual)},
                                  {"slope_outer", real(report.rv.slope_outer)},
                                  {"slope_inner", real(report.rv.slope_inner)},
                                  {"collapse_deviation", real(report.rv.collapse_deviation)}};
    j["classification"] = to_string(report.classification);
    j["beta"] = real(report.beta);
    j["inf_condition"] = report.inf_condition;
    j["inf_tolerance"] = real(report.inf_tolerance);
    j["disclaimer"] = report.disclaimer;
    return dump(j);
}

std::string manifest_json(std::string const& command, ExperimentConfig const& cfg,
                          std::vector<std::string> const& files)
{
    json j;
    j["command"] = command;
    j["version"] = artifact_version;
    j["seed"] = cfg.batch.seed;
    j["partition_size"] = batch_partition_size;
    j["measure"] = cfg.measure->name();
    j["weights"] = cfg.weights.name();
    j["engine"] = to_string(cfg.batch.engine);
    j["files"] = files;
    j["config"] = cfg.raw.echo({"output"});
    return dump(j);
}

void write_file(std::string const& path, std::string const& content)
{
    std::filesystem::path const p(path);
    if (p.has_parent_path())
    {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
    {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out)
    {
        throw IoError("write to '" + path + "' failed");
    }
}

std::vector<std::string> write_verify_outputs(std::string const& dir,
                                              ExperimentConfig const& cfg,
                                              VerifyReport const& report,
                                              std::vector<RatioBatch> const& batches)
{
    namespace fs = std::filesystem;
    std::vector<std::string> files;
    auto const echo = cfg.raw.echo({"output"});
    bool const as_json = cfg.format == "json";
    for (std::size_t i = 0; i < batches.size(); ++i)
    {
        auto const name = batch_file_name(i, as_json ? "json" : "csv");
        if (as_json)
        {
            write_file((fs::path(dir) / name).string(), batch_json(batches[i], echo, true));
        }
        else
        {
            write_file((fs::path(dir) / name).string(), batch_csv(batches[i]));
            auto const side = batch_file_name(i, "meta.json");
            write_file((fs::path(dir) / side).string(), batch_json(batches[i], echo));
            files.push_back(name);
            files.push_back(side);
            continue;
        }
        files.push_back(name);
    }
    auto const summary = as_json ? "verify.json" : "verify.csv";
    write_file((fs::path(dir) / summary).string(),
               as_json ? verify_json(report, cfg) : verify_csv(report));
    files.emplace_back(summary);
    write_file((fs::path(dir) / "manifest.json").string(), manifest_json("verify", cfg, files));
    files.emplace_back("manifest.json");
    return files;
}

}  // namespace levyratio
