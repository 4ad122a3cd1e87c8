#pragma once

#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "experiment.hpp"
#include "limits.hpp"
#include "simulate.hpp"

namespace levyratio
{
//! Round-trip decimal form ("%.17g"); "nan", "inf", "-inf" for non-finite.
std::string format_real(double x);

//! replicate,T,R,V
std::string batch_csv(RatioBatch const& batch);
//! JSON sidecar of a batch; config_echo is stored verbatim.
std::string batch_json(RatioBatch const& batch, std::string const& config_echo,
                       bool include_samples = false);

std::string verify_csv(VerifyReport const& report);
std::string verify_json(VerifyReport const& report, ExperimentConfig const& cfg);

struct LimitRow
{
    double x = 0;
    double cdf = 0;
    double density = 0;
    double error = 0;
};

std::string limit_csv(std::vector<LimitRow> const& rows);
std::string limit_json(LimitLaw const& law, std::string const& method,
                       std::vector<LimitRow> const& rows);

//! x,centered_feller,relative_stability,stochastic_compactness
std::string diagnostics_csv(DiagnosticsReport const& report);
std::string diagnostics_json(DiagnosticsReport const& report, std::string const& measure);

//! Run description without timing so that reruns compare equal.
std::string manifest_json(std::string const& command, ExperimentConfig const& cfg,
                          std::vector<std::string> const& files);

void write_file(std::string const& path, std::string const& content);

/*!
 * Write verify.csv or verify.json, one batch file per t and manifest.json
 * into dir. Returns the file names written.
 */
std::vector<std::string> write_verify_outputs(std::string const& dir,
                                              ExperimentConfig const& cfg,
                                              VerifyReport const& report,
                                              std::vector<RatioBatch> const& batches);

inline constexpr char const* artifact_version = "1.0.0";

}  // namespace levyratio
