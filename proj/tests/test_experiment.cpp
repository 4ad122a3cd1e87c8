#include <filesystem>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "levyratio/errors.hpp"
#include "levyratio/experiment.hpp"
#include "levyratio/io.hpp"

using namespace levyratio;
namespace fs = std::filesystem;

namespace
{
char const* const small_config = R"(
[measure]
name = stable_positive
beta = 0.5

[weights]
name = two_point
a = 0
b = 1
p = 0.5

[run]
t = 0.5, 2
n = 3000
seed = 5

[compare]
target = limit_cdf
beta = 0.5

[output]
dir = unused
)";

std::string slurp(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}
}  // namespace

TEST_CASE("load experiment")
{
    auto e = load_experiment(Config::from_string(small_config));
    CHECK(e.t_values.size() == 2);
    CHECK(e.n == 3000);
    CHECK(e.target == CompareTarget::limit_cdf);
    CHECK(e.ks_max.has_value());
    CHECK(e.batch.seed == 5);

    CHECK_THROWS_AS(load_experiment(Config::from_string(std::string(small_config)
                                                        + "[series]\ntypo = 1\n")),
                    ConfigError);
    auto bad_t = std::string(small_config);
    bad_t.replace(bad_t.find("t = 0.5, 2"), 10, "t = -1");
    CHECK_THROWS_AS(load_experiment(Config::from_string(bad_t)), ConfigError);
    auto bad_measure = std::string(small_config);
    bad_measure.replace(bad_measure.find("stable_positive"), 15, "stable_negative");
    CHECK_THROWS_AS(load_experiment(Config::from_string(bad_measure)), ConfigError);
}

TEST_CASE("verify on the stable arcsine case")
{
    auto e = load_experiment(Config::from_string(small_config));
    std::vector<RatioBatch> batches;
    auto report = run_verify(e, &batches);
    REQUIRE(report.rows.size() == 2);
    CHECK(report.pass);
    for (auto const& row : report.rows)
    {
        CHECK(row.ks_statistic >= 0);
        CHECK(row.ks_statistic <= 1);
        CHECK(row.ks_pass);
    }
    CHECK(batches.size() == 2);
}

TEST_CASE("failing variance check gives a failing report")
{
    auto text = std::string(small_config);
    text.replace(text.find("target = limit_cdf\nbeta = 0.5"), 28,
                 "target = point_mass\nvariance_ratio_max = 0.01");
    auto e = load_experiment(Config::from_string(text));
    auto report = run_verify(e);
    CHECK_FALSE(report.pass);
    CHECK_FALSE(report.rows.front().variance_pass);
}

TEST_CASE("outputs are byte identical across reruns")
{
    auto e = load_experiment(Config::from_string(small_config));
    auto const base = fs::temp_directory_path() / "levyratio_unit_io";
    fs::remove_all(base);
    std::vector<std::string> names;
    for (auto const* sub : {"a", "b"})
    {
        std::vector<RatioBatch> batches;
        auto report = run_verify(e, &batches);
        names = write_verify_outputs((base / sub).string(), e, report, batches);
    }
    REQUIRE(names.size() == 6);
    for (auto const& name : names)
    {
        CHECK(slurp(base / "a" / name) == slurp(base / "b" / name));
    }
    auto const csv = slurp(base / "a" / "batch_00.csv");
    CHECK(csv.rfind("replicate,T,R,V\n", 0) == 0);
    fs::remove_all(base);
}

TEST_CASE("number formatting round-trips")
{
    for (double x : {0.1, 1.0 / 3, 1e-300, 12345.678})
    {
        CHECK(std::stod(format_real(x)) == x);
    }
    CHECK(format_real(std::numeric_limits<double>::infinity()) == "inf");
}
