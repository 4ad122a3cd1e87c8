#include <doctest.h>

#include "levyratio/config.hpp"
#include "levyratio/errors.hpp"

using namespace levyratio;

TEST_CASE("parse sections, comments and lists")
{
    auto cfg = Config::from_string(R"(
# leading comment
[run]
t = 1e-2, 1e-3 ; trailing
n = 10
flag = yes

[measure]
name = stable_positive
)");
    CHECK(cfg.get_list("run", "t") == std::vector<double>{1e-2, 1e-3});
    CHECK(cfg.get_int("run", "n", 0) == 10);
    CHECK(cfg.get_bool("run", "flag", false));
    CHECK(cfg.get_string("measure", "name") == "stable_positive");
    CHECK(cfg.get_double("measure", "beta", 0.5) == 0.5);
    CHECK_NOTHROW(cfg.check_all_used());
}

TEST_CASE("config errors")
{
    CHECK_THROWS_AS(Config::from_string("[a]\nx = 1\nx = 2\n"), ConfigError);
    CHECK_THROWS_AS(Config::from_string("[a]\njunk line\n"), ConfigError);
    auto cfg = Config::from_string("[a]\nx = abc\ny = 1\n");
    CHECK_THROWS_AS(cfg.get_double("a", "x"), ConfigError);
    CHECK_THROWS_AS(cfg.get_string("a", "missing"), ConfigError);
    CHECK_THROWS_AS(cfg.check_all_used(), ConfigError);
    CHECK_NOTHROW(cfg.check_all_used({"b"}));
    CHECK_THROWS_AS(Config::from_file("/nonexistent/file.ini"), ConfigError);
}

TEST_CASE("echo is canonical")
{
    auto a = Config::from_string("[b]\nz = 1\ny = 2\n[a]\nk = v\n");
    auto b = Config::from_string("[a]\nk   =   v\n\n[b]\ny=2\nz=1\n");
    CHECK(a.echo() == b.echo());
    CHECK(a.echo({"b"}) == "[a]\nk = v\n");
}
