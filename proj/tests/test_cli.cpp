#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "silt/cli.hpp"
#include "silt/config.hpp"
#include "silt/errors.hpp"

using namespace silt;
using json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& contents)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << contents;
    return path.string();
}

}  // namespace

TEST_CASE("config defaults and parsing")
{
    std::istringstream empty("");
    const RunConfig cfg = parse_config(empty);
    CHECK(cfg.length() == 1.0);
    CHECK(cfg.n == 512);
    CHECK(cfg.normalization == Normalization::paper);
    CHECK(cfg.effective_min_gap() == doctest::Approx(2.0 / 512));

    std::istringstream text("# comment\n[grid]\nn = 2048\n[model]\nname = perturbed:sl\n[run]\nseed = 9\n");
    const RunConfig c2 = parse_config(text);
    CHECK(c2.n == 2048);
    CHECK(c2.model == "perturbed:sl");
    CHECK(c2.seed == 9);
    CHECK(c2.length() == doctest::Approx(std::numbers::pi / 2));

    std::istringstream bad("[grid]\nwidth = 3\n");
    CHECK_THROWS_WITH_AS(parse_config(bad, "c.ini"), doctest::Contains("width"), ValidationError);
    std::istringstream bad_line("[run]\nseed = 1\nlevels = many\n");
    CHECK_THROWS_WITH_AS(parse_config(bad_line, "c.ini"), doctest::Contains("c.ini:3"), ValidationError);
    CHECK_THROWS_AS(load_config("/nonexistent/silt.ini"), ValidationError);
}

TEST_CASE("gram command")
{
    const auto r = call({"gram", "--model", "wiener", "--times", "0.2,0.5,0.9"});
    REQUIRE(r.code == exit_ok);
    const auto j = json::parse(r.out);
    CHECK(j["gamma"].get<double>() == doctest::Approx(0.12));
    CHECK(j["tool"] == "silt");
    CHECK(j["convention"] == "paper");
    CHECK(j["grid"]["n"] == 512);
    CHECK(j["config"]["model"] == "wiener");
}

TEST_CASE("flags override config files")
{
    const auto path = temp_file("silt_test_cfg.ini", "[grid]\nn = 2048\n[run]\nnormalization = analytic\n");
    const auto r = call({"--config", path, "--n", "1024", "gram", "--times", "0.2,0.5"});
    REQUIRE(r.code == exit_ok);
    const auto j = json::parse(r.out);
    CHECK(j["config"]["n"] == 1024);
    CHECK(j["config"]["normalization"] == "analytic");

    const auto bad = temp_file("silt_test_bad.ini", "[grid]\ncolour = red\n");
    const auto rb = call({"--config", bad, "gram", "--times", "0.2,0.5"});
    CHECK(rb.code == exit_validation);
    CHECK(rb.err.find("colour") != std::string::npos);
}

TEST_CASE("regularize command")
{
    const auto r = call({"regularize", "--model", "wiener", "--k", "2", "--h1", "const1", "--h2", "const1"});
    REQUIRE(r.code == exit_ok);
    const auto j = json::parse(r.out);
    CHECK(j["value"].get<double>() == doctest::Approx(oracle::wiener_k2_const_integral()).epsilon(1e-3));
    CHECK(j["converged"] == true);
    CHECK(j["level_estimates"].size() == 6);
}

TEST_CASE("transform, mc and selftest commands")
{
    const auto t = call({"transform", "--times", "0.2,0.5,0.9", "--h1", "const1", "--h2", "const1"});
    REQUIRE(t.code == exit_ok);
    CHECK(json::parse(t.out)["value"].get<double>() == doctest::Approx(std::exp(-0.7) / 0.12));

    const auto e = call({"transform", "--times", "0.2,0.7", "--eps", "0.1", "--ladder"});
    REQUIRE(e.code == exit_ok);
    const auto je = json::parse(e.out);
    CHECK(je["value"].get<double>() == doctest::Approx(1.0 / 0.6));
    CHECK(je["eps_ladder"].size() == 6);

    const auto mc = call({"mc", "--times", "0.2,0.7", "--eps", "0.5", "--samples", "20000", "--seed", "3"});
    REQUIRE(mc.code == exit_ok);
    const auto jm = json::parse(mc.out);
    CHECK(jm["convention"] == "analytic");
    CHECK(std::abs(jm["z_score"].get<double>()) <= 3.0);

    const auto s = call({"selftest"});
    CHECK(s.code == exit_ok);
    CHECK(json::parse(s.out)["failed"] == 0);
}

TEST_CASE("csv commands")
{
    const auto d = call({"diverge", "--k", "2", "--deltas", "0.1,0.01"});
    REQUIRE(d.code == exit_ok);
    CHECK(d.out.rfind("# {", 0) == 0);
    CHECK(d.out.find("\ndelta,value\n") != std::string::npos);

    const auto s = call({"slnd", "--model", "perturbed:sl", "--times", "0.2,0.6,1.0", "--subset", "1", "--scan",
                         "0.1,0.01,0.001"});
    REQUIRE(s.code == exit_ok);
    CHECK(s.out.find("gap,value") != std::string::npos);

    const auto b = call({"berman", "--model", "counterexample", "--times", "0.3,0.5,0.8", "--scan", "0.1,0.0001"});
    REQUIRE(b.code == exit_ok);
    const auto p = call({"pdecay", "--model", "counterexample", "--t1", "0", "--h", "e", "--scan", "0.1,0.01"});
    REQUIRE(p.code == exit_ok);
    const auto sc = call({"schur", "--h", "const1"});
    REQUIRE(sc.code == exit_ok);
    CHECK(json::parse(sc.out)["pass"] == true);
}

TEST_CASE("output file and determinism")
{
    const auto path = (std::filesystem::temp_directory_path() / "silt_test_out.json").string();
    std::remove(path.c_str());
    const auto r = call({"--out", path, "gram", "--times", "0.1,0.3", "--h", "sin:1"});
    REQUIRE(r.code == exit_ok);
    CHECK(r.out.empty());
    std::ifstream in(path);
    std::stringstream body;
    body << in.rdbuf();
    CHECK(json::parse(body.str())["command"] == "gram");

    const auto a = call({"regularize", "--model", "counterexample", "--k", "3", "--h1", "e"});
    const auto b = call({"regularize", "--model", "counterexample", "--k", "3", "--h1", "e"});
    CHECK(a.out == b.out);
}

TEST_CASE("errors map to exit codes and name the offending token")
{
    auto r = call({"gram", "--model", "brownian", "--times", "0.2,0.5"});
    CHECK(r.code == exit_validation);
    CHECK(r.err.find("brownian") != std::string::npos);

    r = call({"gram", "--times", "0.2,abc"});
    CHECK(r.code == exit_validation);
    CHECK(r.err.find("abc") != std::string::npos);

    r = call({"transform", "--times", "0.2,0.5", "--h1", "wavelet"});
    CHECK(r.code == exit_validation);
    CHECK(r.err.find("wavelet") != std::string::npos);

    r = call({"gram", "--times", "0.2,0.5", "--h", "file:/nonexistent/h.csv"});
    CHECK(r.code == exit_validation);
    CHECK(r.err.find("/nonexistent/h.csv") != std::string::npos);

    CHECK(call({"frobnicate"}).code == exit_validation);
    CHECK(call({}).code == exit_validation);

    r = call({"--model", "perturbed:sl", "--T", "1", "gram", "--times", "0.2,0.5"});
    CHECK(r.code == exit_validation);

    // two levels are not enough for an oscillating shift: flagged, value still reported
    r = call({"regularize", "--k", "2", "--h1", "sin:5", "--levels", "2"});
    CHECK(r.code == exit_numerical);
    CHECK(json::parse(r.out)["converged"] == false);
    CHECK(r.err.find("did not converge") != std::string::npos);

    r = call({"gram", "--model", "counterexample", "--times", "0.5,0.5000000000001,0.5000000000002,0.9",
              "--min-gap", "1e-15"});
    CHECK(r.code == exit_numerical);
    CHECK(r.err.find("smallest gap") != std::string::npos);
    r = call({"gram", "--times", "0.5,0.5001", "--min-gap", "0.01"});
    CHECK(r.code == exit_validation);
}
