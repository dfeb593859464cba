#include "carleson/cli.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

using namespace carleson;
using namespace carleson::cli;

namespace {

struct Outcome {
    int code;
    std::string out, err;
};

Outcome verify(std::vector<std::string> args) {
    args.insert(args.begin(), "verify");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::main(int(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string config_error(const std::string& text) {
    try {
        parse_config(text, "run.cfg");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return {};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("config parsing") {
    const auto c = parse_config("# run\nsuites = moment, dyadic\ntol = 1e-8\ndyadic.check = covering\nout = r\n");
    CHECK(c.suites == std::vector<std::string>{"moment", "dyadic"});
    CHECK(c.suites_listed);
    CHECK(c.out_dir == "r");
    CHECK(c.params_for("dyadic").text("check", "") == "covering");
    CHECK(c.params_for("dyadic").number("tol", 0) == 1e-8);
    CHECK_FALSE(c.params_for("moment").has("check"));

    SuiteParams p;
    p.set("alpha", "0.5, -0.25", "x");
    CHECK(p.pair("alpha", {0, 0}) == std::array<double, 2>{0.5, -0.25});
    p.set("alpha", "2", "y");
    CHECK(p.pair("alpha", {0, 0}) == std::array<double, 2>{2.0, 2.0});
    p.set("n", "1.5", "cmd");
    CHECK_THROWS_WITH_AS(p.integer("n", 0), doctest::Contains("cmd"), ConfigError);
}

TEST_CASE("config errors carry positions") {
    CHECK(config_error("tol = 1e-6\nsuites = gamma, nope\n").rfind("run.cfg:2:17:", 0) == 0);
    CHECK(config_error("tol 1e-6\n").rfind("run.cfg:1:1:", 0) == 0);
    CHECK(config_error("\n  colour = red\n").rfind("run.cfg:2:3:", 0) == 0);
    CHECK(config_error("gamma.m = 1\n").rfind("run.cfg:1:7:", 0) == 0);
    CHECK(config_error("seed = x\n").rfind("run.cfg:1:8:", 0) == 0);
    CHECK(config_error("suites = gamma\nsuites = box\n").rfind("run.cfg:2:1:", 0) == 0);
    CHECK(config_error("tol =\n").find("missing value") != std::string::npos);
    CHECK_FALSE(config_error("tol = 0\n").empty());
    CHECK(config_error("suites =\n").empty());
}

TEST_CASE("exit codes") {
    CHECK(verify({"moment"}).code == 0);
    CHECK(verify({"nope"}).code == 2);
    CHECK(verify({"moment", "--cone", "lorentz"}).code == 2);
    CHECK(verify({"moment", "--tol", "-1"}).code == 2);
    CHECK(verify({"--bogus"}).code == 2);
    CHECK(verify({"box", "--m", "1", "--cone", "cylinder"}).code == 2);
    CHECK(verify({"dyadic", "--check", "covering", "--p", "3", "--q", "2"}).code == 2);
    // a tolerance no comparison can meet
    CHECK(verify({"moment", "--tol", "1e-300"}).code == 1);
    const auto r = verify({"moment"});
    CHECK(r.out.find("checks: ") != std::string::npos);
    CHECK(r.out.find("0 fail") != std::string::npos);
}

TEST_CASE("an empty suite list runs nothing") {
    const auto dir = std::filesystem::temp_directory_path() / "carleson_cli_empty";
    std::filesystem::create_directories(dir);
    {
        std::ofstream(dir / "run.cfg") << "suites =\n";
    }
    const auto r = verify({"all", "--config", (dir / "run.cfg").string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("0 checks") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("reports are byte identical across runs") {
    const auto base = std::filesystem::temp_directory_path() / "carleson_cli_det";
    std::filesystem::remove_all(base);
    for (const char* d : {"a", "b"})
        REQUIRE(verify({"dyadic", "--check", "covering,tiling", "--n", "500", "--out", (base / d).string()}).code == 0);
    for (const char* f : {"report.jsonl", "report.csv", "summary.json"}) {
        CHECK(!slurp(base / "a" / f).empty());
        CHECK(slurp(base / "a" / f) == slurp(base / "b" / f));
    }
    std::filesystem::remove_all(base);
}

TEST_CASE("covering check emits one record per interval") {
    RunConfig cfg;
    cfg.suites = {"dyadic"};
    cfg.global.set("check", "covering", "test");
    cfg.global.set("n", "10000", "test");
    cfg.global.set("seed", "7", "test");
    const auto r = run(cfg);
    std::size_t covering = 0;
    for (const auto& rec : r.records())
        if (rec.id.rfind("dyadic/covering/", 0) == 0) {
            ++covering;
            CHECK(rec.verdict == report::Verdict::Pass);
        }
    CHECK(covering == 10000);
    CHECK(r.passed());
}
