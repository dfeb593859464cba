#include "carleson/errors.hpp"
#include "carleson/report.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace carleson;
using namespace carleson::report;

namespace {

VerificationReport sample() {
    VerificationReport r;
    r.add(compare("b/two", "second statement", {{"x", 1}}, 2.0, 2.0 + 1e-9, 1e-6));
    r.add(compare("a/one", "first, with a comma", {}, 1.0, 1.5, 1e-6, "quote \"here\""));
    spectral::CalibrationRecord c;
    c.constant_name = "k";
    c.paper_value = 2.0;
    c.derived_value = 1.0;
    c.verdict = spectral::Verdict::Mismatch;
    r.add(from_calibration("c/three", "third statement", {}, c));
    r.finalize();
    return r;
}

}  // namespace

TEST_CASE("compare and property verdicts") {
    CHECK(compare("x", "a", {}, 1.0, 1.0 + 1e-7, 1e-6).verdict == Verdict::Pass);
    CHECK(compare("x", "a", {}, 1.0, 1.1, 1e-6).verdict == Verdict::Fail);
    CHECK(compare("x", "a", {}, 0.0, 1e-9, 1e-8).verdict == Verdict::Pass);
    const auto c = compare("x", "a", {}, 3.0, 3.0, 1e-6);
    CHECK_FALSE(c.paper);
    REQUIRE(c.expected);
    CHECK(*c.expected == 3.0);
    CHECK(property("y", "a", {}, false, 0.0, 0.0).verdict == Verdict::Fail);
}

TEST_CASE("records are sorted, counted and unique") {
    const auto r = sample();
    REQUIRE(r.records().size() == 3);
    CHECK(r.records()[0].id == "a/one");
    CHECK(r.records()[2].verdict == Verdict::MismatchFlagged);
    CHECK(*r.records()[2].paper == 2.0);
    const auto s = r.summary();
    CHECK(s.pass == 1);
    CHECK(s.fail == 1);
    CHECK(s.mismatch_flagged == 1);
    CHECK_FALSE(r.passed());

    VerificationReport d;
    d.add(property("same", "a", {}, true, 0, 0));
    d.add(property("same", "a", {}, true, 0, 0));
    CHECK_THROWS_AS(d.finalize(), DomainError);
    CHECK_THROWS_AS(d.add(property("", "a", {}, true, 0, 0)), DomainError);
    CHECK_THROWS_AS(d.add(property("z", "", {}, true, 0, 0)), DomainError);
}

TEST_CASE("serialized forms") {
    const auto r = sample();
    CHECK(r.jsonl() == sample().jsonl());
    std::istringstream lines(r.jsonl());
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        const auto j = nlohmann::json::parse(line);
        for (const char* k : {"id", "anchor", "inputs", "paper", "derived", "tolerance", "verdict", "note"})
            CHECK(j.contains(k));
        ++n;
    }
    CHECK(n == 3);
    CHECK(nlohmann::json::parse(r.jsonl().substr(0, r.jsonl().find('\n')))["paper"] == "unstated");

    const std::string csv = r.csv();
    CHECK(csv.rfind("id,anchor,paper,expected,derived,tolerance,verdict,note\n", 0) == 0);
    CHECK(csv.find("a/one,\"first, with a comma\",unstated,1.0,1.5,") != std::string::npos);
    CHECK(csv.find("\"quote \"\"here\"\"\"") != std::string::npos);
    CHECK(csv.find("mismatch-flagged") != std::string::npos);

    CHECK(number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(number(std::nan("")) == "nan");
    CHECK(number(0.5) == 0.5);

    const auto dir = std::filesystem::temp_directory_path() / "carleson_report_test";
    std::filesystem::remove_all(dir);
    r.write(dir);
    std::ifstream s(dir / "summary.json");
    const auto j = nlohmann::json::parse(s);
    CHECK(j["fail"] == 1);
    CHECK(std::filesystem::exists(dir / "report.csv"));
    std::filesystem::remove_all(dir);
}
