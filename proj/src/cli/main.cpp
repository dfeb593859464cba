#include "carleson/cli.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>

namespace carleson::cli {

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Numerical checks for Carleson measures on tube domains"};
    app.set_help_flag("-h,--help", "Show help");
    std::string suite;
    std::optional<std::string> cone, domain, m, alpha, p, q, tol, seed, check, n, measure, out_dir, config;
    app.add_option("suite", suite, "Suite to run, or 'all'")->required();
    app.add_option("--cone", cone, "Cone or cones (halfline, octant, lorentz, spherical), comma-separated");
    app.add_option("--domain", domain, "Domain for paley-wiener (halfplane, octant)");
    app.add_option("--m", m, "Order of the box operator");
    app.add_option("--alpha", alpha, "Weight exponent; 'a' or 'a1,a2'");
    app.add_option("--p", p, "Exponent p");
    app.add_option("--q", q, "Exponent q");
    app.add_option("--tol", tol, "Relative tolerance");
    app.add_option("--seed", seed, "Random seed");
    app.add_option("--check", check, "Dyadic checks: covering, tiling, carleson, fw, maximal, levelset");
    app.add_option("--n", n, "Sample count");
    app.add_option("--measure", measure, "Point-mass measure file for the dyadic Carleson check");
    app.add_option("--out", out_dir, "Directory for report.jsonl, report.csv and summary.json");
    app.add_option("--config", config, "Key-value config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        RunConfig cfg = config ? load_config(*config) : RunConfig{};
        if (suite == "all") {
            if (!cfg.suites_listed) cfg.suites = suite_names();
        } else {
            if (!known_suite(suite)) throw ConfigError("command line: unknown suite '" + suite + "'");
            cfg.suites = {suite};
        }
        auto flag = [&](const char* key, const std::optional<std::string>& v) {
            if (!v) return;
            if (suite != "all" && !known_key(suite, key))
                throw ConfigError(std::string("command line: suite '") + suite + "' has no parameter '" + key + "'");
            cfg.global.set(key, *v, std::string("command line: --") + key);
            // flags beat per-suite config values
            for (auto& [_, ps] : cfg.per_suite) ps.set(key, *v, std::string("command line: --") + key);
        };
        flag("cone", cone);
        flag("domain", domain);
        flag("m", m);
        flag("alpha", alpha);
        flag("p", p);
        flag("q", q);
        flag("tol", tol);
        flag("seed", seed);
        flag("check", check);
        flag("n", n);
        flag("measure", measure);
        if (out_dir) cfg.out_dir = *out_dir;

        const auto rep = run(cfg);
        for (const auto& r : rep.records()) {
            if (r.verdict == report::Verdict::Pass) continue;
            out << report::to_string(r.verdict) << "  " << r.id << "  derived " << r.derived;
            if (r.expected) out << "  expected " << *r.expected;
            if (r.paper) out << "  paper " << *r.paper;
            out << "  " << r.note << '\n';
        }
        const auto s = rep.summary();
        out << s.total() << " checks: " << s.pass << " pass, " << s.fail << " fail, " << s.mismatch_flagged
            << " mismatch-flagged\n";
        if (!cfg.out_dir.empty()) rep.write(cfg.out_dir);
        return rep.passed() ? 0 : 1;
    } catch (const DomainError& e) {
        err << "verify: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "verify: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace carleson::cli
