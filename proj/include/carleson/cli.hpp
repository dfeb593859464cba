#pragma once

#include "carleson/errors.hpp"
#include "carleson/report.hpp"

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace carleson::cli {

/// Bad configuration text or parameter value; what() starts with the location ("file:line:col: ").
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A parameter value together with where it came from, for error messages.
struct Param {
    std::string value;
    std::string origin;
};

class SuiteParams {
public:
    void set(const std::string& key, std::string value, std::string origin);
    bool has(const std::string& key) const { return values_.count(key) != 0; }
    std::string text(const std::string& key, const std::string& fallback) const;
    double number(const std::string& key, double fallback) const;
    long integer(const std::string& key, long fallback) const;
    /// One number or two separated by a comma; a single number is repeated.
    std::array<double, 2> pair(const std::string& key, std::array<double, 2> fallback) const;
    /// Comma-separated words.
    std::vector<std::string> words(const std::string& key, const std::vector<std::string>& fallback) const;
    /// Later values override.
    SuiteParams overlay(const SuiteParams& top) const;

private:
    const Param* find(const std::string& key) const;
    std::map<std::string, Param> values_;
};

struct RunConfig {
    std::vector<std::string> suites;
    /// The config named its suites; otherwise "all" means every suite.
    bool suites_listed = false;
    SuiteParams global;
    std::map<std::string, SuiteParams> per_suite;
    std::string out_dir;

    SuiteParams params_for(const std::string& suite) const;
    /// Unknown suites, non-positive tolerances; throws ConfigError.
    void validate() const;
};

const std::vector<std::string>& suite_names();
bool known_suite(std::string_view name);
/// Keys accepted by suite (global keys included).
bool known_key(std::string_view suite, std::string_view key);

/// "key = value" lines, '#' comments, keys optionally scoped "suite.key"; "suites" lists the suites to run.
RunConfig parse_config(std::string_view text, const std::string& source = "config");
RunConfig load_config(const std::string& path);

report::VerificationReport run_suite(const std::string& suite, const SuiteParams& params);
/// Runs every suite of the config concurrently; records merged in check-id order.
report::VerificationReport run(const RunConfig& config);

/// verify <suite> [--cone ...] [--m ...] [--alpha ...] [--p ...] [--q ...] [--tol ...] [--seed ...] [--out DIR]
/// verify all --config FILE. Returns 0 when no check fails, 1 on a failed check, 2 on usage or config errors.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace carleson::cli
