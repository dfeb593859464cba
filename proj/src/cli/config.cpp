#include "carleson/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace carleson::cli {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(trim(cur));
    return out;
}

bool parse_double(const std::string& s, double& v) {
    try {
        std::size_t used = 0;
        v = std::stod(s, &used);
        return used == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

bool parse_long(const std::string& s, long& v) {
    try {
        std::size_t used = 0;
        v = std::stol(s, &used);
        return used == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

const std::set<std::string, std::less<>> kGlobalKeys{"suites", "out"};
const std::set<std::string, std::less<>> kCommonKeys{"tol", "seed"};

const std::map<std::string, std::set<std::string, std::less<>>, std::less<>>& suite_keys() {
    static const std::map<std::string, std::set<std::string, std::less<>>, std::less<>> k{
        {"gamma", {"cone"}},
        {"paley-wiener", {"cone", "domain", "alpha"}},
        {"kernel", {"cone", "alpha", "n"}},
        {"box", {"cone", "m"}},
        {"radial", {"cone", "alpha"}},
        {"moment", {"n"}},
        {"restriction", {"cone", "m"}},
        {"dyadic", {"check", "n", "alpha", "p", "q", "measure"}},
    };
    return k;
}

enum class Kind { Text, Number, Integer, Pair };

Kind key_kind(std::string_view key) {
    if (key == "m" || key == "n" || key == "seed") return Kind::Integer;
    if (key == "tol" || key == "p" || key == "q") return Kind::Number;
    if (key == "alpha") return Kind::Pair;
    return Kind::Text;
}

// Empty string when the value suits the key.
std::string type_problem(std::string_view key, const std::string& value) {
    double d = 0.0;
    long l = 0;
    switch (key_kind(key)) {
        case Kind::Text: return value.empty() ? "empty value" : "";
        case Kind::Number: return parse_double(value, d) ? "" : "expected a number, got '" + value + "'";
        case Kind::Integer: return parse_long(value, l) ? "" : "expected an integer, got '" + value + "'";
        case Kind::Pair: {
            const auto parts = split(value, ',');
            if (parts.empty() || parts.size() > 2) return "expected one or two numbers, got '" + value + "'";
            for (const auto& p : parts)
                if (!parse_double(p, d)) return "expected a number, got '" + p + "'";
            return "";
        }
    }
    return "";
}

}  // namespace

void SuiteParams::set(const std::string& key, std::string value, std::string origin) {
    values_[key] = {std::move(value), std::move(origin)};
}

const Param* SuiteParams::find(const std::string& key) const {
    auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

std::string SuiteParams::text(const std::string& key, const std::string& fallback) const {
    const Param* p = find(key);
    return p ? p->value : fallback;
}

double SuiteParams::number(const std::string& key, double fallback) const {
    const Param* p = find(key);
    if (!p) return fallback;
    double v = 0.0;
    if (!parse_double(p->value, v)) throw ConfigError(p->origin + ": " + key + ": expected a number, got '" + p->value + "'");
    return v;
}

long SuiteParams::integer(const std::string& key, long fallback) const {
    const Param* p = find(key);
    if (!p) return fallback;
    long v = 0;
    if (!parse_long(p->value, v)) throw ConfigError(p->origin + ": " + key + ": expected an integer, got '" + p->value + "'");
    return v;
}

std::array<double, 2> SuiteParams::pair(const std::string& key, std::array<double, 2> fallback) const {
    const Param* p = find(key);
    if (!p) return fallback;
    if (auto e = type_problem("alpha", p->value); !e.empty()) throw ConfigError(p->origin + ": " + key + ": " + e);
    const auto parts = split(p->value, ',');
    double a = 0.0, b = 0.0;
    parse_double(parts[0], a);
    b = a;
    if (parts.size() == 2) parse_double(parts[1], b);
    return {a, b};
}

std::vector<std::string> SuiteParams::words(const std::string& key, const std::vector<std::string>& fallback) const {
    const Param* p = find(key);
    if (!p) return fallback;
    std::vector<std::string> out;
    for (auto& w : split(p->value, ','))
        if (!w.empty()) out.push_back(w);
    return out;
}

SuiteParams SuiteParams::overlay(const SuiteParams& top) const {
    SuiteParams s = *this;
    for (const auto& [k, v] : top.values_) s.values_[k] = v;
    return s;
}

SuiteParams RunConfig::params_for(const std::string& suite) const {
    auto it = per_suite.find(suite);
    return it == per_suite.end() ? global : global.overlay(it->second);
}

void RunConfig::validate() const {
    for (const auto& s : suites)
        if (!known_suite(s)) throw ConfigError("config: unknown suite '" + s + "'");
    auto check_tol = [](const SuiteParams& p, const std::string& where) {
        if (p.has("tol") && !(p.number("tol", 1.0) > 0.0)) throw ConfigError(where + ": tol must be > 0");
    };
    check_tol(global, "config");
    for (const auto& [s, p] : per_suite) check_tol(p, s);
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : suite_keys()) v.push_back(k);
        return v;
    }();
    return names;
}

bool known_suite(std::string_view name) { return suite_keys().count(name) != 0; }

bool known_key(std::string_view suite, std::string_view key) {
    if (kCommonKeys.count(key)) return true;
    auto it = suite_keys().find(suite);
    return it != suite_keys().end() && it->second.count(key) != 0;
}

RunConfig parse_config(std::string_view text, const std::string& source) {
    RunConfig cfg;
    std::istringstream is{std::string(text)};
    std::string line;
    bool have_suites = false;
    for (int no = 1; std::getline(is, line); ++no) {
        auto at = [&](std::size_t col) { return source + ":" + std::to_string(no) + ":" + std::to_string(col + 1); };
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(at(first) + ": expected 'key = value'");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto vcol = std::min(line.size(), line.find_first_not_of(" \t", eq + 1));
        if (key.empty()) throw ConfigError(at(first) + ": missing key before '='");
        if (value.empty() && key != "suites") throw ConfigError(at(eq) + ": missing value for '" + key + "'");

        std::string suite, name = key;
        if (auto dot = key.find('.'); dot != std::string::npos) {
            suite = key.substr(0, dot);
            name = key.substr(dot + 1);
            if (!known_suite(suite)) throw ConfigError(at(first) + ": unknown suite '" + suite + "'");
            if (!known_key(suite, name))
                throw ConfigError(at(first + dot + 1) + ": suite '" + suite + "' has no parameter '" + name + "'");
        } else if (!kGlobalKeys.count(name)) {
            bool any = kCommonKeys.count(name) != 0;
            for (const auto& s : suite_names()) any = any || known_key(s, name);
            if (!any) throw ConfigError(at(first) + ": unknown parameter '" + name + "'");
        }
        if (auto e = name == "suites" ? std::string() : type_problem(name, value); !e.empty()) throw ConfigError(at(vcol) + ": " + name + ": " + e);

        if (suite.empty() && name == "suites") {
            if (have_suites) throw ConfigError(at(first) + ": 'suites' given twice");
            have_suites = true;
            cfg.suites_listed = true;
            std::size_t col = vcol;
            for (const auto& s : split(value, ',')) {
                const auto pos = line.find(s, col);
                if (!s.empty() && !known_suite(s))
                    throw ConfigError(at(pos == std::string::npos ? vcol : pos) + ": unknown suite '" + s + "'");
                if (!s.empty()) cfg.suites.push_back(s);
                if (pos != std::string::npos) col = pos + s.size();
            }
        } else if (suite.empty() && name == "out") {
            cfg.out_dir = value;
        } else if (suite.empty()) {
            cfg.global.set(name, value, at(vcol));
        } else {
            cfg.per_suite[suite].set(name, value, at(vcol));
        }
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

}  // namespace carleson::cli
