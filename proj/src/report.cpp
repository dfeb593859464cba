#include "carleson/report.hpp"

#include "carleson/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace carleson::report {

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::MismatchFlagged: return "mismatch-flagged";
    }
    return "?";
}

nlohmann::ordered_json number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

nlohmann::ordered_json CheckRecord::to_json() const {
    nlohmann::ordered_json j;
    j["id"] = id;
    j["anchor"] = anchor;
    j["inputs"] = inputs.is_null() ? nlohmann::ordered_json::object() : inputs;
    j["paper"] = paper ? number(*paper) : nlohmann::ordered_json("unstated");
    if (expected) j["expected"] = number(*expected);
    j["derived"] = number(derived);
    j["tolerance"] = number(tolerance);
    j["verdict"] = std::string(to_string(verdict));
    j["note"] = note;
    return j;
}

void VerificationReport::add(CheckRecord r) {
    if (r.id.empty()) throw DomainError("report: check id must not be empty");
    if (r.anchor.empty()) throw DomainError("report: check " + r.id + " has no anchor");
    records_.push_back(std::move(r));
}

void VerificationReport::merge(VerificationReport other) {
    for (auto& r : other.records_) records_.push_back(std::move(r));
}

void VerificationReport::finalize() {
    std::stable_sort(records_.begin(), records_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < records_.size(); ++i)
        if (records_[i].id == records_[i - 1].id) throw DomainError("report: duplicate check id " + records_[i].id);
}

Summary VerificationReport::summary() const {
    Summary s;
    for (const auto& r : records_) switch (r.verdict) {
            case Verdict::Pass: ++s.pass; break;
            case Verdict::Fail: ++s.fail; break;
            case Verdict::MismatchFlagged: ++s.mismatch_flagged; break;
        }
    return s;
}

std::string VerificationReport::jsonl() const {
    std::string out;
    for (const auto& r : records_) out += r.to_json().dump() + "\n";
    return out;
}

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

std::string csv_number(double v) {
    const auto j = number(v);
    return j.is_string() ? j.get<std::string>() : j.dump();
}

}  // namespace

std::string VerificationReport::csv() const {
    std::string out = "id,anchor,paper,expected,derived,tolerance,verdict,note\n";
    for (const auto& r : records_) {
        out += csv_field(r.id) + "," + csv_field(r.anchor) + "," + (r.paper ? csv_number(*r.paper) : "unstated") + "," +
               (r.expected ? csv_number(*r.expected) : "") + "," + csv_number(r.derived) + "," + csv_number(r.tolerance) + "," + std::string(to_string(r.verdict)) + "," +
               csv_field(r.note) + "\n";
    }
    return out;
}

nlohmann::ordered_json VerificationReport::summary_json() const {
    const Summary s = summary();
    nlohmann::ordered_json j;
    j["checks"] = s.total();
    j["pass"] = s.pass;
    j["fail"] = s.fail;
    j["mismatch-flagged"] = s.mismatch_flagged;
    return j;
}

void VerificationReport::write(const std::filesystem::path& dir) const {
    std::filesystem::create_directories(dir);
    auto put = [&](const char* name, const std::string& text) {
        std::ofstream os(dir / name, std::ios::binary);
        if (!os) throw DomainError("report: cannot write " + (dir / name).string());
        os << text;
    };
    put("report.jsonl", jsonl());
    put("report.csv", csv());
    put("summary.json", summary_json().dump(2) + "\n");
}

CheckRecord compare(std::string id, std::string anchor, nlohmann::ordered_json inputs, double expected, double derived,
                    double tol, std::string note) {
    CheckRecord r{std::move(id), std::move(anchor), std::move(inputs), std::nullopt, expected, derived, tol,
                  Verdict::Pass, std::move(note)};
    const double scale = expected == 0.0 ? 1.0 : std::abs(expected);
    r.verdict = std::abs(derived - expected) <= tol * scale ? Verdict::Pass : Verdict::Fail;
    return r;
}

CheckRecord property(std::string id, std::string anchor, nlohmann::ordered_json inputs, bool ok, double derived,
                     double tol, std::string note) {
    return {std::move(id), std::move(anchor), std::move(inputs), std::nullopt, std::nullopt, derived, tol,
            ok ? Verdict::Pass : Verdict::Fail, std::move(note)};
}

CheckRecord from_calibration(std::string id, std::string anchor, nlohmann::ordered_json inputs,
                             const spectral::CalibrationRecord& c, bool divergence_expected) {
    inputs["constant"] = c.constant_name;
    if (c.relative_spread != 0.0) inputs["relative_spread"] = number(c.relative_spread);
    CheckRecord r{std::move(id),   std::move(anchor), std::move(inputs), c.paper_value, std::nullopt,
                  c.derived_value, c.tolerance,       Verdict::Pass,     c.note};
    switch (c.verdict) {
        case spectral::Verdict::Match:
        case spectral::Verdict::Unstated: r.verdict = Verdict::Pass; break;
        case spectral::Verdict::Mismatch: r.verdict = Verdict::MismatchFlagged; break;
        case spectral::Verdict::Divergent: r.verdict = divergence_expected ? Verdict::Pass : Verdict::Fail; break;
    }
    return r;
}

}  // namespace carleson::report
