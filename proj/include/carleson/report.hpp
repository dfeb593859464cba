#pragma once

#include "carleson/spectral.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace carleson::report {

enum class Verdict { Pass, Fail, MismatchFlagged };

std::string_view to_string(Verdict v);

struct CheckRecord {
    std::string id;
    /// Name of the statement the check exercises.
    std::string anchor;
    nlohmann::ordered_json inputs = nlohmann::ordered_json::object();
    /// nullopt is reported as "unstated".
    std::optional<double> paper;
    /// Reference value of a comparison (closed form or independent oracle).
    std::optional<double> expected;
    double derived = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::Pass;
    std::string note;

    nlohmann::ordered_json to_json() const;
};

struct Summary {
    std::size_t pass = 0, fail = 0, mismatch_flagged = 0;
    std::size_t total() const { return pass + fail + mismatch_flagged; }
};

class VerificationReport {
public:
    /// Throws DomainError on an empty id or anchor.
    void add(CheckRecord r);
    void merge(VerificationReport other);
    /// Sorts by id; throws DomainError on duplicate ids.
    void finalize();

    const std::vector<CheckRecord>& records() const { return records_; }
    Summary summary() const;
    bool passed() const { return summary().fail == 0; }

    std::string jsonl() const;
    std::string csv() const;
    nlohmann::ordered_json summary_json() const;
    /// Writes <dir>/report.jsonl, report.csv and summary.json.
    void write(const std::filesystem::path& dir) const;

private:
    std::vector<CheckRecord> records_;
};

/// Pass when |derived - expected| <= tol * |expected| (absolute tol when expected is 0); paper left unstated.
CheckRecord compare(std::string id, std::string anchor, nlohmann::ordered_json inputs, double expected, double derived,
                    double tol, std::string note = {});
/// Pass iff ok; the paper value is left unstated.
CheckRecord property(std::string id, std::string anchor, nlohmann::ordered_json inputs, bool ok, double derived,
                     double tol, std::string note = {});
/// Match -> pass, Mismatch -> mismatch-flagged, Unstated -> pass, Divergent -> pass iff divergence_expected.
CheckRecord from_calibration(std::string id, std::string anchor, nlohmann::ordered_json inputs,
                             const spectral::CalibrationRecord& c, bool divergence_expected = false);

/// Finite doubles as numbers, others as "inf", "-inf" or "nan".
nlohmann::ordered_json number(double v);

}  // namespace carleson::report
