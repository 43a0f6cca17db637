#pragma once

// JSON / CSV serialization of spectra, wavefunctions and verification results.

#include <optional>
#include <string>
#include <vector>

#include "diracheun/model.hpp"
#include "diracheun/routes.hpp"
#include "diracheun/verify.hpp"

namespace diracheun {

enum class Format { Json, Csv };

std::optional<Format> format_from_string(std::string_view name);

struct SpectrumRow {
    EnergyLevel level;
    Route route = Route::ClosedForm;
    bool bound_state = true;
    std::optional<double> max_pairwise_deviation;
};

struct SpectrumReport {
    SystemParams params;
    double j = 0.5;
    std::vector<SpectrumRow> rows;
    std::optional<std::string> timestamp; // ISO 8601 UTC
};

/// Scientific notation with 17 significant digits (round-trips exactly).
std::string format_double(double v);

/// Current time as YYYY-MM-DDTHH:MM:SSZ.
std::string utc_timestamp();

std::string spectrum_json(const SpectrumReport& report);
/// Header n,j,parity,route,E,E_over_m,bound_state,max_pairwise_deviation.
std::string spectrum_csv(const SpectrumReport& report);

struct WavefunctionReport {
    RadialSolution solution;
    Route route = Route::Standard;
    double j = 0.5;
    double residual = 0.0;
    std::optional<std::string> timestamp;
};

/// "# key=value" metadata lines, then r,f,g.
std::string wavefunction_csv(const WavefunctionReport& report);
std::string wavefunction_json(const WavefunctionReport& report);

std::string verification_json(const std::vector<CheckResult>& results, bool passed);
/// One "PASS|FAIL|AUDIT <id> measured=... threshold=... <description>" line per check.
std::string verification_text(const std::vector<CheckResult>& results);

} // namespace diracheun
