#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "horocauchy/quadric.hpp"

namespace horocauchy {

const std::vector<std::string>& experiment_names();

struct ExperimentConfig {
    std::string experiment;
    int d = 2;
    int degree_max = 4;
    std::array<int, 3> nodes{64, 64, 64}; ///< n_polar, n_azimuthal, n_circle
    std::string test_function;            ///< empty: the experiment's default
    std::uint64_t seed = 0;
    std::string output;
    int cases = 0;                        ///< 0: the experiment's default case count
    std::map<std::string, double> tolerances;

    /// Tolerance for the named invariant: override if present, else `fallback`.
    double tolerance(const std::string& invariant, double fallback) const;
    nlohmann::json to_json() const;
};

/**
 * Parses a flat JSON object. Keys: experiment, d, degree_max, nodes
 * ([n_polar, n_azimuthal] or with n_circle), test_function, seed, output,
 * cases, and tolerance.<invariant>. Throws ParseError naming the key.
 */
ExperimentConfig parse_config(std::string_view text);

/// Applies one "key=value" override; value is read as JSON, falling back to a plain string.
void apply_override(ExperimentConfig& config, std::string_view assignment);

enum class Provenance { Oracle, PaperFormula, Measured };
std::string_view to_string(Provenance p);

struct ReportRow {
    int case_id = 0;
    std::string inputs;
    Complex value = 0.0;
    std::optional<Complex> reference;
    double abs_err = 0.0;
    double rel_err = 0.0;
    double error = 0.0; ///< the quantity compared against the tolerance
    double tolerance = 0.0;
    std::string invariant;
    Provenance provenance = Provenance::Oracle;
    bool pass = false;
    std::string note;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<ReportRow> rows;
    nlohmann::json extra = nlohmann::json::object();
    double wall_time_s = 0.0;

    bool all_pass() const;
    std::size_t failures() const;
    nlohmann::json to_json() const;
    /// One line per row; the only non-deterministic content is the leading comment.
    std::string to_csv(bool with_header_comment = true) const;
};

/// Runs the configured experiment. Writes <output>.json and <output>.csv when an output path is set.
ExperimentReport run(const ExperimentConfig& config);

/// Writes the JSON report to `path` (extension replaced by .json) and the CSV beside it.
void write_report(const ExperimentReport& report, const std::string& path);

} // namespace horocauchy
