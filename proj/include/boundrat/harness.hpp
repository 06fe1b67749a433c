#pragma once

// Experiment configuration, theorem verifications, sweeps, Monte Carlo
// estimates and report serialization.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "boundrat/value_engine.hpp"

namespace boundrat::harness {

struct ExperimentConfig {
    std::string construction;
    std::vector<double> epsilons;
    std::vector<double> gammas;
    std::vector<double> gamma_stars;
    std::optional<int> horizon;
    std::optional<double> tolerance;
    TieBreakMode tie_break = TieBreakMode::adversarial;
    std::uint64_t seed = 0;
    int replicates = 1000;
    int depth = 30;
    int t_min = 1;
    int t_max = 12;
    int threads = 0;  ///< 0: hardware concurrency

    /// Throws std::invalid_argument unless exactly one of horizon/tolerance is
    /// set and replicates >= 1.
    void validate() const;

    /// The fixed horizon, or the smallest T with gamma^T/(1-gamma) < tolerance.
    int horizon_for(double gamma) const;
};

/// Defaults of a theorem verification (also the base for config files).
ExperimentConfig default_config(const std::string& theorem_id);

/// INI text with sections [construction] (id, epsilon, gamma, gamma_star),
/// [horizon] (horizon | tolerance), [run] (tie_break, seed, replicates,
/// depth, threads) and [sweep] (t_min, t_max). Lists are comma-separated.
/// Keys present replace the ones in `base`; a horizon key replaces both
/// horizon fields. Unknown sections or keys are errors.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base);
ExperimentConfig load_config(const std::string& path, ExperimentConfig base);

TieBreakMode parse_tie_break(const std::string& name);

using ParamValue = std::variant<std::int64_t, double, std::string>;

struct ReportRow {
    std::vector<ParamValue> params;
    double measured_lo = 0.0;
    double measured_hi = 0.0;
    double bound = 0.0;
    double ratio = 0.0;  ///< measured midpoint / bound (0 when the bound is 0)
    bool pass = false;
};

struct VerificationReport {
    std::string theorem_id;
    std::vector<std::string> param_names;
    std::vector<ReportRow> rows;
    bool pass = true;
    double runtime_seconds = 0.0;  ///< not serialized
    std::uint64_t seed = 0;

    void add(std::vector<ParamValue> params, double lo, double hi, double bound, bool row_pass);
    /// Sorts rows lexicographically by parameters.
    void sort_rows();
};

const std::vector<std::string>& theorem_ids();

/// Runs the checks mapped to `id`. Throws std::invalid_argument for unknown
/// ids and BudgetExceeded when the configuration is infeasible.
VerificationReport verify_theorem(const std::string& id, const ExperimentConfig& config);

/// One row per point of the configured grid for config.construction.
VerificationReport sweep(const ExperimentConfig& config);

struct McEstimate {
    double mean = 0.0;
    double standard_error = 0.0;
    int replicates = 0;
    double tail_correction = 0.0;  ///< gamma^depth / (1 - gamma): loss beyond the simulated depth
};

/// Replica r uses seed rng::derive(config.seed, r); losses are summed in
/// replica order, so the result does not depend on the thread count.
McEstimate mc_estimate(const std::string& construction_id, const ExperimentConfig& config,
                       double eps, double gamma);

enum class ReportFormat { csv, jsonl, human };

ReportFormat parse_format(const std::string& name);

std::string emit_report(const VerificationReport& report, ReportFormat format);

/// Writes to `path` ("-" for stdout). Throws std::runtime_error when the
/// destination cannot be written.
void write_report(const VerificationReport& report, ReportFormat format, const std::string& path);

}  // namespace boundrat::harness
