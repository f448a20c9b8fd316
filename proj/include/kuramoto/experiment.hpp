#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "kuramoto/dynamics.hpp"
#include "kuramoto/types.hpp"

namespace kuramoto {

/// Project version recorded in every output manifest.
[[nodiscard]] const char* version();

enum class OutputFormat { csv, json };
[[nodiscard]] std::string to_string(OutputFormat fmt);

/// Frequency source: explicit list, or a seeded sampler (the default draws
/// uniformly from [a, b]).
struct OmegaSource {
    enum class Kind { explicit_list, uniform, normal };
    Kind kind = Kind::uniform;
    std::vector<double> values;  ///< explicit_list
    double a = -1.0;             ///< uniform lower bound / normal mean
    double b = 1.0;              ///< uniform upper bound / normal stddev
};

/// Initial-condition source: explicit angles, seeded planar angles, or
/// seeded points on the sphere.
struct InitialSource {
    enum class Kind { explicit_angles, random_planar, random_sphere };
    Kind kind = Kind::random_planar;
    std::vector<double> thetas;  ///< explicit_angles
};

/// Settings consumed only by the `kink` subcommand.
struct KinkSection {
    double omega = 0.5;
    double Omega = 0.0;
    double J = 1.0;
    double phi0 = 3.0;
};

/// Settings consumed only by the `gaudin` subcommand.
struct GaudinSection {
    std::size_t restarts = 32;
    std::size_t steps = 1000;
};

/// Full experiment description as read from a config file plus command-line
/// overrides. `lambdas` holds a single value for `simulate` and the grid for
/// `sweep`.
struct ExperimentConfig {
    std::size_t n = 2;
    OmegaSource omegas;
    std::vector<double> lambdas{1.0};
    InitialSource initial;
    IntegratorConfig integrator;
    std::vector<std::string> observables{"r", "theta0"};
    std::uint64_t seed = 1;
    std::string out_path;  ///< empty = stdout
    OutputFormat format = OutputFormat::csv;
    KinkSection kink;
    GaudinSection gaudin;

    /// Throws ConfigError when sizes, grids, or choices are inconsistent.
    void validate() const;
};

/// Parse the key/value + [section] config format (schema in README.md).
/// Unknown keys, bad values, and malformed lines raise ConfigError naming
/// the field and the line number. `origin` labels the source in messages.
[[nodiscard]] ExperimentConfig parse_config_text(std::string_view text, const std::string& origin);
[[nodiscard]] ExperimentConfig parse_config_file(const std::string& path);

/// Concrete inputs after all sampling: frequencies and the initial state are
/// materialized so a rerun needs no further random draws. init_spins is set
/// instead of init for the random_sphere source.
struct ResolvedExperiment {
    FrequencySpec freqs;
    PhaseState init;
    std::optional<SpinConfiguration> init_spins;
};
[[nodiscard]] ResolvedExperiment resolve(const ExperimentConfig& cfg);

/// One table cell: a number or a word (e.g. a classification label).
using Cell = std::variant<double, std::string>;

/// Tabular result: an ordered manifest (everything needed to reproduce the
/// run, with sampled quantities written out explicitly), column names, and
/// rows. Serialization is byte-deterministic.
struct Table {
    std::vector<std::pair<std::string, std::string>> manifest;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void write_csv(std::ostream& os) const;
    void write_json(std::ostream& os) const;
    void write(std::ostream& os, OutputFormat fmt) const;

    /// Render to a string in the requested format.
    [[nodiscard]] std::string render(OutputFormat fmt) const;
};

/// Integrate one system; rows are trajectory samples with the configured
/// observables (t, |r|, theta0, per-pair deltas, energy).
[[nodiscard]] Table run_simulate(const ExperimentConfig& cfg);

/// One row per lambda in the grid: simulated long-time |r|, self-consistent
/// |J| in the all-plus sector, the large-lambda approximation, and the
/// classification of the simulated |r|(t) series. Grid points run
/// concurrently; row order follows the grid.
[[nodiscard]] Table run_sweep(const ExperimentConfig& cfg);

/// Relaxation of a single driven oscillator: samples of phi(t), the analytic
/// kink profile, their difference, and fitted vs predicted rates in the
/// manifest.
[[nodiscard]] Table run_kink(const ExperimentConfig& cfg);

/// Minimize the pseudospin Hamiltonian for the configured model; rows hold
/// the minimizing configuration, the manifest the value and invariance
/// diagnostics.
[[nodiscard]] Table run_gaudin(const ExperimentConfig& cfg);

/// One verification check: name, pass flag, and a short measured detail.
struct VerifyEntry {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Machine-readable verification report across suites.
struct VerifyReport {
    std::vector<VerifyEntry> entries;

    [[nodiscard]] bool all_passed() const;
    [[nodiscard]] std::string render(OutputFormat fmt) const;
};

/// Run invariant suites ("algebra", "dynamics", "variational", "curl",
/// "spinflip", "gaudin", or "all"). Suites execute concurrently. The curl
/// suite reports, for random configurations, the fraction with closed-form
/// expression above 1e-6 alongside the measured finite-difference curl of
/// the acceleration field; the two disagree (the measured curl vanishes),
/// and the agreement entry records that honestly as a failure.
[[nodiscard]] VerifyReport run_verify(const std::string& suite, std::uint64_t seed);

/// Entry point used by the binary and by in-process tests. Returns the
/// process exit code; diagnostics go to err, data to out (or to --out).
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace kuramoto
