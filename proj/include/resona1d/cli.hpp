#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "resona1d/analysis.hpp"
#include "resona1d/model.hpp"
#include "resona1d/perturbation.hpp"
#include "resona1d/spectrum.hpp"

namespace resona1d {

struct Tolerances {
    double muller = 1e-12;
    double im = 1e-9;
    double degeneracy = kDegeneracyTolerance;
    double integrator_relative = 1e-16;
    double integrator_absolute = 1e-18;
};

/// Validated run configuration with defaults filled in.
struct RunConfig {
    std::vector<double> lengths;
    std::vector<double> gaps;
    double delta = 0.0;
    double v0 = 1.0;
    double vr = 1.0;
    double Omega = 0.0;
    std::vector<double> eps_rho;
    std::vector<double> eps_kappa;
    std::vector<double> phi_rho;
    std::vector<double> phi_kappa;
    int truncation_K = 3;
    std::size_t alpha_grid = 101;
    Method method = Method::floquet;
    Tolerances tolerances;
    double seed_perturbation = 1e-5;

    [[nodiscard]] ResonatorSystem system() const;
    [[nodiscard]] SweepOptions sweep_options() const;
};

/// Parses and validates a JSON document; ConfigError names the offending field.
[[nodiscard]] RunConfig parse_config_text(const std::string& text);
[[nodiscard]] RunConfig parse_config(const std::filesystem::path& path);

/// Canonical JSON (sorted keys, all defaults present) of a validated config.
[[nodiscard]] std::string canonical_json(const RunConfig& config);
/// FNV-1a 64-bit hash of canonical_json, as 16 lower-case hex digits.
[[nodiscard]] std::string config_hash(const RunConfig& config);

/// CSV with header alpha,band,re_omega,im_omega,method; one row per present
/// (alpha, band) value, alpha-major, 17 significant digits.
void write_band_csv(std::ostream& out, const BandStructure& bands);

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolver = 1;
inline constexpr int kExitConfig = 2;

struct CommandOptions {
    std::optional<Method> method;
    std::optional<std::size_t> grid;
    std::optional<int> K;
    std::filesystem::path out_dir = ".";
};

/// Applies command-line overrides to a parsed config (re-validated).
[[nodiscard]] RunConfig apply_overrides(RunConfig config, const CommandOptions& options);

/// Runs one of static-bands, bands, exact, compare, gaps, perturbation, bench
/// and writes its artifact into options.out_dir. Progress goes to `log`.
/// Returns an exit code; solver errors are reported on `err`.
int run_command(const std::string& command, const RunConfig& config,
                const CommandOptions& options, std::ostream& log, std::ostream& err);

}  // namespace resona1d
