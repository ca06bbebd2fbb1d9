#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "vzeno/io.hpp"
#include "vzeno/verify.hpp"

namespace vzeno::cli {

/// One run configuration; loadable from a JSON document, with command-line
/// flags overriding file values. All quantities are in the hbar = 1 unit
/// system (omega2 = 1 recommended as the time unit).
struct RunConfig {
    VSystemParams params{1.0, 40.0, 20.0};
    PulseSchedule schedule{1.0, 1.0, 2000, 0.0};
    double dt = kPi / 2.0;               // ideal-mode measurement spacing
    std::size_t n_measurements = 100000;  // ideal-mode run length
    std::size_t trajectories = 1;
    std::uint64_t seed = 1;
    double gap_threshold = 0.0;  // 0 selects the default rule
    std::filesystem::path out_dir = ".";
    unsigned threads = 0;
    bool timeline = true;

    void validate_common() const;
};

/// Parse a config JSON document into `config` (missing keys keep their
/// current values). Throws ConfigError on malformed content.
void apply_config_json(RunConfig& config, const std::string& json_text);

// Exit codes shared by the CLI and the tests that drive it.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitParse = 3;
inline constexpr int kExitVerify = 4;

/// Repeated ideal measurements of the driven two-level system: writes
/// outcomes.csv and ideal_report.json, prints the timeline and the
/// theory/empirical period comparison.
int cmd_ideal(const RunConfig& config, std::ostream& out);

/// Pulsed-probe quantum-jump run: writes record.csv + record.meta.json
/// (first trajectory), periods.csv (pooled), report.json; prints validity
/// ratios and the period comparison.
int cmd_pulsed(const RunConfig& config, std::ostream& out);

/// Continuous drive (gap -> 0): threshold segmentation of the photon
/// stream against the shelving-period formulas.
int cmd_continuous(const RunConfig& config, std::ostream& out);

/// Closed-form numbers only: epsilons, validity ratios, transition
/// probabilities, mean periods, continuous limits. Writes theory.json.
int cmd_theory(const RunConfig& config, std::ostream& out);

/// Self-consistency battery; returns the number of failed checks.
int cmd_verify(const RunConfig& config, const verify::Options& options, std::ostream& out,
               std::ostream& err);

}  // namespace vzeno::cli
