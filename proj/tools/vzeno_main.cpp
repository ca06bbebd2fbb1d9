#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "vzeno/commands.hpp"

namespace {

using vzeno::cli::RunConfig;

/// Flag values collected separately so a --config file can be applied first
/// and explicit flags override it afterwards.
struct FlagOverrides {
    std::optional<double> omega2, omega3, a3;
    std::optional<double> pulse_duration, gap, total_duration, dt, gap_threshold;
    std::optional<std::size_t> n_pulses, n_measurements, trajectories;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    bool no_timeline = false;

    void apply(RunConfig& config) const {
        if (omega2) config.params.omega2 = *omega2;
        if (omega3) config.params.omega3 = *omega3;
        if (a3) config.params.a3 = *a3;
        if (pulse_duration) config.schedule.pulse_duration = *pulse_duration;
        if (gap) config.schedule.gap = *gap;
        if (total_duration) config.schedule.total_duration = *total_duration;
        if (n_pulses) config.schedule.n_pulses = *n_pulses;
        if (dt) config.dt = *dt;
        if (n_measurements) config.n_measurements = *n_measurements;
        if (trajectories) config.trajectories = *trajectories;
        if (seed) config.seed = *seed;
        if (gap_threshold) config.gap_threshold = *gap_threshold;
        if (out_dir) config.out_dir = *out_dir;
        if (threads) config.threads = *threads;
        if (no_timeline) config.timeline = false;
    }
};

void add_common_options(CLI::App* sub, std::string& config_path, FlagOverrides& flags) {
    sub->add_option("--config", config_path, "JSON config file (flags override its values)");
    sub->add_option("--seed", flags.seed, "base seed for the random streams");
    sub->add_option("--out", flags.out_dir, "output directory");
    sub->add_option("--trajectories", flags.trajectories, "number of independent trajectories");
    sub->add_option("--omega2", flags.omega2, "rf Rabi frequency (1-2 transition)");
    sub->add_option("--omega3", flags.omega3, "probe Rabi frequency (1-3 transition)");
    sub->add_option("--a3", flags.a3, "Einstein coefficient of level 3");
    sub->add_option("--threads", flags.threads, "worker threads (0 = hardware)");
    sub->add_flag("--no-timeline", flags.no_timeline, "suppress the ASCII timeline");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"vzeno: light/dark-period statistics of a driven three-level V atom\n"
                 "under pulsed or continuous probing (quantum-jump simulation plus\n"
                 "closed-form theory and a master-equation oracle)"};
    app.require_subcommand(1);

    std::string config_path;
    FlagOverrides flags;
    vzeno::verify::Options verify_options;
    std::string verify_record;
    bool mutate_pq = false;

    auto* ideal = app.add_subcommand("ideal", "projective measurements on the driven two-level system");
    add_common_options(ideal, config_path, flags);
    ideal->add_option("--dt", flags.dt, "measurement spacing");
    ideal->add_option("--n-measurements", flags.n_measurements, "number of measurements");

    auto* pulsed = app.add_subcommand("pulsed", "probe-pulse quantum-jump run (gap > 0)");
    add_common_options(pulsed, config_path, flags);
    pulsed->add_option("--pulse-duration", flags.pulse_duration, "probe pulse length");
    pulsed->add_option("--gap", flags.gap, "time between pulses");
    pulsed->add_option("--n-pulses", flags.n_pulses, "number of pulses per trajectory");

    auto* continuous = app.add_subcommand("continuous", "continuously driven run (gap = 0)");
    add_common_options(continuous, config_path, flags);
    continuous->add_option("--total-duration", flags.total_duration, "run length");
    continuous->add_option("--gap-threshold", flags.gap_threshold,
                           "photon gap above which a dark period is declared");

    auto* theory = app.add_subcommand("theory", "closed-form predictions only");
    add_common_options(theory, config_path, flags);
    theory->add_option("--pulse-duration", flags.pulse_duration, "probe pulse length");
    theory->add_option("--gap", flags.gap, "time between pulses");

    auto* verify = app.add_subcommand("verify", "run the self-consistency battery");
    add_common_options(verify, config_path, flags);
    verify->add_option("--record", verify_record, "emission-record CSV to validate");
    verify
        ->add_flag("--mutate-pq", mutate_pq,
                   "inject a sign flip into the reference transition probabilities "
                   "(the battery must then fail)")
        ->group("");  // test fixture, hidden from help

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return vzeno::cli::kExitConfig;
    }

    try {
        RunConfig config;
        if (!config_path.empty())
            vzeno::cli::apply_config_json(config, vzeno::io::read_file(config_path));
        flags.apply(config);

        if (ideal->parsed()) return vzeno::cli::cmd_ideal(config, std::cout);
        if (pulsed->parsed()) return vzeno::cli::cmd_pulsed(config, std::cout);
        if (continuous->parsed()) return vzeno::cli::cmd_continuous(config, std::cout);
        if (theory->parsed()) return vzeno::cli::cmd_theory(config, std::cout);
        if (verify->parsed()) {
            verify_options.seed = config.seed;
            verify_options.threads = config.threads;
            verify_options.mutate_pq = mutate_pq;
            verify_options.record_path = verify_record;
            const int failures =
                vzeno::cli::cmd_verify(config, verify_options, std::cout, std::cerr);
            return failures == 0 ? vzeno::cli::kExitOk : vzeno::cli::kExitVerify;
        }
    } catch (const vzeno::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return vzeno::cli::kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return vzeno::cli::kExitConfig;
    } catch (const vzeno::InsufficientDataError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return vzeno::cli::kExitConfig;
    } catch (const vzeno::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return vzeno::cli::kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return vzeno::cli::kExitVerify;
    }
    return vzeno::cli::kExitOk;
}
