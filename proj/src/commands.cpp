#include "vzeno/commands.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "vzeno/analytics.hpp"
#include "vzeno/batch.hpp"
#include "vzeno/ideal.hpp"
#include "vzeno/periods.hpp"

namespace vzeno::cli {

namespace {

using io::json;

/// Fig.-2-style strip: one column per pulse (or measurement), a tick when
/// it fluoresced.
std::string ascii_timeline(const std::vector<bool>& light, std::size_t max_cols) {
    std::string strip;
    const std::size_t n = std::min(light.size(), max_cols);
    for (std::size_t i = 0; i < n; ++i) strip += light[i] ? '|' : '.';
    if (light.size() > max_cols) strip += " ...";
    return strip;
}

void ensure_out_dir(const RunConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw ParseError("cannot create output directory " + config.out_dir.string());
}

json params_json(const VSystemParams& p) {
    return {{"omega2", p.omega2}, {"omega3", p.omega3}, {"a3", p.a3}};
}

double get_or(const json& j, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    const double v = j.at(key).get<double>();
    return v;
}

/// Pool interior periods from independently seeded trajectories; each
/// worker classifies and extracts its own record, results are concatenated
/// in trajectory order.
struct PooledPeriods {
    std::vector<periods::PeriodSample> samples;
    EmissionRecord first_record;
};

PooledPeriods run_pulsed_pool(const RunConfig& config) {
    const JumpEngine engine(config.params);
    std::vector<std::vector<periods::PeriodSample>> per_traj(config.trajectories);
    std::vector<EmissionRecord> first(1);
    run_indexed(
        config.trajectories,
        [&](std::size_t i) {
            Rng rng = Rng::for_stream(config.seed, i);
            EmissionRecord record = engine.run_trajectory(config.schedule, rng);
            record.seed = config.seed;
            const auto flags = periods::classify_pulses(record, config.schedule);
            try {
                per_traj[i] = periods::extract_periods(flags, config.schedule).samples;
            } catch (const InsufficientDataError&) {
                // Pool what the other trajectories provide.
            }
            if (i == 0) first[0] = std::move(record);
        },
        config.threads);
    PooledPeriods pooled;
    pooled.first_record = std::move(first[0]);
    for (auto& chunk : per_traj)
        pooled.samples.insert(pooled.samples.end(), chunk.begin(), chunk.end());
    if (pooled.samples.empty())
        throw InsufficientDataError("pulsed run produced no complete interior period");
    return pooled;
}

void print_validity(const ValidityReport& validity, std::ostream& out) {
    out << "regime check (ratio >= " << validity.conditions.front().threshold << " wanted):\n";
    for (const auto& c : validity.conditions)
        out << "  " << (c.satisfied ? "[ok]  " : "[WARN]") << ' ' << c.name << " = "
            << io::format_double(c.ratio) << '\n';
    if (!validity.note.empty()) out << "  note: " << validity.note << '\n';
}

void print_period_summary(const periods::PeriodReport& report, std::ostream& out) {
    out << "light periods: mean " << report.light.mean << " +- " << report.light.se << " (n="
        << report.light.count << "), theory " << report.theory_light << ", z = "
        << report.z_light << '\n';
    out << "dark periods:  mean " << report.dark.mean << " +- " << report.dark.se << " (n="
        << report.dark.count << "), theory " << report.theory_dark << ", z = " << report.z_dark
        << '\n';
}

}  // namespace

void RunConfig::validate_common() const {
    params.validate();
    if (trajectories < 1) throw ConfigError("trajectories must be >= 1");
}

void apply_config_json(RunConfig& config, const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    try {
        if (j.contains("params")) {
            const auto& p = j.at("params");
            config.params.omega2 = get_or(p, "omega2", config.params.omega2);
            config.params.omega3 = get_or(p, "omega3", config.params.omega3);
            config.params.a3 = get_or(p, "a3", config.params.a3);
        }
        if (j.contains("schedule")) {
            const auto& s = j.at("schedule");
            config.schedule.pulse_duration =
                get_or(s, "pulse_duration", config.schedule.pulse_duration);
            config.schedule.gap = get_or(s, "gap", config.schedule.gap);
            if (s.contains("n_pulses")) config.schedule.n_pulses = s.at("n_pulses").get<std::size_t>();
            config.schedule.total_duration =
                get_or(s, "total_duration", config.schedule.total_duration);
        }
        if (j.contains("dt")) config.dt = j.at("dt").get<double>();
        if (j.contains("n_measurements"))
            config.n_measurements = j.at("n_measurements").get<std::size_t>();
        if (j.contains("trajectories")) config.trajectories = j.at("trajectories").get<std::size_t>();
        if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("gap_threshold")) config.gap_threshold = j.at("gap_threshold").get<double>();
        if (j.contains("out")) config.out_dir = j.at("out").get<std::string>();
        if (j.contains("threads")) config.threads = j.at("threads").get<unsigned>();
        if (j.contains("timeline")) config.timeline = j.at("timeline").get<bool>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config value: ") + e.what());
    }
}

int cmd_ideal(const RunConfig& config, std::ostream& out) {
    config.validate_common();
    if (config.n_measurements < 1) throw ConfigError("ideal mode needs n_measurements >= 1");
    if (!(config.dt > 0.0)) throw ConfigError("ideal mode needs dt > 0");
    ensure_out_dir(config);

    Rng rng(config.seed);
    const auto seq =
        ideal::run_ideal_sequence(ground(), config.params.omega2, config.dt, config.n_measurements, rng);
    const auto stats = ideal::period_stats(seq);
    const double t_pi = kPi / config.params.omega2;

    json report;
    report["mode"] = "ideal";
    report["params"] = params_json(config.params);
    report["dt"] = config.dt;
    report["t_pi"] = t_pi;
    report["n_measurements"] = config.n_measurements;
    report["seed"] = config.seed;
    double theory = 0.0;
    try {
        theory = ideal::mean_period_exact(config.params.omega2, config.dt);
        report["theory_period"] = theory;
    } catch (const DivergentPeriodError&) {
        report["theory_period"] = nullptr;
    }
    report["period_1"] = {{"mean", stats.mean_a}, {"stderr", stats.se_a}, {"count", stats.count_a}};
    report["period_2"] = {
        {"mean", stats.mean_perp}, {"stderr", stats.se_perp}, {"count", stats.count_perp}};

    io::write_file(config.out_dir / "outcomes.csv", io::outcomes_to_csv(seq));
    io::write_file(config.out_dir / "ideal_report.json", report.dump(2) + "\n");

    out << "ideal run: dt = " << config.dt << " (T_pi = " << t_pi << "), " << config.n_measurements
        << " measurements\n";
    if (config.timeline) {
        std::vector<bool> light;
        light.reserve(std::min<std::size_t>(seq.outcomes.size(), 512));
        for (std::size_t i = 0; i < std::min<std::size_t>(seq.outcomes.size(), 512); ++i)
            light.push_back(seq.outcomes[i] == ideal::Outcome::A);
        out << ascii_timeline(light, 512) << '\n';
    }
    if (theory > 0.0) out << "theory period T1 = T2 = " << theory << '\n';
    out << "level-1 periods: mean " << stats.mean_a << " +- " << stats.se_a << " (n="
        << stats.count_a << ")\n";
    out << "level-2 periods: mean " << stats.mean_perp << " +- " << stats.se_perp << " (n="
        << stats.count_perp << ")\n";
    return kExitOk;
}

int cmd_pulsed(const RunConfig& config, std::ostream& out) {
    config.validate_common();
    if (config.schedule.continuous())
        throw ConfigError("pulsed mode needs gap > 0 (use `continuous` for gap = 0)");
    config.schedule.validate();
    ensure_out_dir(config);

    const auto validity = validity_report(config.params, config.schedule);
    print_validity(validity, out);

    const auto pooled = run_pulsed_pool(config);
    const auto theory = analytics::mean_periods(
        analytics::transition_probs_corrected(config.params, config.schedule.gap,
                                              config.schedule.pulse_duration),
        config.schedule.gap, config.schedule.pulse_duration);
    const auto report = periods::make_report(pooled.samples, theory);

    json j;
    j["mode"] = "pulsed";
    io::record_metadata_into(pooled.first_record, j);
    j["trajectories"] = config.trajectories;
    j["validity"] = io::validity_report_to_json(validity);
    j["periods"] = io::period_report_to_json(report);

    io::write_file(config.out_dir / "record.csv", io::record_to_csv(pooled.first_record));
    io::write_file(config.out_dir / "record.meta.json",
                   io::record_metadata(pooled.first_record).dump(2) + "\n");
    io::write_file(config.out_dir / "periods.csv", io::periods_to_csv(pooled.samples));
    io::write_file(config.out_dir / "report.json", j.dump(2) + "\n");

    if (config.timeline) {
        const auto flags = periods::classify_pulses(pooled.first_record, config.schedule);
        out << ascii_timeline(flags, 512) << '\n';
    }
    print_period_summary(report, out);
    return kExitOk;
}

int cmd_continuous(const RunConfig& config, std::ostream& out) {
    config.validate_common();
    if (!(config.schedule.total_duration > 0.0))
        throw ConfigError("continuous mode needs total_duration > 0");
    ensure_out_dir(config);

    PulseSchedule schedule;
    schedule.gap = 0.0;
    schedule.total_duration = config.schedule.total_duration;
    const auto validity = validity_report(config.params, schedule);
    print_validity(validity, out);

    const double threshold = config.gap_threshold > 0.0
                                 ? config.gap_threshold
                                 : periods::default_gap_threshold(config.params);
    out << "gap threshold: " << threshold
        << (config.gap_threshold > 0.0 ? " (override)" : " (default)") << '\n';

    const JumpEngine engine(config.params);
    std::vector<std::vector<periods::PeriodSample>> per_traj(config.trajectories);
    std::vector<EmissionRecord> first(1);
    run_indexed(
        config.trajectories,
        [&](std::size_t i) {
            Rng rng = Rng::for_stream(config.seed, i);
            EmissionRecord record = engine.run_continuous(schedule.total_duration, rng);
            record.seed = config.seed;
            try {
                per_traj[i] = periods::extract_periods_continuous(record, threshold).samples;
            } catch (const InsufficientDataError&) {
            }
            if (i == 0) first[0] = std::move(record);
        },
        config.threads);
    std::vector<periods::PeriodSample> samples;
    for (auto& chunk : per_traj) samples.insert(samples.end(), chunk.begin(), chunk.end());
    if (samples.empty())
        throw InsufficientDataError(
            "continuous run too short: no complete dark period at this threshold");

    const auto theory = analytics::continuous_limit_periods(config.params);
    auto report = periods::make_report(samples, theory);
    report.gap_threshold = threshold;

    json j;
    j["mode"] = "continuous";
    io::record_metadata_into(first[0], j);
    j["trajectories"] = config.trajectories;
    j["gap_threshold"] = threshold;
    j["gap_threshold_is_default"] = !(config.gap_threshold > 0.0);
    j["validity"] = io::validity_report_to_json(validity);
    j["periods"] = io::period_report_to_json(report);

    io::write_file(config.out_dir / "record.csv", io::record_to_csv(first[0]));
    io::write_file(config.out_dir / "record.meta.json",
                   io::record_metadata(first[0]).dump(2) + "\n");
    io::write_file(config.out_dir / "periods.csv", io::periods_to_csv(samples));
    io::write_file(config.out_dir / "report.json", j.dump(2) + "\n");

    print_period_summary(report, out);
    return kExitOk;
}

int cmd_theory(const RunConfig& config, std::ostream& out) {
    config.validate_common();
    ensure_out_dir(config);
    const auto eps = config.params.epsilons();
    const auto validity = validity_report(config.params, config.schedule);
    const auto limits = analytics::continuous_limit_periods(config.params);

    json j;
    j["mode"] = "theory";
    j["params"] = params_json(config.params);
    j["epsilons"] = {{"eps_p", eps.eps_p}, {"eps_r", eps.eps_r}, {"eps_a", eps.eps_a}};
    j["t_pi"] = kPi / config.params.omega2;
    j["validity"] = io::validity_report_to_json(validity);
    if (!config.schedule.continuous()) {
        const auto probs = analytics::transition_probs(config.params, config.schedule.gap,
                                                       config.schedule.pulse_duration);
        const auto corrected = analytics::transition_probs_corrected(
            config.params, config.schedule.gap, config.schedule.pulse_duration);
        j["transition_probs"] = {{"p", probs.p}, {"q", probs.q}, {"clamped", probs.clamped}};
        j["transition_probs_corrected"] = {
            {"p", corrected.p}, {"q", corrected.q}, {"clamped", corrected.clamped}};
        const auto periods =
            analytics::mean_periods(corrected, config.schedule.gap, config.schedule.pulse_duration);
        j["mean_periods"] = {{"t_light", periods.t_light}, {"t_dark", periods.t_dark}};
        out << "p = " << probs.p << ", q = " << probs.q << " (corrected p = " << corrected.p
            << ")\n";
        out << "pulsed periods: T_L = " << periods.t_light << ", T_D = " << periods.t_dark
            << '\n';
    }
    j["continuous_limit"] = {{"t_light", limits.t_light}, {"t_dark", limits.t_dark}};
    j["default_gap_threshold"] = periods::default_gap_threshold(config.params);

    io::write_file(config.out_dir / "theory.json", j.dump(2) + "\n");
    out << "eps_p = " << eps.eps_p << ", eps_r = " << eps.eps_r << ", eps_a = " << eps.eps_a
        << '\n';
    out << "continuous limit: T_L = " << limits.t_light << ", T_D = " << limits.t_dark << '\n';
    return kExitOk;
}

int cmd_verify(const RunConfig& config, const verify::Options& options, std::ostream& out,
               std::ostream& err) {
    verify::Options opts = options;
    if (opts.threads == 0) opts.threads = config.threads;
    const auto results = verify::run_all(opts);
    int failures = 0;
    for (const auto& r : results) {
        if (r.passed) {
            out << "[PASS] " << r.name << ": " << r.detail << '\n';
        } else {
            ++failures;
            err << "[FAIL] " << r.name << ": " << r.detail << '\n';
        }
    }
    out << (failures == 0 ? "verify: all checks passed\n"
                          : "verify: " + std::to_string(failures) + " check(s) failed\n");
    return failures;
}

}  // namespace vzeno::cli
