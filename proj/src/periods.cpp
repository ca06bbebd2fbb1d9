#include "vzeno/periods.hpp"

#include <algorithm>
#include <cmath>

namespace vzeno::periods {

std::vector<bool> classify_pulses(const EmissionRecord& record, const PulseSchedule& schedule) {
    schedule.validate();
    if (schedule.continuous())
        throw std::invalid_argument("classify_pulses: schedule is continuous");
    if (!record.pulse_index.empty() && record.pulse_index.size() != record.jump_times.size())
        throw ParseError("classify_pulses: attribution column length mismatch");

    std::vector<bool> light(schedule.n_pulses, false);
    const double cycle = schedule.cycle();
    for (std::size_t j = 0; j < record.jump_times.size(); ++j) {
        const double t = record.jump_times[j];
        if (t < 0.0 || t >= schedule.duration())
            throw ParseError("classify_pulses: jump time outside the schedule");
        auto k = static_cast<std::size_t>(t / cycle);
        if (k >= schedule.n_pulses) k = schedule.n_pulses - 1;
        if (!record.pulse_index.empty() &&
            record.pulse_index[j] != static_cast<std::int64_t>(k))
            throw ParseError("classify_pulses: attribution disagrees with jump time");
        light[k] = true;
    }
    return light;
}

PeriodExtraction extract_periods(const std::vector<bool>& flags, const PulseSchedule& schedule) {
    schedule.validate();
    std::vector<std::size_t> run_len;
    std::vector<bool> run_light;
    for (bool f : flags) {
        if (run_light.empty() || f != run_light.back()) {
            run_light.push_back(f);
            run_len.push_back(1);
        } else {
            ++run_len.back();
        }
    }
    if (run_len.size() < 3)
        throw InsufficientDataError(
            "extract_periods: need at least three runs for one complete interior period");
    const double cycle = schedule.cycle();
    PeriodExtraction out;
    out.censored_head = static_cast<double>(run_len.front()) * cycle;
    out.censored_tail = static_cast<double>(run_len.back()) * cycle;
    for (std::size_t i = 1; i + 1 < run_len.size(); ++i)
        out.samples.push_back({run_light[i] ? Kind::Light : Kind::Dark,
                               static_cast<double>(run_len[i]) * cycle, run_len[i]});
    return out;
}

PeriodExtraction extract_periods_continuous(const EmissionRecord& record,
                                            double gap_threshold) {
    if (!(gap_threshold > 0.0))
        throw std::invalid_argument("extract_periods_continuous: threshold must be positive");
    const auto& t = record.jump_times;
    const double total = record.schedule.total_duration;

    // Bursts: maximal photon groups with internal gaps <= threshold.
    std::vector<std::pair<double, double>> bursts;  // (first, last)
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (bursts.empty() || t[i] - bursts.back().second > gap_threshold)
            bursts.push_back({t[i], t[i]});
        else
            bursts.back().second = t[i];
    }
    if (bursts.size() < 2)
        throw InsufficientDataError(
            "extract_periods_continuous: fewer than two bursts; no complete dark period");

    // Alternating list: light over each burst, dark between bursts. The
    // first light (running since t = 0) and the last light (truncated by
    // the record end) are censored.
    PeriodExtraction out;
    out.censored_head = bursts.front().second;          // [0, end of first burst]
    out.censored_tail = total - bursts.back().first;    // [start of last burst, total]
    for (std::size_t b = 0; b + 1 < bursts.size(); ++b) {
        out.samples.push_back({Kind::Dark, bursts[b + 1].first - bursts[b].second, 0});
        if (b + 1 < bursts.size() - 1)
            out.samples.push_back(
                {Kind::Light, bursts[b + 1].second - bursts[b + 1].first, 0});
    }
    return out;
}

double default_gap_threshold(const VSystemParams& params) {
    const double a2 = params.a3 * params.a3;
    const double o2 = params.omega3 * params.omega3;
    return 20.0 * (a2 + 2.0 * o2) / (params.a3 * o2);
}

double spurious_split_bound(const VSystemParams& params, double gap_threshold) {
    const double a2 = params.a3 * params.a3;
    const double o2 = params.omega3 * params.omega3;
    const double burst_rate = params.a3 * o2 / (a2 + 2.0 * o2);
    const double photons_per_period =
        analytics::continuous_limit_periods(params).t_light * burst_rate;
    return photons_per_period * std::exp(-gap_threshold * burst_rate);
}

PeriodReport make_report(std::span<const PeriodSample> samples,
                         const analytics::PeriodTheory& theory) {
    stats::Running light, dark;
    std::vector<std::size_t> light_counts, dark_counts;
    for (const auto& s : samples) {
        if (s.kind == Kind::Light) {
            light.add(s.duration);
            if (s.pulse_count > 0) light_counts.push_back(s.pulse_count);
        } else {
            dark.add(s.duration);
            if (s.pulse_count > 0) dark_counts.push_back(s.pulse_count);
        }
    }
    if (light.n < 30 || dark.n < 30)
        throw InsufficientDataError("make_report: need >= 30 periods of each kind");

    PeriodReport report;
    report.light = {light.mean, light.stderr_mean(), light.n, stats::fit_geometric(light_counts)};
    report.dark = {dark.mean, dark.stderr_mean(), dark.n, stats::fit_geometric(dark_counts)};
    report.theory_light = theory.t_light;
    report.theory_dark = theory.t_dark;
    report.z_light =
        report.light.se > 0.0 ? (light.mean - theory.t_light) / report.light.se : 0.0;
    report.z_dark = report.dark.se > 0.0 ? (dark.mean - theory.t_dark) / report.dark.se : 0.0;
    return report;
}

}  // namespace vzeno::periods
