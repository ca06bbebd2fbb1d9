#include <doctest.h>

#include <cmath>

#include "vzeno/ideal.hpp"
#include "vzeno/periods.hpp"

using namespace vzeno;
using periods::Kind;

namespace {

const VSystemParams kRegime{1.0, 40.0, 20.0};

EmissionRecord record_with(std::vector<double> times, std::vector<std::int64_t> idx,
                           const PulseSchedule& schedule) {
    EmissionRecord r;
    r.jump_times = std::move(times);
    r.pulse_index = std::move(idx);
    r.params = kRegime;
    r.schedule = schedule;
    return r;
}

}  // namespace

TEST_CASE("classify_pulses attribution") {
    const PulseSchedule schedule{1.0, 1.0, 6, 0.0};

    // Empty record: all pulses dark.
    auto flags = periods::classify_pulses(record_with({}, {}, schedule), schedule);
    CHECK(flags == std::vector<bool>(6, false));

    // One jump in the gap after pulse 3 lights pulse 3 (cycle window
    // [6, 8), jump at 7.3 in the gap part).
    flags = periods::classify_pulses(record_with({7.3}, {3}, schedule), schedule);
    for (std::size_t k = 0; k < 6; ++k) CHECK(flags[k] == (k == 3));

    // A jump exactly on a pulse start belongs to that pulse.
    flags = periods::classify_pulses(record_with({4.0}, {2}, schedule), schedule);
    CHECK(flags[2]);
    CHECK_FALSE(flags[1]);

    // Attribution column may be absent (derived from times alone).
    flags = periods::classify_pulses(record_with({7.3}, {}, schedule), schedule);
    CHECK(flags[3]);

    // Mismatched attribution or out-of-range time is a parse error.
    CHECK_THROWS_AS(periods::classify_pulses(record_with({7.3}, {2}, schedule), schedule),
                    ParseError);
    CHECK_THROWS_AS(periods::classify_pulses(record_with({100.0}, {3}, schedule), schedule),
                    ParseError);
}

TEST_CASE("extract_periods censors the boundary runs") {
    const PulseSchedule schedule{1.0, 1.0, 6, 0.0};
    // L L D D D L with cycle 2: one interior period, DARK of duration 6.
    const std::vector<bool> flags{true, true, false, false, false, true};
    const auto out = periods::extract_periods(flags, schedule);
    REQUIRE(out.samples.size() == 1);
    CHECK(out.samples[0].kind == Kind::Dark);
    CHECK(out.samples[0].duration == doctest::Approx(6.0));
    CHECK(out.samples[0].pulse_count == 3);
    CHECK(out.censored_head == doctest::Approx(4.0));
    CHECK(out.censored_tail == doctest::Approx(2.0));
    // Conservation: interior + censored ends = record span.
    CHECK(out.censored_head + out.samples[0].duration + out.censored_tail ==
          doctest::Approx(schedule.duration()));

    // All pulses light: a single run, nothing interior.
    CHECK_THROWS_AS(periods::extract_periods(std::vector<bool>(6, true), schedule),
                    InsufficientDataError);
}

TEST_CASE("extract_periods_continuous splits on the threshold") {
    PulseSchedule schedule;
    schedule.gap = 0.0;
    schedule.total_duration = 100.1;
    const auto record =
        record_with({0.0, 0.1, 0.2, 100.0, 100.1}, {}, schedule);
    const auto out = periods::extract_periods_continuous(record, 1.125);
    REQUIRE(out.samples.size() == 1);
    CHECK(out.samples[0].kind == Kind::Dark);
    CHECK(out.samples[0].duration == doctest::Approx(99.8));
    CHECK(out.censored_head == doctest::Approx(0.2));
    CHECK(out.censored_tail == doctest::Approx(0.1));
    double total = out.censored_head + out.censored_tail;
    for (const auto& s : out.samples) total += s.duration;
    CHECK(total == doctest::Approx(schedule.total_duration));

    // One burst only: no complete dark period.
    const auto lone = record_with({0.0, 0.1}, {}, schedule);
    CHECK_THROWS_AS(periods::extract_periods_continuous(lone, 1.125), InsufficientDataError);
}

TEST_CASE("interior periods alternate and conserve the record span") {
    const PulseSchedule schedule{1.0, 1.0, 400, 0.0};
    Rng rng(7);
    std::vector<bool> flags;
    for (std::size_t i = 0; i < 400; ++i) flags.push_back(rng.uniform() < 0.5);
    flags[0] = true;  // ensure at least two runs exist
    flags[399] = false;
    const auto out = periods::extract_periods(flags, schedule);
    double total = out.censored_head + out.censored_tail;
    for (std::size_t i = 0; i < out.samples.size(); ++i) {
        total += out.samples[i].duration;
        if (i > 0) REQUIRE(out.samples[i].kind != out.samples[i - 1].kind);
    }
    CHECK(total == doctest::Approx(schedule.duration()));
}

TEST_CASE("default threshold sits far from both timescales") {
    const double threshold = periods::default_gap_threshold(kRegime);
    CHECK(threshold == doctest::Approx(2.25).epsilon(1e-12));
    // Twenty mean photon spacings, under 3% of the mean dark period.
    CHECK(threshold / 80.0 < 0.03);
    // Expected spurious splits per light period stay below the 0.01 target.
    CHECK(periods::spurious_split_bound(kRegime, threshold) < 0.01);
}

TEST_CASE("report on synthetic geometric samples") {
    Rng rng(11);
    const double p = 0.25;
    const PulseSchedule schedule{1.0, 1.0, 0, 0.0};
    std::vector<periods::PeriodSample> samples;
    for (int i = 0; i < 4000; ++i) {
        std::size_t n = 1;
        while (rng.uniform() > p) ++n;
        samples.push_back({Kind::Light, static_cast<double>(n) * schedule.cycle(), n});
        std::size_t m = 1;
        while (rng.uniform() > 0.4) ++m;
        samples.push_back({Kind::Dark, static_cast<double>(m) * schedule.cycle(), m});
    }
    analytics::PeriodTheory theory{2.0 / p, 2.0 / 0.4, false};
    const auto report = periods::make_report(samples, theory);
    CHECK(std::abs(report.light.geometric.p_hat - p) < 3.0 * report.light.geometric.se_p);
    CHECK(report.light.geometric.p_value > 0.01);
    CHECK(std::abs(report.light.mean - theory.t_light) < 3.0 * report.light.se);
    CHECK(std::abs(report.z_light) < 3.0);
    CHECK(std::abs(report.z_dark) < 3.0);

    // Degenerate all-equal durations: zero spread, exact mean.
    std::vector<periods::PeriodSample> flat;
    for (int i = 0; i < 40; ++i) {
        flat.push_back({Kind::Light, 4.0, 2});
        flat.push_back({Kind::Dark, 4.0, 2});
    }
    const auto flat_report = periods::make_report(flat, theory);
    CHECK(flat_report.light.mean == doctest::Approx(4.0));
    CHECK(flat_report.light.se == 0.0);

    // Too few of one kind.
    std::vector<periods::PeriodSample> sparse(flat.begin(), flat.begin() + 20);
    CHECK_THROWS_AS(periods::make_report(sparse, theory), InsufficientDataError);
}

TEST_CASE("ideal outcome sequences flow through the period machinery") {
    // A-outcomes as light pulses with dtp = 0: mean period 2 dt at
    // omega2 dt = pi/2.
    const double dt = kPi / 2.0;
    Rng rng(13);
    const auto seq = ideal::run_ideal_sequence(ground(), 1.0, dt, 60000, rng);
    std::vector<bool> flags;
    flags.reserve(seq.outcomes.size());
    for (auto o : seq.outcomes) flags.push_back(o == ideal::Outcome::A);
    PulseSchedule schedule;
    schedule.pulse_duration = 1e-300;  // zero-length pulses, gap carries the clock
    schedule.gap = dt;
    schedule.n_pulses = flags.size();
    const auto extraction = periods::extract_periods(flags, schedule);
    const auto report = periods::make_report(
        extraction.samples, analytics::PeriodTheory{2.0 * dt, 2.0 * dt, false});
    CHECK(std::abs(report.light.mean - 2.0 * dt) < 3.0 * report.light.se);
    CHECK(std::abs(report.dark.mean - 2.0 * dt) < 3.0 * report.dark.se);
}
