#pragma once

#include <span>
#include <vector>

#include "vzeno/analytics.hpp"
#include "vzeno/jump.hpp"
#include "vzeno/stats.hpp"

namespace vzeno::periods {

enum class Kind : std::uint8_t { Light, Dark };

struct PeriodSample {
    Kind kind;
    double duration;
    std::size_t pulse_count = 0;  // pulsed mode only
};

/// Interior (complete) periods; the first and last periods of a record have
/// an unobserved boundary and are reported only as censored durations so
/// that interior + censored add up to the record length exactly.
struct PeriodExtraction {
    std::vector<PeriodSample> samples;
    double censored_head = 0.0;
    double censored_tail = 0.0;
};

struct KindSummary {
    double mean = 0.0;
    double se = 0.0;
    std::size_t count = 0;
    stats::GeometricFit geometric;  // of pulse counts; pulsed mode only
};

struct PeriodReport {
    KindSummary light;
    KindSummary dark;
    double theory_light = 0.0;
    double theory_dark = 0.0;
    double z_light = 0.0;
    double z_dark = 0.0;
    double gap_threshold = 0.0;  // continuous mode only
    std::string censoring = "first and last periods dropped";
};

/// Per-pulse fluorescence flags: pulse k is light iff at least one jump is
/// attributed to it. Attribution is by half-open cycle windows
/// [k (dtp+gap), (k+1)(dtp+gap)), cross-checked against the record's own
/// attribution column when present.
std::vector<bool> classify_pulses(const EmissionRecord& record, const PulseSchedule& schedule);

/// Pulsed mode: maximal runs of equal flags become periods of duration
/// run_length * (dtp + gap). Throws InsufficientDataError with fewer than
/// three runs (no complete interior period).
PeriodExtraction extract_periods(const std::vector<bool>& flags, const PulseSchedule& schedule);

/// Continuous mode: photons separated by gaps <= threshold form bursts;
/// inter-burst gaps are dark periods, intra-burst spans are light periods.
PeriodExtraction extract_periods_continuous(const EmissionRecord& record,
                                            double gap_threshold);

/// Default burst/dark segmentation threshold: twenty mean intra-burst
/// photon spacings, 20 (a3^2 + 2 omega3^2)/(a3 omega3^2). Large enough that
/// the expected number of burst-internal gaps misread as dark periods is
/// far below one per light period, small against the dark-period scale.
double default_gap_threshold(const VSystemParams& params);

/// Upper estimate of spurious dark periods per light period under the
/// threshold rule: (photons per light period) * exp(-threshold * burst rate).
double spurious_split_bound(const VSystemParams& params, double gap_threshold);

/// Means, standard errors, geometric fits and z-scores against theory.
/// Requires >= 30 samples of each kind.
PeriodReport make_report(std::span<const PeriodSample> samples,
                         const analytics::PeriodTheory& theory);

}  // namespace vzeno::periods
