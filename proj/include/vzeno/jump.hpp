#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vzeno/core.hpp"
#include "vzeno/rng.hpp"

namespace vzeno {

/// Probe-pulse timetable. Pulse k occupies
/// [k (dtp + gap), k (dtp + gap) + dtp); a gap of zero selects continuous
/// mode (both fields on throughout), in which total_duration sets the run
/// length and pulse_duration is ignored.
struct PulseSchedule {
    double pulse_duration = 0.0;
    double gap = 0.0;
    std::size_t n_pulses = 0;
    double total_duration = 0.0;

    bool continuous() const { return gap <= 0.0; }
    double cycle() const { return pulse_duration + gap; }
    double duration() const {
        return continuous() ? total_duration : static_cast<double>(n_pulses) * cycle();
    }
    void validate() const;
};

/// Raw stochastic output of one trajectory: ordered photon emission times,
/// with each jump attributed to the probe pulse whose cycle it fell in
/// (pulsed mode only; jumps during a gap belong to the preceding pulse).
struct EmissionRecord {
    std::vector<double> jump_times;
    std::vector<std::int64_t> pulse_index;  // empty in continuous mode
    VSystemParams params{};
    PulseSchedule schedule{};
    std::uint64_t seed = 0;
};

struct PulseOutcome {
    bool fluoresced = false;
    std::size_t photon_count = 0;
    State post_state;
};

struct GapOutcome {
    std::size_t photon_count = 0;
    State post_state;
};

struct ValidityCondition {
    std::string name;
    double ratio;       // satisfied when >= threshold
    double threshold;
    bool satisfied;
};

/// Regime report: how strongly the parameters satisfy each condition for a
/// probe pulse to act as an effective level measurement. Informational, not
/// a gate.
struct ValidityReport {
    std::vector<ValidityCondition> conditions;
    Epsilons eps{};
    bool continuous_mode = false;
    std::string note;

    bool all_satisfied() const {
        for (const auto& c : conditions)
            if (!c.satisfied) return false;
        return true;
    }
};

ValidityReport validity_report(const VSystemParams& params, const PulseSchedule& schedule);

/// Quantum-jump simulator for one V system. Holds the eigendecomposed
/// no-emission propagators for probe-on and probe-off so the per-photon
/// waiting-time sampling is O(1) regardless of run length.
class JumpEngine {
  public:
    explicit JumpEngine(const VSystemParams& params);

    const VSystemParams& params() const { return params_; }

    /// One probe pulse over [0, pulse_duration] from a normalized state:
    /// draw a threshold, evolve with the probe-on conditional Hamiltonian
    /// until the squared norm hits it, emit a photon and reset to |1>,
    /// repeat. Appends global jump times to `jump_times` if given.
    PulseOutcome simulate_pulse(const State& state, double pulse_duration, Rng& rng,
                                std::vector<double>* jump_times = nullptr,
                                double t_offset = 0.0) const;

    /// Same procedure with the probe off (rf drive and decay channel only):
    /// any level-3 amplitude left by a pulse decays here.
    GapOutcome simulate_gap(const State& state, double gap_duration, Rng& rng,
                            std::vector<double>* jump_times = nullptr,
                            double t_offset = 0.0) const;

    /// Full pulsed trajectory from |1>: alternate pulses and gaps, record
    /// every emission with pulse attribution.
    EmissionRecord run_trajectory(const PulseSchedule& schedule, Rng& rng) const;

    /// Continuous drive (gap -> 0 limit): both fields on for the whole run.
    EmissionRecord run_continuous(double total_duration, Rng& rng) const;

    /// Trajectory that also samples the normalized conditioned state at the
    /// given (sorted) times, accumulating the projector |psi><psi| into
    /// `rho_accum` (sized like `grid`). Works for pulsed and continuous
    /// schedules; used for unraveling-vs-master-equation comparisons.
    EmissionRecord run_sampled(const PulseSchedule& schedule, Rng& rng,
                               std::span<const double> grid,
                               std::vector<Mat3>& rho_accum) const;

    const Propagator& propagator(bool probe_on) const {
        return probe_on ? probe_on_ : probe_off_;
    }

  private:
    VSystemParams params_;
    Propagator probe_on_;
    Propagator probe_off_;
};

// Free-function forms of the engine operations (convenience; they build the
// engine internally, so hot loops should use JumpEngine directly).
PulseOutcome simulate_pulse(const State& state, const VSystemParams& params,
                            double pulse_duration, Rng& rng);
GapOutcome simulate_gap(const State& state, const VSystemParams& params, double gap_duration,
                        Rng& rng);
EmissionRecord run_trajectory(const VSystemParams& params, const PulseSchedule& schedule,
                              Rng& rng);
EmissionRecord run_continuous(const VSystemParams& params, double total_duration, Rng& rng);

/// Density matrix a pulse effectively projects onto when no photon was
/// emitted (to first order in the epsilons): |2><2| plus -i eps_p on the
/// (1,2) coherence and -eps_r on the (2,3) coherence.
Mat3 effective_rho_no_emission(const VSystemParams& params);

/// Density matrix right at the end of a fluorescing pulse, before the
/// level-3 amplitude has decayed; normalized by
/// a3^2 + 2 omega3^2 + eps_p a3^2 omega2 dtp.
Mat3 effective_rho_emission(const VSystemParams& params, double pulse_duration);

/// First-order probability of no photon emission during a pulse applied to
/// an arbitrary initial density matrix:
///   rho22 (1 - eps_p omega2 dtp) + 2 eps_p Im rho12 - 2 eps_r Re rho23,
/// clamped to [0,1].
double no_emission_probability(const Mat3& rho, const VSystemParams& params,
                               double pulse_duration);

}  // namespace vzeno
