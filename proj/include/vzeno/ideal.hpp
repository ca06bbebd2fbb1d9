#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "vzeno/core.hpp"
#include "vzeno/rng.hpp"

namespace vzeno::ideal {

/// Outcome of one projective measurement of |axis><axis|: A means "found in
/// the axis state", Perp means "found in the orthogonal complement".
enum class Outcome : std::uint8_t { A, Perp };

struct OutcomeSequence {
    std::vector<Outcome> outcomes;
    double dt = 0.0;  // spacing between measurements
};

struct MeasureResult {
    Outcome outcome;
    State collapsed;
};

/// Summary of run lengths in an outcome sequence: interior (complete)
/// periods only, first and last runs censored.
struct IdealPeriodStats {
    double mean_a = 0.0;
    double mean_perp = 0.0;
    double se_a = 0.0;
    double se_perp = 0.0;
    std::size_t count_a = 0;
    std::size_t count_perp = 0;
};

/// Projection-postulate measurement of |axis><axis| on a normalized state.
/// Outcome A occurs with probability |<axis|state>|^2 and collapses onto
/// axis; Perp collapses onto the normalized orthogonal remainder.
MeasureResult measure_projective(const State& state, const State& axis, Rng& rng);

/// n cycles of (evolve by two_level_unitary(omega2, dt), measure against
/// |1>), recording the outcome string.
OutcomeSequence run_ideal_sequence(const State& psi0, double omega2, double dt,
                                   std::size_t n, Rng& rng);

/// Exact probability of one outcome string via the projector/propagator
/// chain; the 2^n strings of fixed length sum to one.
double sequence_probability(const OutcomeSequence& seq, const State& psi0, double omega2);

/// Probability of n consecutive A outcomes starting from |1>:
/// cos^{2n}(omega2 dt / 2).
double survival_probability(double omega2, double dt, std::size_t n);

/// Mean duration of a run of equal outcomes in the two-level system,
/// dt / sin^2(omega2 dt / 2); identical for runs of 1's and 2's. Throws
/// DivergentPeriodError when omega2*dt is a multiple of 2 pi.
double mean_period_exact(double omega2, double dt);

/// Leading-order mean durations for a general Hermitian h and measured
/// state a:
///   t_a    = (1/dt) / Var_a(H),
///   t_perp = (1/dt) <phi_perp| pinv(P H^2 P - (P H P)^2) |phi_perp>
/// with P the projector orthogonal to a and the pseudo-inverse restricted
/// to its range. Throws DivergentPeriodError if a is an eigenvector of h.
std::pair<double, double> mean_period_general(const Mat3& h, const State& a,
                                              const State& phi_perp, double dt);

/// The state that starts a Perp run: normalized P_perp U(dt) |a>.
State initial_perp_state(const Mat3& h, const State& a, double dt);

/// Interior run-length statistics of a sequence (durations = run length * dt).
IdealPeriodStats period_stats(const OutcomeSequence& seq);

}  // namespace vzeno::ideal
