#pragma once

#include "vzeno/types.hpp"

namespace vzeno::analytics {

/// Per-pulse transition probabilities of the light/dark alternation:
/// p = P(no fluorescence | previous pulse fluoresced),
/// q = P(no fluorescence | previous pulse dark).
/// Note q != 1 - p at first order in the epsilons.
struct TransitionProbs {
    double p;
    double q;
    bool corrected;      // includes the incomplete-decay term valid at any gap
    bool clamped;        // a value left [0,1] before clamping (regime violation)
};

/// Mean light/dark period durations.
struct PeriodTheory {
    double t_light;
    double t_dark;
    bool continuous_limit;  // true if from the gap->0 closed form
};

/// First-order transition probabilities, valid when the gap satisfies
/// dt >> 1/a3 and (omega2 dt)^2 >> eps. With c = cos(omega2 dt),
/// s = sin(omega2 dt):
///   p = (1-c)/2 + eps_p [ 2s (a3^2+omega3^2)/(a3^2+2 omega3^2)
///       + (omega2 dtp/2) c (3 a3^2+2 omega3^2)/(a3^2+2 omega3^2)
///       - omega2 dtp/2 ] - (eps_a/2) s omega3^2/(a3^2+2 omega3^2),
///   q = (1+c)/2 - eps_p [ 2s + (omega2 dtp/2)(1+c) ].
TransitionProbs transition_probs(const VSystemParams& params, double dt,
                                 double pulse_duration);

/// Transition probabilities corrected for incomplete decay of level 3
/// between pulses, valid for arbitrary gap:
///   p~ = p - 2 eps_r s omega3 a3/(a3^2+2 omega3^2) exp(-a3 dt/2),
///   q~ = q.
TransitionProbs transition_probs_corrected(const VSystemParams& params, double dt,
                                           double pulse_duration);

/// Mean period durations from the geometric run-length law:
///   T_L = (dtp + dt)/p,  T_D = (dtp + dt)/(1 - q).
PeriodTheory mean_periods(const TransitionProbs& probs, double dt, double pulse_duration);

/// Closed-form mean periods of the continuously driven system (gap -> 0),
/// the electron-shelving light and dark periods:
///   T_L = (a3^2 + 2 omega3^2) omega3^2 / (omega2^2 a3^3),
///   T_D = omega3^2 / (omega2^2 a3).
PeriodTheory continuous_limit_periods(const VSystemParams& params);

}  // namespace vzeno::analytics
