#include "vzeno/analytics.hpp"

#include <cmath>

namespace vzeno::analytics {

namespace {

double clamp01(double x, bool& clamped) {
    if (x < 0.0) {
        clamped = true;
        return 0.0;
    }
    if (x > 1.0) {
        clamped = true;
        return 1.0;
    }
    return x;
}

}  // namespace

TransitionProbs transition_probs(const VSystemParams& params, double dt,
                                 double pulse_duration) {
    params.validate();
    const auto eps = params.epsilons();
    const double c = std::cos(params.omega2 * dt);
    const double s = std::sin(params.omega2 * dt);
    const double a2 = params.a3 * params.a3;
    const double o2 = params.omega3 * params.omega3;
    const double denom = a2 + 2.0 * o2;
    const double half_pulse_angle = 0.5 * params.omega2 * pulse_duration;

    double p = 0.5 * (1.0 - c) +
               eps.eps_p * (2.0 * s * (a2 + o2) / denom +
                            half_pulse_angle * c * (3.0 * a2 + 2.0 * o2) / denom -
                            half_pulse_angle) -
               0.5 * eps.eps_a * s * o2 / denom;
    double q = 0.5 * (1.0 + c) - eps.eps_p * (2.0 * s + half_pulse_angle * (1.0 + c));

    TransitionProbs out{p, q, false, false};
    out.p = clamp01(p, out.clamped);
    out.q = clamp01(q, out.clamped);
    return out;
}

TransitionProbs transition_probs_corrected(const VSystemParams& params, double dt,
                                           double pulse_duration) {
    TransitionProbs probs = transition_probs(params, dt, pulse_duration);
    const auto eps = params.epsilons();
    const double s = std::sin(params.omega2 * dt);
    const double denom = params.a3 * params.a3 + 2.0 * params.omega3 * params.omega3;
    const double decay_residue = 2.0 * eps.eps_r * s * params.omega3 * params.a3 / denom *
                                 std::exp(-0.5 * params.a3 * dt);
    probs.p = clamp01(probs.p - decay_residue, probs.clamped);
    probs.corrected = true;
    return probs;
}

PeriodTheory mean_periods(const TransitionProbs& probs, double dt, double pulse_duration) {
    if (!(probs.p > 0.0) || !(probs.q < 1.0))
        throw DivergentPeriodError("mean_periods: p = 0 or q = 1 gives an infinite period");
    const double cycle = pulse_duration + dt;
    return {cycle / probs.p, cycle / (1.0 - probs.q), false};
}

PeriodTheory continuous_limit_periods(const VSystemParams& params) {
    params.validate();
    const double o2sq = params.omega2 * params.omega2;
    const double o3sq = params.omega3 * params.omega3;
    const double a = params.a3;
    return {(a * a + 2.0 * o3sq) * o3sq / (o2sq * a * a * a), o3sq / (o2sq * a), true};
}

}  // namespace vzeno::analytics
