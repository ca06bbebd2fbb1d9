#include "vzeno/jump.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace vzeno {

void PulseSchedule::validate() const {
    if (gap < 0.0) throw std::invalid_argument("PulseSchedule: negative gap");
    if (continuous()) {
        if (!(total_duration > 0.0))
            throw std::invalid_argument("PulseSchedule: continuous mode needs total_duration > 0");
    } else {
        if (!(pulse_duration > 0.0))
            throw std::invalid_argument("PulseSchedule: pulsed mode needs pulse_duration > 0");
        if (n_pulses < 1)
            throw std::invalid_argument("PulseSchedule: pulsed mode needs n_pulses >= 1");
    }
}

ValidityReport validity_report(const VSystemParams& params, const PulseSchedule& schedule) {
    ValidityReport report;
    report.eps = params.epsilons();
    report.continuous_mode = schedule.continuous();
    const double threshold = 10.0;  // operational reading of "much greater than"

    auto add = [&](const std::string& name, double ratio) {
        report.conditions.push_back({name, ratio, threshold, ratio >= threshold});
    };

    const double pulse_scale = std::max(1.0 / params.a3, params.a3 / (params.omega3 * params.omega3));
    add("pulse_length_vs_measurement_scale", schedule.pulse_duration / pulse_scale);
    add("inv_eps_p", 1.0 / report.eps.eps_p);
    add("inv_eps_r", 1.0 / report.eps.eps_r);
    add("inv_eps_a", 1.0 / report.eps.eps_a);
    if (report.continuous_mode) {
        report.note =
            "gap is zero: level 3 cannot empty between pulses and the projection-postulate "
            "analysis does not apply; use the decay-corrected transition probabilities or the "
            "continuous-limit period formulas";
        report.conditions.push_back({"gap_vs_decay_time", 0.0, threshold, false});
        report.conditions.push_back({"gap_rotation_sq_vs_eps", 0.0, threshold, false});
    } else {
        add("gap_vs_decay_time", schedule.gap * params.a3);
        const double rot = params.omega2 * schedule.gap;
        add("gap_rotation_sq_vs_eps", rot * rot / report.eps.max());
        if (!report.conditions[4].satisfied || !report.conditions[5].satisfied)
            report.note =
                "gap regime violated: analytic periods must use the decay-corrected "
                "transition probabilities";
    }
    return report;
}

namespace {

/// No-emission evolution from one fixed initial state, evaluated at many
/// times. On the spectral path each evaluation costs three complex
/// exponentials and one 3x3 apply.
struct Sampler {
    const Propagator* prop;
    double a3;
    State psi0;
    Eigen::Vector3cd coeff;
    bool spectral;

    Sampler(const Propagator& p, double decay, const State& psi)
        : prop(&p), a3(decay), psi0(psi), spectral(p.spectral()) {
        if (spectral) coeff = p.coefficients(psi);
    }

    State at(double t) const {
        return spectral ? prop->from_coefficients(coeff, t) : prop->apply(psi0, t);
    }
};

/// Solve ||psi(t)||^2 = r on (0, horizon]. Returns nothing when the norm at
/// the horizon is still above the threshold (no jump in this segment).
/// Safeguarded Newton on log ||psi(t)||^2 - log r, with the exact derivative
/// d||psi||^2/dt = -a3 |psi_3(t)|^2; bisection backstop keeps a bracket at
/// all times.
std::optional<double> find_jump_time(const Sampler& s, double horizon, double r, double tol) {
    if (horizon <= tol) return std::nullopt;  // sub-tolerance leftover of a segment
    const double log_r = std::log(r);

    // Bracket by doubling from the decay scale; norm^2 is non-increasing.
    double lo = 0.0;
    double hi = horizon;
    bool have_hi = false;
    double t = std::min(1.0 / s.a3, horizon);
    for (int k = 0; k < 200 && !have_hi; ++k) {
        const double n2 = s.at(t).squaredNorm();
        if (n2 >= r) {
            lo = t;
            if (t >= horizon) return std::nullopt;
            t = std::min(2.0 * t, horizon);
        } else {
            hi = t;
            have_hi = true;
        }
    }
    if (!have_hi) {
        // Bracketing stalled; decide directly at the horizon.
        if (s.at(horizon).squaredNorm() >= r) return std::nullopt;
        hi = horizon;
    }

    double guess = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const State psi = s.at(guess);
        const double n2 = psi.squaredNorm();
        const double g = (n2 > 0.0) ? std::log(n2) - log_r : -std::numeric_limits<double>::infinity();
        if (g > 0.0)
            lo = guess;
        else
            hi = guess;
        double next;
        const double slope = -s.a3 * std::norm(psi(2)) / n2;  // d log(norm^2)/dt
        if (std::isfinite(g) && slope < 0.0) {
            next = guess - g / slope;
            if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        } else {
            next = 0.5 * (lo + hi);
        }
        if (std::abs(next - guess) < tol || (hi - lo) < tol) {
            // Keep strictly inside the segment so jump times stay increasing.
            return std::min(next, horizon - 0.25 * tol);
        }
        guess = next;
    }
    throw NumericsError("find_jump_time: root finding did not converge");
}

/// Accumulates |psi><psi| of the normalized conditioned state at fixed
/// sample times as the trajectory sweeps past them.
struct GridAccumulator {
    std::span<const double> grid;
    std::vector<Mat3>* accum;
    std::size_t next = 0;

    void advance(const Sampler& s, double interval_start, double interval_end) {
        while (next < grid.size() && grid[next] < interval_end) {
            if (grid[next] >= interval_start) {
                State psi = s.at(grid[next] - interval_start);
                psi.normalize();
                (*accum)[next] += psi * psi.adjoint();
            }
            ++next;
        }
    }

    /// Samples sitting exactly on the end of the run.
    void flush(const State& final_state, double duration) {
        const double slack = 1e-12 * std::max(1.0, duration);
        while (next < grid.size() && grid[next] <= duration + slack) {
            (*accum)[next] += final_state * final_state.adjoint();
            ++next;
        }
    }
};

struct SegmentResult {
    std::size_t jumps = 0;
    State post;
};

/// Evolve one constant-Hamiltonian segment with the jump procedure. The
/// input state must be normalized; the returned state is normalized.
SegmentResult run_segment(const Propagator& prop, double a3, const State& start,
                          double duration, double t_offset, Rng& rng,
                          std::vector<double>* jump_times, GridAccumulator* sampler) {
    SegmentResult result;
    result.post = start;
    if (duration <= 0.0) return result;
    const double tol = 1e-10 / a3;
    double t_local = 0.0;
    State psi = start.normalized();  // thresholds assume a unit input
    while (true) {
        const double remaining = duration - t_local;
        Sampler s(prop, a3, psi);
        const double r = rng.uniform();
        const auto jump = find_jump_time(s, remaining, r, tol);
        const double interval_end = t_offset + t_local + (jump ? *jump : remaining);
        if (sampler) sampler->advance(s, t_offset + t_local, interval_end);
        if (!jump) {
            psi = s.at(remaining);
            psi.normalize();
            result.post = psi;
            return result;
        }
        if (jump_times) jump_times->push_back(t_offset + t_local + *jump);
        ++result.jumps;
        t_local += *jump;
        psi = ground();  // the emitted photon projects the atom back to |1>
    }
}

}  // namespace

JumpEngine::JumpEngine(const VSystemParams& params)
    : params_(params),
      probe_on_(conditional_hamiltonian(params, true)),
      probe_off_(conditional_hamiltonian(params, false)) {}

PulseOutcome JumpEngine::simulate_pulse(const State& state, double pulse_duration, Rng& rng,
                                        std::vector<double>* jump_times,
                                        double t_offset) const {
    if (pulse_duration < 0.0)
        throw std::invalid_argument("simulate_pulse: negative pulse duration");
    PulseOutcome out;
    if (pulse_duration == 0.0) {
        out.post_state = state;
        return out;
    }
    const auto seg =
        run_segment(probe_on_, params_.a3, state, pulse_duration, t_offset, rng, jump_times, nullptr);
    out.photon_count = seg.jumps;
    out.fluoresced = seg.jumps > 0;
    out.post_state = seg.post;
    return out;
}

GapOutcome JumpEngine::simulate_gap(const State& state, double gap_duration, Rng& rng,
                                    std::vector<double>* jump_times, double t_offset) const {
    if (gap_duration < 0.0) throw std::invalid_argument("simulate_gap: negative gap duration");
    GapOutcome out;
    if (gap_duration == 0.0) {
        out.post_state = state;
        return out;
    }
    const auto seg =
        run_segment(probe_off_, params_.a3, state, gap_duration, t_offset, rng, jump_times, nullptr);
    out.photon_count = seg.jumps;
    out.post_state = seg.post;
    return out;
}

EmissionRecord JumpEngine::run_trajectory(const PulseSchedule& schedule, Rng& rng) const {
    schedule.validate();
    if (schedule.continuous())
        throw std::invalid_argument("run_trajectory: schedule is continuous; use run_continuous");
    EmissionRecord record;
    record.params = params_;
    record.schedule = schedule;
    State psi = ground();
    for (std::size_t k = 0; k < schedule.n_pulses; ++k) {
        const double cycle_start = static_cast<double>(k) * schedule.cycle();
        const std::size_t before = record.jump_times.size();
        const auto pulse = simulate_pulse(psi, schedule.pulse_duration, rng, &record.jump_times,
                                          cycle_start);
        const auto gap = simulate_gap(pulse.post_state, schedule.gap, rng, &record.jump_times,
                                      cycle_start + schedule.pulse_duration);
        psi = gap.post_state;
        record.pulse_index.resize(record.jump_times.size());
        for (std::size_t j = before; j < record.jump_times.size(); ++j)
            record.pulse_index[j] = static_cast<std::int64_t>(k);
    }
    return record;
}

EmissionRecord JumpEngine::run_continuous(double total_duration, Rng& rng) const {
    if (!(total_duration > 0.0))
        throw std::invalid_argument("run_continuous: total_duration must be positive");
    EmissionRecord record;
    record.params = params_;
    record.schedule.gap = 0.0;
    record.schedule.total_duration = total_duration;
    run_segment(probe_on_, params_.a3, ground(), total_duration, 0.0, rng, &record.jump_times,
                nullptr);
    return record;
}

EmissionRecord JumpEngine::run_sampled(const PulseSchedule& schedule, Rng& rng,
                                       std::span<const double> grid,
                                       std::vector<Mat3>& rho_accum) const {
    schedule.validate();
    if (rho_accum.size() != grid.size()) rho_accum.resize(grid.size(), Mat3::Zero());
    GridAccumulator acc{grid, &rho_accum, 0};
    EmissionRecord record;
    record.params = params_;
    record.schedule = schedule;
    if (schedule.continuous()) {
        const auto seg = run_segment(probe_on_, params_.a3, ground(), schedule.total_duration,
                                     0.0, rng, &record.jump_times, &acc);
        acc.flush(seg.post, schedule.total_duration);
        return record;
    }
    State psi = ground();
    for (std::size_t k = 0; k < schedule.n_pulses; ++k) {
        const double cycle_start = static_cast<double>(k) * schedule.cycle();
        const std::size_t before = record.jump_times.size();
        const auto pulse = run_segment(probe_on_, params_.a3, psi, schedule.pulse_duration,
                                       cycle_start, rng, &record.jump_times, &acc);
        const auto gap = run_segment(probe_off_, params_.a3, pulse.post, schedule.gap,
                                     cycle_start + schedule.pulse_duration, rng,
                                     &record.jump_times, &acc);
        psi = gap.post;
        record.pulse_index.resize(record.jump_times.size());
        for (std::size_t j = before; j < record.jump_times.size(); ++j)
            record.pulse_index[j] = static_cast<std::int64_t>(k);
    }
    acc.flush(psi, schedule.duration());
    return record;
}

PulseOutcome simulate_pulse(const State& state, const VSystemParams& params,
                            double pulse_duration, Rng& rng) {
    return JumpEngine(params).simulate_pulse(state, pulse_duration, rng);
}

GapOutcome simulate_gap(const State& state, const VSystemParams& params, double gap_duration,
                        Rng& rng) {
    return JumpEngine(params).simulate_gap(state, gap_duration, rng);
}

EmissionRecord run_trajectory(const VSystemParams& params, const PulseSchedule& schedule,
                              Rng& rng) {
    return JumpEngine(params).run_trajectory(schedule, rng);
}

EmissionRecord run_continuous(const VSystemParams& params, double total_duration, Rng& rng) {
    return JumpEngine(params).run_continuous(total_duration, rng);
}

Mat3 effective_rho_no_emission(const VSystemParams& params) {
    const auto eps = params.epsilons();
    Mat3 rho = Mat3::Zero();
    rho(1, 1) = 1.0;
    rho(0, 1) = Complex(0.0, -eps.eps_p);
    rho(1, 0) = Complex(0.0, eps.eps_p);
    rho(1, 2) = -eps.eps_r;
    rho(2, 1) = -eps.eps_r;
    return rho;
}

Mat3 effective_rho_emission(const VSystemParams& params, double pulse_duration) {
    const auto eps = params.epsilons();
    const double a2 = params.a3 * params.a3;
    const double o2 = params.omega3 * params.omega3;
    const double shelved = eps.eps_p * a2 * params.omega2 * pulse_duration;
    const double norm = a2 + 2.0 * o2 + shelved;
    Mat3 rho = Mat3::Zero();
    rho(0, 0) = a2 + o2;
    rho(0, 1) = Complex(0.0, eps.eps_p * a2);
    rho(1, 0) = Complex(0.0, -eps.eps_p * a2);
    rho(0, 2) = Complex(0.0, params.a3 * params.omega3);
    rho(2, 0) = Complex(0.0, -params.a3 * params.omega3);
    rho(1, 1) = shelved;
    rho(1, 2) = eps.eps_r * (a2 + o2);
    rho(2, 1) = eps.eps_r * (a2 + o2);
    rho(2, 2) = o2;
    return rho / norm;
}

double no_emission_probability(const Mat3& rho, const VSystemParams& params,
                               double pulse_duration) {
    const auto eps = params.epsilons();
    const double rho22 = rho(1, 1).real();
    const double p0 = rho22 - eps.eps_p * params.omega2 * pulse_duration * rho22 +
                      2.0 * eps.eps_p * rho(0, 1).imag() - 2.0 * eps.eps_r * rho(1, 2).real();
    return std::clamp(p0, 0.0, 1.0);
}

}  // namespace vzeno
