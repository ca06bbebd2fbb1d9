#include "vzeno/verify.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "vzeno/analytics.hpp"
#include "vzeno/batch.hpp"
#include "vzeno/bloch.hpp"
#include "vzeno/ideal.hpp"
#include "vzeno/io.hpp"
#include "vzeno/jump.hpp"
#include "vzeno/periods.hpp"
#include "vzeno/stats.hpp"

namespace vzeno::verify {

namespace {

const VSystemParams kRegime{1.0, 40.0, 20.0};

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

CheckResult check_unitary_algebra(Rng& rng) {
    double worst_unitary = 0.0;
    double worst_compose = 0.0;
    double worst_transition = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double omega = 0.1 + 5.0 * rng.uniform();
        const double t1 = 10.0 * rng.uniform();
        const double t2 = 10.0 * rng.uniform();
        const Mat3 u1 = two_level_unitary(omega, t1);
        worst_unitary =
            std::max(worst_unitary, (u1 * u1.adjoint() - Mat3::Identity()).cwiseAbs().maxCoeff());
        const Mat3 u2 = two_level_unitary(omega, t2);
        worst_compose = std::max(
            worst_compose, (u1 * u2 - two_level_unitary(omega, t1 + t2)).cwiseAbs().maxCoeff());
        const double p12 = std::norm(shelf().dot(u1 * ground()));
        const double p21 = std::norm(ground().dot(u1 * shelf()));
        const double expect = std::pow(std::sin(0.5 * omega * t1), 2);
        worst_transition = std::max({worst_transition, std::abs(p12 - expect),
                                     std::abs(p21 - expect)});
    }
    const bool ok = worst_unitary < 1e-12 && worst_compose < 1e-12 && worst_transition < 1e-12;
    return {"two_level_unitary algebra", ok,
            "unitarity " + fmt(worst_unitary) + ", composition " + fmt(worst_compose) +
                ", sin^2 law " + fmt(worst_transition)};
}

CheckResult check_norm_composition(Rng& rng) {
    const Mat3 h = conditional_hamiltonian(kRegime, true);
    const Propagator prop(h);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        State psi = State::Zero();
        for (int k = 0; k < 3; ++k)
            psi(k) = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
        psi.normalize();
        const double t1 = 0.5 * rng.uniform();
        const double t2 = 0.5 * rng.uniform();
        const State one_shot = prop.apply(psi, t1 + t2);
        State staged = prop.apply(psi, t1);
        const double n1 = staged.squaredNorm();
        staged.normalize();
        const double n2 = prop.apply(staged, t2).squaredNorm();
        worst = std::max(worst, std::abs(one_shot.squaredNorm() - n1 * n2));
    }
    return {"no-emission norm composition", worst < 1e-10, "max deviation " + fmt(worst)};
}

CheckResult check_enumeration(Rng& rng) {
    const double omega2 = 1.0;
    const double dt = 1.1;
    const std::size_t n = 6;
    const std::size_t n_strings = 1u << n;
    std::vector<double> probs(n_strings);
    double total = 0.0;
    for (std::size_t code = 0; code < n_strings; ++code) {
        ideal::OutcomeSequence seq;
        seq.dt = dt;
        for (std::size_t b = 0; b < n; ++b)
            seq.outcomes.push_back((code >> b) & 1 ? ideal::Outcome::A : ideal::Outcome::Perp);
        probs[code] = ideal::sequence_probability(seq, ground(), omega2);
        total += probs[code];
    }
    if (std::abs(total - 1.0) > 1e-12)
        return {"outcome-string enumeration", false, "probabilities sum to " + fmt(total)};

    const std::size_t samples = 200000;
    std::vector<std::size_t> counts(n_strings, 0);
    for (std::size_t s = 0; s < samples; ++s) {
        const auto seq = ideal::run_ideal_sequence(ground(), omega2, dt, n, rng);
        std::size_t code = 0;
        for (std::size_t b = 0; b < n; ++b)
            if (seq.outcomes[b] == ideal::Outcome::A) code |= (1u << b);
        ++counts[code];
    }
    double worst_z = 0.0;
    for (std::size_t code = 0; code < n_strings; ++code) {
        const double se =
            std::sqrt(std::max(probs[code] * (1.0 - probs[code]), 1e-12) / samples);
        worst_z = std::max(worst_z,
                           std::abs(counts[code] / static_cast<double>(samples) - probs[code]) / se);
    }
    // 64 simultaneous comparisons: allow 4.5 sigma on the worst one.
    return {"outcome-string enumeration", worst_z < 4.5, "worst |z| = " + fmt(worst_z)};
}

CheckResult check_ideal_periods(Rng& rng) {
    const double omega2 = 1.0;
    const double dt = kPi / 2.0;
    const auto seq = ideal::run_ideal_sequence(ground(), omega2, dt, 200000, rng);
    const auto stats = ideal::period_stats(seq);
    const double expect = ideal::mean_period_exact(omega2, dt);
    const double za = (stats.mean_a - expect) / stats.se_a;
    const double zp = (stats.mean_perp - expect) / stats.se_perp;

    std::vector<std::size_t> runs;
    std::size_t len = 1;
    for (std::size_t i = 1; i < seq.outcomes.size(); ++i) {
        if (seq.outcomes[i] == seq.outcomes[i - 1]) {
            ++len;
        } else {
            runs.push_back(len);
            len = 1;
        }
    }
    runs.push_back(len);
    if (runs.size() > 2) runs = {runs.begin() + 1, runs.end() - 1};  // censor the ends
    const auto fit = stats::fit_geometric(runs);
    const bool ok = std::abs(za) < 3.5 && std::abs(zp) < 3.5 && fit.p_value > 0.01;
    return {"ideal period statistics", ok,
            "z_a " + fmt(za) + ", z_perp " + fmt(zp) + ", geometric GOF p " + fmt(fit.p_value)};
}

CheckResult check_transition_probs(bool mutate) {
    // Independent re-evaluation in long double; the mutation fixture flips
    // the sign of the decay-ratio term to prove the check detects faults.
    const VSystemParams& par = kRegime;
    const long double dt = 1.0L, dtp = 1.0L;
    const long double a2 = static_cast<long double>(par.a3) * par.a3;
    const long double o2 = static_cast<long double>(par.omega3) * par.omega3;
    const long double eps_p = par.omega2 * par.a3 / o2;
    const long double eps_a = par.omega2 / par.a3;
    const long double c = std::cos(par.omega2 * dt);
    const long double s = std::sin(par.omega2 * dt);
    const long double denom = a2 + 2.0L * o2;
    long double eps_a_term = -0.5L * eps_a * s * o2 / denom;
    if (mutate) eps_a_term = -eps_a_term;
    const long double p_ref = 0.5L * (1.0L - c) +
                              eps_p * (2.0L * s * (a2 + o2) / denom +
                                       0.5L * par.omega2 * dtp * c * (3.0L * a2 + 2.0L * o2) / denom -
                                       0.5L * par.omega2 * dtp) +
                              eps_a_term;
    const long double q_ref =
        0.5L * (1.0L + c) - eps_p * (2.0L * s + 0.5L * par.omega2 * dtp * (1.0L + c));

    const auto probs = analytics::transition_probs(par, 1.0, 1.0);
    const double dp = std::abs(probs.p - static_cast<double>(p_ref));
    const double dq = std::abs(probs.q - static_cast<double>(q_ref));

    // The closed-form periods must equal their defining geometric series.
    const auto periods = analytics::mean_periods(probs, 1.0, 1.0);
    double series_light = 0.0, series_dark = 0.0;
    for (int n = 1; n <= 200; ++n) {
        series_light += 2.0 * n * std::pow(1.0 - probs.p, n - 1) * probs.p;
        series_dark += 2.0 * n * std::pow(probs.q, n - 1) * (1.0 - probs.q);
    }
    const double ds = std::max(std::abs(series_light - periods.t_light),
                               std::abs(series_dark - periods.t_dark));
    const bool ok = dp < 1e-14 && dq < 1e-14 && ds < 1e-10;
    return {"transition probabilities vs reference", ok,
            "dp " + fmt(dp) + ", dq " + fmt(dq) + ", geometric series " + fmt(ds)};
}

CheckResult check_master_equation() {
    const VSystemParams par{1.0, 40.0, 20.0};
    const std::vector<double> grid{2.0};
    const std::vector<bloch::Segment> segs{{2.0, true}};
    Mat3 rho0 = Mat3::Zero();
    rho0(0, 0) = 1.0;
    const auto coarse = bloch::integrate_master(rho0, par, segs, grid);

    // Step halving: fixed-step RK4 should agree to ~h^4.
    const double h = std::min({1.0 / par.a3, 1.0 / par.omega3, 2.0 * kPi / par.omega2}) / 200.0;
    const auto fine = bloch::integrate_master(rho0, par, segs, grid, 0.5 * h);
    const double self = (coarse[0].rho - fine[0].rho).cwiseAbs().maxCoeff();

    // Long-time state against the Liouvillian null space (independent
    // 9x9 linear-algebra route). The slowest relaxation is the light/dark
    // equilibration, 1/(1/T_L + 1/T_D) ~ 72 time units here, so run a few
    // hundred units before calling it stationary.
    const std::vector<double> grid_long{450.0};
    const std::vector<bloch::Segment> segs_long{{450.0, true}};
    const auto late = bloch::integrate_master(rho0, par, segs_long, grid_long);
    Eigen::MatrixXcd liouville(9, 9);
    for (int col = 0; col < 9; ++col) {
        Mat3 basis = Mat3::Zero();
        basis(col % 3, col / 3) = 1.0;
        const Mat3 image = bloch::lindblad_rhs(basis, par, true);
        for (int row = 0; row < 9; ++row) liouville(row, col) = image(row % 3, row / 3);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(liouville, Eigen::ComputeFullV);
    const Eigen::VectorXcd null_vec = svd.matrixV().col(8);
    Mat3 steady;
    for (int k = 0; k < 9; ++k) steady(k % 3, k / 3) = null_vec(k);
    steady /= steady.trace();
    const double dev_steady = (late[0].rho - steady).cwiseAbs().maxCoeff();

    const bool ok = self < 1e-8 && dev_steady < 1e-3;
    return {"master equation integration", ok,
            "step-halving " + fmt(self) + ", null-space steady state " + fmt(dev_steady)};
}

CheckResult check_waiting_times(Rng& rng) {
    // Pure decay: omega2 tiny (zero is rejected by validation), probe off,
    // start in |3>; waiting times must be exponential with rate a3.
    const VSystemParams par{1e-12, 40.0, 20.0};
    const JumpEngine engine(par);
    std::vector<double> cdf;
    for (int i = 0; i < 4000; ++i) {
        std::vector<double> jumps;
        engine.simulate_gap(excited(), 100.0 / par.a3, rng, &jumps);
        if (jumps.size() == 1) cdf.push_back(1.0 - std::exp(-par.a3 * jumps[0]));
    }
    if (cdf.size() != 4000)
        return {"decay waiting-time distribution", false,
                "expected exactly one jump per run, lost " + fmt(4000.0 - cdf.size())};
    const auto ks = stats::ks_test(std::move(cdf));
    return {"decay waiting-time distribution", ks.p_value > 0.01,
            "KS D " + fmt(ks.d) + ", p " + fmt(ks.p_value)};
}

CheckResult check_unraveling_scaling(const Options& options) {
    const VSystemParams par = kRegime;
    PulseSchedule schedule;
    schedule.gap = 0.0;
    schedule.total_duration = 1.0;
    std::vector<double> grid;
    for (int i = 0; i <= 20; ++i) grid.push_back(i * 0.05);
    Mat3 rho0 = Mat3::Zero();
    rho0(0, 0) = 1.0;
    const auto master = bloch::integrate_master(
        rho0, par, std::vector<bloch::Segment>{{1.0, true}}, grid);

    const JumpEngine engine(par);
    std::vector<double> log_n, log_dev;
    std::uint64_t stream = 0;
    for (std::size_t n : {100u, 400u, 1600u}) {
        std::vector<std::vector<Mat3>> partial(n);
        std::vector<std::uint64_t> streams(n);
        for (std::size_t i = 0; i < n; ++i) streams[i] = stream++;
        run_indexed(
            n,
            [&](std::size_t i) {
                Rng traj_rng = Rng::for_stream(options.seed + 77, streams[i]);
                engine.run_sampled(schedule, traj_rng, grid, partial[i]);
            },
            options.threads);
        std::vector<Mat3> avg(grid.size(), Mat3::Zero());
        for (const auto& contribution : partial)
            for (std::size_t g = 0; g < grid.size(); ++g) avg[g] += contribution[g];
        for (auto& m : avg) m /= static_cast<double>(n);
        const auto cmp = bloch::compare_unraveling(avg, master, n);
        if (!cmp.within_bound())
            return {"unraveling N^{-1/2} scaling", false,
                    "deviation " + fmt(cmp.max_deviation) + " over bound " + fmt(cmp.bound)};
        log_n.push_back(std::log(static_cast<double>(n)));
        log_dev.push_back(std::log(cmp.max_deviation));
    }
    const double slope = stats::regression_slope(log_n, log_dev);
    return {"unraveling N^{-1/2} scaling", std::abs(slope + 0.5) < 0.15,
            "log-log slope " + fmt(slope)};
}

CheckResult check_record_roundtrip(Rng& rng, const Options& options) {
    EmissionRecord record;
    record.params = kRegime;
    record.schedule = {1.0, 1.0, 50, 0.0};
    double t = 0.0;
    for (int i = 0; i < 300; ++i) {
        t += 0.7 * rng.uniform() + 1e-6;
        if (t >= record.schedule.duration()) break;
        record.jump_times.push_back(t);
        record.pulse_index.push_back(static_cast<std::int64_t>(t / record.schedule.cycle()));
    }
    const std::string csv = io::record_to_csv(record);
    const auto back = io::record_from_csv(csv);
    bool ok = back.jump_times == record.jump_times && back.pulse_index == record.pulse_index;
    std::string detail = ok ? "bit-exact" : "round-trip mismatch";
    if (!options.record_path.empty()) {
        const auto text = io::read_file(options.record_path);
        const auto parsed = io::record_from_csv(text);  // throws ParseError on corruption
        detail += "; validated " + options.record_path + " (" +
                  std::to_string(parsed.jump_times.size()) + " jumps)";
    }
    return {"emission record round-trip", ok, detail};
}

}  // namespace

std::vector<CheckResult> run_all(const Options& options) {
    Rng rng(options.seed);
    std::vector<CheckResult> results;
    results.push_back(check_unitary_algebra(rng));
    results.push_back(check_norm_composition(rng));
    results.push_back(check_enumeration(rng));
    results.push_back(check_ideal_periods(rng));
    results.push_back(check_transition_probs(options.mutate_pq));
    results.push_back(check_master_equation());
    results.push_back(check_waiting_times(rng));
    results.push_back(check_unraveling_scaling(options));
    results.push_back(check_record_roundtrip(rng, options));
    return results;
}

}  // namespace vzeno::verify
